#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forge {

enum class Kind : std::uint8_t { B1, B2, S4, H2, H4 };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& s);
int kind_valency(Kind k);
inline bool is_boundary(Kind k) { return k == Kind::B1 || k == Kind::B2; }
inline bool is_h(Kind k) { return k == Kind::H2 || k == Kind::H4; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when a construction would exceed a configured size cap.
struct ResourceError : Error {
  using Error::Error;
};

struct Edge {
  int a;
  int b;
};

// Multigraph with dense vertex ids 0..n-1 and edge ids 0..m-1.
class CGraph {
 public:
  int add_vertex(Kind k);
  int add_edge(int a, int b);

  int num_vertices() const { return static_cast<int>(kind_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  Kind kind(int v) const { return kind_[v]; }
  void set_kind(int v, Kind k) { kind_[v] = k; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& incident(int v) const { return inc_[v]; }
  int valency(int v) const { return static_cast<int>(inc_[v].size()); }
  int other(int e, int v) const { return edges_[e].a == v ? edges_[e].b : edges_[e].a; }

  std::optional<int> pointing;

 private:
  std::vector<Kind> kind_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> inc_;
};

struct Violation {
  std::string what;
  std::string where;  // "v3", "e7", ...
};
using Report = std::vector<Violation>;
std::string report_text(const Report& r);

Report validate(const CGraph& g);
int num_components(const CGraph& g);
int betti(const CGraph& g);
std::vector<int> bfs_dist(const CGraph& g, const std::vector<int>& roots);

// Induced subgraph on a vertex subset; local ids follow the order of `verts`.
struct Induced {
  CGraph g;
  std::vector<int> to_host_v;
  std::vector<int> to_host_e;
};
// Boundary vertices get B1/B2 from their induced valency; other kinds kept.
Induced induced(const CGraph& host, const std::vector<int>& verts);

CGraph ball(const CGraph& g, int v, int r);
Induced ball_induced(const CGraph& g, int v, int r);
bool is_c_subgraph(const CGraph& g, const std::vector<int>& verts);
bool hom_nontrivial(const CGraph& g, const std::vector<int>& verts);
std::vector<int> interior(const CGraph& g);

// Vertex and edge maps of a C-inclusion; graphs held by the caller.
struct CInclusion {
  std::vector<int> vmap;
  std::vector<int> emap;
};
Report validate_inclusion(const CGraph& src, const CGraph& dst, const CInclusion& i);
CInclusion identity_inclusion(const CGraph& g);
CInclusion compose(const CInclusion& first, const CInclusion& second);

enum class Piece : std::uint8_t { H2, S, H4 };
const char* piece_name(Piece p);
Piece piece_from_name(const std::string& s);
Kind piece_center(Piece p);
int piece_contacts(Piece p);

CGraph basic_piece(Piece p);

struct ElementaryStep {
  Piece kind;
  std::vector<int> attach;  // ids in the source graph
};

struct Attached {
  CGraph g;
  CInclusion inc;  // identity on old ids
  int center;
};
Attached attach_piece(const CGraph& h, const ElementaryStep& step);

// A peel step in target ids: the piece centered at `center` meets the
// previously built part at `attach`.
struct PeelStep {
  Piece kind;
  int center;
  std::vector<int> attach;
};
// nullopt when no elementary factorization exists.
std::optional<std::vector<PeelStep>> peel_decomposition(const CGraph& src, const CGraph& dst,
                                                        const CInclusion& inc);
// Rebuild by attach_piece; returns the final graph and the map target->replayed.
struct Replay {
  CGraph g;
  std::vector<int> from_target_v;
};
Replay replay_peel(const CGraph& src, const CGraph& dst, const CInclusion& inc,
                   const std::vector<PeelStep>& steps);

std::string canonical_form(const CGraph& g);
bool is_isomorphic(const CGraph& a, const CGraph& b);

CGraph figure_eight();
CGraph relabel(const CGraph& g, const std::vector<int>& vperm, const std::vector<int>& eperm);

}  // namespace forge

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "forge/cgraph.hpp"

namespace forge {

using GraphPtr = std::shared_ptr<const CGraph>;

// Covering map total -> base. Covers built here by disjoint_cover followed by
// surgeries keep the sheet layout: copy k of base vertex v is total vertex
// k*|V(base)|+v, and likewise for edges.
struct CoveringMap {
  GraphPtr base;
  GraphPtr total;
  std::vector<int> vmap;
  std::vector<int> emap;
  std::vector<int> copy;  // copy label per total vertex, -1 when not sheeted

  int degree() const;
  bool sheeted() const;
  int sheet_vertex(int v, int k) const;
  int sheet_edge(int e, int k) const;
};

Report validate_covering(const CoveringMap& p);
CoveringMap identity_cover(GraphPtr g);
CoveringMap disjoint_cover(GraphPtr base, int n);
CoveringMap compose(const CoveringMap& p, const CoveringMap& q);  // q after p

// The edge at base b2 vertex a carrying the "-" side: the smaller edge id.
int minus_edge(const CGraph& base, int a);

struct CutResult {
  CGraph g;
  std::vector<int> fold_v;  // cut vertex -> original vertex
  std::vector<int> fold_e;
  // per entry of X: {minus half, plus half} in the cut graph
  std::vector<std::array<int, 2>> halves;
};
// minus_of(x) returns which incident edge of x is the minus side; defaults to
// the smaller edge id.
CutResult cut(const CGraph& g, const std::vector<int>& X, const std::vector<int>& minus_of = {});

CoveringMap surgery(const CoveringMap& p0, const std::vector<int>& X);
CoveringMap cyclic_surgery(GraphPtr g, int a, int n);

int find_nondisconnecting_b2(const CGraph& g, const std::vector<int>& component);
std::vector<char> bridges(const CGraph& g);

bool connected(const CGraph& g);

// Lift of a subgraph (vertex list in base) into sheet k. Boundary vertices
// follow the lifted edges of the subgraph, so cut sheets are handled.
struct Lift {
  std::vector<int> v;  // aligned with the input vertex list
  std::vector<int> e;  // aligned with induced edge list (host edge ids, sorted)
  std::vector<int> base_edges;
};
std::optional<Lift> lift_into_sheet(const CoveringMap& p, const std::vector<int>& verts, int k);

}  // namespace forge

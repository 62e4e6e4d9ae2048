#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/cgraph.hpp"
#include "forge/collapse.hpp"

namespace forge {

// A pair (K0, K1) presented by a finite automaton: K1 is the space of
// infinite state sequences from `start`, K0 those that stay inside the
// sub-automaton A0.
struct PairSpec {
  int start = 0;
  std::vector<std::vector<int>> succ;   // sorted, no duplicates
  std::vector<char> k0_state;
  std::vector<std::vector<char>> k0_edge;  // k0_edge[a][b]
  std::vector<std::string> names;       // external state ids

  // derived
  std::vector<std::uint64_t> rays;      // continuations per state, kInfinite if infinite
  std::vector<char> in_d;               // forward closure has out-degree 1 everywhere

  static constexpr std::uint64_t kInfinite = ~std::uint64_t(0);
  int num_states() const { return (int)succ.size(); }
  bool k0_step(int a, int b) const { return k0_state[a] && k0_state[b] && k0_edge[a][b]; }
};
using SpecPtr = std::shared_ptr<const PairSpec>;

// Validates and fills the derived tables. Throws Error on bad input.
SpecPtr make_pair_spec(int n, int start, const std::vector<std::pair<int, int>>& edges,
                       const std::vector<int>& k0_states,
                       const std::vector<std::pair<int, int>>& k0_edges);

using Cylinder = std::vector<int>;  // states visited, first is start

class ClopenSet {
 public:
  ClopenSet() = default;
  ClopenSet(SpecPtr spec, std::vector<Cylinder> cyl);  // canonicalizes
  static ClopenSet whole(SpecPtr spec);
  static ClopenSet empty(SpecPtr spec) { return ClopenSet(std::move(spec), {}); }

  const SpecPtr& spec() const { return spec_; }
  const std::vector<Cylinder>& cylinders() const { return cyl_; }
  bool operator==(const ClopenSet& o) const { return spec_ == o.spec_ && cyl_ == o.cyl_; }
  bool operator<(const ClopenSet& o) const { return cyl_ < o.cyl_; }

 private:
  SpecPtr spec_;
  std::vector<Cylinder> cyl_;  // maximal cylinders, lexicographic
};

ClopenSet intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet unite(const ClopenSet& a, const ClopenSet& b);
ClopenSet subtract(const ClopenSet& a, const ClopenSet& b);
bool is_empty(const ClopenSet& a);
bool is_finite(const ClopenSet& a);
bool is_singleton(const ClopenSet& a);
bool meets_K0(const ClopenSet& a);
bool subset(const ClopenSet& a, const ClopenSet& b);
std::uint64_t point_count(const ClopenSet& a);  // kInfinite when infinite
// Every isolated point of a, as singleton sets (a must be finite).
std::vector<ClopenSet> singletons(const ClopenSet& a);
// Some isolated point of a, if there is one.
std::optional<ClopenSet> isolated_point(const ClopenSet& a);
// k pairwise disjoint infinite pieces covering a, or nullopt.
std::optional<std::vector<ClopenSet>> split_infinite(const ClopenSet& a, int k);
std::string clopen_text(const ClopenSet& a);

bool condition_star(const PairSpec& spec);
bool k1_infinite(const PairSpec& spec);

using Partition = std::vector<ClopenSet>;

struct PartitionSeq {
  std::vector<Partition> floors;
  std::vector<int> checkpoints;  // k_n: floor index where mu_n is refined
  bool truncated = false;        // stopped at a floor cap, last floor not closed
};

// depth-n cylinder partition (paths with n edges)
Partition prefix_partition(SpecPtr spec, int n);
std::vector<std::string> partition_problems(const Partition& p);
// fine refines coarse: each member of fine sits inside one member of coarse.
bool refines(const Partition& coarse, const Partition& fine);
// index of the member of p containing b, or -1
int parent_index(const Partition& p, const ClopenSet& b);

std::vector<Partition> split3(const ClopenSet& a, int n);

struct LemmaResult {
  PartitionSeq seq;                     // xi_0 .. xi_{N+1}
  std::vector<Partition> eta;           // joint pre-partitions eta_0 .. eta_N
  std::vector<std::pair<ClopenSet, int>> minimal;  // P with depth o
};

LemmaResult partition_lemma(const Partition& xi, const Partition& mu, int max_floor = 1 << 20);
// Audit of the increasing/ternary/K0/refinement/singleton rules.
std::vector<std::string> audit_lemma(const PartitionSeq& s, const Partition& mu);

struct AdaptOptions {
  bool four = false;      // #xi_1 = 4 when K1 allows
  int min_floors = 0;     // keep iterating until this many floors exist
  int max_floor = 1 << 20;
};
PartitionSeq adapted_sequence(SpecPtr spec, int horizon, const AdaptOptions& opt = {});
std::vector<std::string> audit_adapted(const PartitionSeq& s);

struct Gxi {
  CGraph g;
  std::vector<int> floor_of;           // per vertex; -1 for midpoints
  std::vector<int> member_of;          // index in its floor; -1 for midpoints
  std::vector<std::vector<int>> node;  // node[i][j] = vertex of member j of floor i
  std::vector<int> tips;               // B1 vertex per member of floor n
};
// Nodes for floors 0..n-1, open ends at the members of floor n.
Gxi build_Gxi(const PartitionSeq& seq, int n);
std::vector<std::string> ends_match_audit(const PartitionSeq& seq, int n);

// Ball of radius 2n+1 in the k-ended graph built from h2-rays, tridents
// and (for odd k) one h4-chain end.
CGraph finite_ends_graph(int k, int n);

}  // namespace forge

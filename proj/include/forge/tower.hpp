#pragma once

#include <string>
#include <vector>

#include "forge/cgraph.hpp"
#include "forge/collapse.hpp"
#include "forge/covering.hpp"
#include "forge/forest.hpp"

namespace forge {

// A subgraph of a host graph is a vertex list; its graph is induced(host, list)
// so local vertex ids follow list order.
using VertexList = std::vector<int>;

struct SeedBase {
  CoveringMap cover;                 // Gamma_0 -> figure eight
  std::vector<VertexList> regions;   // h2, s, h4 order
  std::vector<Collapse> collapses;   // onto basic_piece(H2 / S / H4)
  std::vector<Piece> kinds;
};
const SeedBase& seed_base();

struct Realization {
  CoveringMap p;
  VertexList g_hat;                 // j(G) first, aligned with G, then the new part
  std::vector<VertexList> g0_hat;   // lifts of each G0 part
  int sheet = 0;                    // sheet carrying j(G) and the G0 lifts
  Collapse f_hat;                   // onto the given target
  int a0 = -1;                      // Case 3 choice in Gamma, else -1
};

// Collapse f : G -> H is transported to f_hat : G_hat -> target, where
// inc : H -> target is the elementary inclusion for `step`.
Realization elementary_realization(GraphPtr gamma, const VertexList& G, const std::vector<VertexList>& G0,
                                   const Collapse& f, const ElementaryStep& step, const CGraph& target,
                                   const CInclusion& inc);
// Convenience form with target = attach_piece(H, step).
Realization elementary_realization(GraphPtr gamma, const VertexList& G, const std::vector<VertexList>& G0,
                                   const Collapse& f, const ElementaryStep& step);

struct Replication {
  CoveringMap p;
  std::vector<std::vector<VertexList>> lifts;  // lifts[k][l], aligned with G_k
};
Replication replicate(GraphPtr gamma, const std::vector<VertexList>& G, const std::vector<int>& m);

// f transported along a 1:1 lift (aligned lists) through q : new -> old.
Collapse transport_collapse(const Collapse& f, const CGraph& old_host, const VertexList& old_verts,
                            const CoveringMap& q, const VertexList& new_verts);

struct RealizedForest {
  Decomposed dec;
  CoveringMap base;                 // Gamma_0 -> figure eight
  std::vector<GraphPtr> gamma;      // Gamma_0 .. Gamma_N
  std::vector<CoveringMap> q;       // q[n] : Gamma_{n+1} -> Gamma_n
  std::vector<VertexList> host;     // per decomposed vertex; empty beyond depth
  std::vector<Collapse> f;          // per decomposed vertex
  std::vector<std::vector<int>> j;  // per decomposed edge: local map G_o -> G_t
  std::vector<int> a0;              // per transition, Case 3 choice or -1
  int depth = 0;                    // realized decomposed floors 0..depth

  long long vertices() const { return gamma.empty() ? 0 : gamma.back()->num_vertices(); }
};

struct RealizeOptions {
  long long max_vertices = 3'000'000;  // cap on |V(Gamma_n)|
};

// Realizes decomposed floors 0..N (fewer when the decomposition is shorter).
// Roots must be basic pieces; repeated kinds are hosted after replicating the seed.
RealizedForest realize_forest(const CGraphForest& h, const SeedBase& seed, int N,
                              const RealizeOptions& opt = {});
// Largest N for which realize_forest stays under the cap, computed from degrees.
int achievable_depth(const CGraphForest& h, const SeedBase& seed, int max_n, const RealizeOptions& opt = {});

Report validate_realization(const RealizedForest& rf);

// G with truncated trees of s-pieces glued at its B1 vertices to depth r.
CGraph thicken_T(const CGraph& g, int r);
// The 4-regular s-piece tree around one vertex, radius 2*depth+1.
CGraph t_star_truncation(int depth);

struct Variation {
  CoveringMap p;
  std::vector<VertexList> g_hat;    // one per thickened subgraph; lift of G first
  std::vector<VertexList> g0_hat;
  VertexList f_hat;                 // connected, betti m; empty when m = 0 and allowed
  int sheets = 0;
};
// Thickens every G in `gs` to T(G,1) and adds F_hat with betti m in a fresh sheet.
Variation variation_realization(GraphPtr gamma, const std::vector<VertexList>& gs,
                                const std::vector<VertexList>& G0, int m, int max_sheets = 64);

struct ExtendedTower {
  RealizedForest rf;
  // fam[n][i-1] = G_{i,n} in Gamma_n, i = 1..n
  std::vector<std::vector<VertexList>> fam;
};
ExtendedTower extended_tower(const CGraphForest& h, const SeedBase& seed, int N,
                             const RealizeOptions& opt = {});
Report validate_extended(const ExtendedTower& t);

struct LeafFloor {
  int floor = 0;
  CGraph g;
  int betti = 0;
  FiniteEndsTree ends;
  int branches = 0;
  bool nested = true;  // previous floor embeds via the recorded lift
};
struct LeafReport {
  std::string ray;
  std::vector<LeafFloor> floors;
  int genus = 0;          // betti of the last floor
  bool ends_hom = false;  // some end region of the last floor carries homology
};
// ray: decomposed vertices v_0 .. v_k along forest edges.
LeafReport leaf_report(const RealizedForest& rf, const std::vector<int>& ray);
LeafReport family_leaf_report(const ExtendedTower& t, int i);

}  // namespace forge

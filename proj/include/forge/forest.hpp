#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "forge/cgraph.hpp"
#include "forge/covering.hpp"

namespace forge {

using InclusionPtr = std::shared_ptr<const CInclusion>;

struct ForestEdge {
  int o = -1;
  int t = -1;
  InclusionPtr inc;
  std::optional<std::vector<PeelStep>> witness;
};

// Graded forest of C-graphs. Floors 0..top; the top floor is open.
struct CGraphForest {
  std::vector<int> floor;
  std::vector<GraphPtr> graphs;
  std::vector<ForestEdge> edges;
  int top = 0;

  int add_vertex(int fl, GraphPtr g);
  int add_edge(int o, int t, InclusionPtr inc, std::optional<std::vector<PeelStep>> w = std::nullopt);
  int num_vertices() const { return static_cast<int>(floor.size()); }
  std::vector<int> at_floor(int n) const;
  std::vector<int> out_edges(int v) const;
  int in_edge(int v) const;  // -1 for roots
};

Report validate_forest(const CGraphForest& h);
Report validate_cgraph_forest(const CGraphForest& h);

CGraphForest sigma_compose(const CGraphForest& h, const std::vector<int>& sigma);

struct FloorStep {
  bool elementary = false;
  int edge = -1;             // the elementary edge e_* when elementary
  ElementaryStep step;       // in source-graph ids
};

struct Decomposed {
  CGraphForest forest;
  std::vector<int> sigma;          // original floor -> decomposed floor
  std::vector<int> vertex_of;      // original vertex -> decomposed vertex (on sigma floors)
  std::vector<FloorStep> steps;    // per decomposed transition n -> n+1
  bool truncated = false;
};
// max_floor bounds the decomposed floors produced (the rest is dropped).
Decomposed elementary_decomposition(const CGraphForest& h,
                                    int max_floor = std::numeric_limits<int>::max());

struct Truncation {
  CGraph g;
  CInclusion from_root;
};
Truncation limit_truncation(const CGraphForest& h, const std::vector<int>& ray, int n);

bool family_c_check(const CGraph& g, int n, std::string* why = nullptr);

// Children of a pointed ball: all shell extensions up to isomorphism.
std::vector<CGraph> shell_extensions(const CGraph& ball);
CGraphForest universal_forest(int n, long long max_vertices = 200000);

// Ray forest: floor k holds the ball of radius 2k+1 around the pointing.
CGraphForest ball_chain(const CGraph& g, int n);

}  // namespace forge

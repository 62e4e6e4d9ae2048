#pragma once

#include <string>
#include <vector>

#include "forge/cgraph.hpp"

namespace forge {

// Quotient G -> H crushing each family member to one h-vertex.
struct Collapse {
  CGraph source;
  CGraph target;
  std::vector<std::vector<int>> family;
  std::vector<int> vmap;
  std::vector<int> emap;  // -1 for edges inside a member
};

Collapse quotient_by_family(const CGraph& g, const std::vector<std::vector<int>>& family);
Collapse identity_collapse(const CGraph& g);
Report validate_collapse(const Collapse& c);
std::vector<int> preimage_component(const Collapse& c, const std::vector<int>& target_set);

struct EndsNode {
  int level = 0;
  int parent = -1;
  bool hom = false;
  int size = 0;
  std::vector<int> children;
};

struct FiniteEndsTree {
  int depth = 0;
  std::vector<EndsNode> nodes;  // node 0 is the root (the whole graph)
  std::vector<int> pruned;      // bounded components dropped, per level
  std::vector<int> roots;
  int branches() const;         // nodes on the deepest level
  int count_at(int level) const;
  std::string encode() const;
};

// Level i nodes are the components of g minus the ball of radius i around
// roots that still reach a frontier (B1) vertex.
FiniteEndsTree ends_tree(const CGraph& g, const std::vector<int>& roots, int depth);
// Same with an explicit exhaustion: removed[i-1][v] marks K_i.
FiniteEndsTree ends_tree_exhaustion(const CGraph& g, const std::vector<std::vector<char>>& removed);
bool ends_trees_equivalent(const FiniteEndsTree& a, const FiniteEndsTree& b);

}  // namespace forge

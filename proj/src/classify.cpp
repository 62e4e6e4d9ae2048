#include "forge/classify.hpp"

#include <algorithm>

namespace forge {

bool ClassifyingTriple::e0_nonempty() const {
  if (pair) return meets_K0(ClopenSet::whole(pair));
  return ends_hom > 0;
}

bool ClassifyingTriple::e_nonempty() const {
  if (pair) return k1_infinite(*pair) || point_count(ClopenSet::whole(pair)) > 0;
  return ends > 0;
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    default: return "undetermined";
  }
}

Report check_triple(const ClassifyingTriple& t) {
  Report r;
  if (t.genus && *t.genus < 0) r.push_back({"negative genus", "g"});
  if (!t.pair && !t.tree) r.push_back({"no ends data", "E"});
  bool e0 = t.e0_nonempty();
  if (t.genus && e0) r.push_back({"finite genus with ends accumulated by genus", "g"});
  if (!t.genus && !e0) r.push_back({"infinite genus without an end accumulated by genus", "g"});
  if (t.tree) {
    if (t.ends != t.tree->branches()) r.push_back({"branch count disagrees with the tree", "E"});
    if (t.ends_hom > t.ends) r.push_back({"more genus ends than ends", "E0"});
  }
  return r;
}

Tri condition_star_triple(const ClassifyingTriple& t) {
  if (!t.pair) return Tri::Undetermined;
  return condition_star(*t.pair) ? Tri::True : Tri::False;
}

ClassifyingTriple triple_of_pair(SpecPtr pair, std::optional<int> genus) {
  ClassifyingTriple t;
  t.pair = std::move(pair);
  bool e0 = meets_K0(ClopenSet::whole(t.pair));
  t.genus = e0 ? std::nullopt : std::optional<int>(genus.value_or(0));
  return t;
}

ClassifyingTriple surface_triple_of_graph(const LeafReport& r, int window) {
  if (r.floors.empty()) throw Error("empty leaf report");
  ClassifyingTriple t;
  const LeafFloor& last = r.floors.back();
  t.tree = last.ends;
  t.depth = last.ends.depth;
  t.ends = last.ends.branches();
  int hom = 0;
  for (const auto& nd : last.ends.nodes)
    if (nd.level == last.ends.depth && nd.hom) ++hom;
  // strict betti growth over the last `window` floors reads as infinite genus,
  // provided the new homology sits in the deepest end regions
  int w = std::min<int>(window, (int)r.floors.size() - 1);
  bool growing = w > 0;
  for (int k = (int)r.floors.size() - w; k < (int)r.floors.size() && growing; ++k)
    growing = r.floors[k].betti > r.floors[k - 1].betti;
  if (growing && hom > 0) {
    t.genus_from_trend = true;
    t.ends_hom = hom;
  } else {
    // finite genus: homology is compactly supported, no end carries it
    t.genus = last.betti;
  }
  return t;
}

std::string triple_text(const ClassifyingTriple& t) {
  std::string g = t.genus ? std::to_string(*t.genus) : std::string("inf");
  if (t.pair) return "(" + g + ", K0, K1) star=" + tri_name(condition_star_triple(t));
  return "(" + g + ", " + std::to_string(t.ends_hom) + " of " + std::to_string(t.ends) + " ends at depth " +
         std::to_string(t.depth) + ")";
}

}  // namespace forge

#pragma once

#include <optional>
#include <string>

#include "forge/cantor.hpp"
#include "forge/collapse.hpp"
#include "forge/tower.hpp"

namespace forge {

// (g, E0, E): genus plus an ends pair, either presented by an automaton or
// known only through a finite ends tree.
struct ClassifyingTriple {
  std::optional<int> genus;       // nullopt means infinite
  bool genus_from_trend = false;  // infinite genus inferred from betti growth
  SpecPtr pair;                   // K0 inside K1, when known exactly
  std::optional<FiniteEndsTree> tree;
  int depth = 0;                  // truncation depth of `tree`
  int ends = 0;                   // deepest-level branches of `tree`
  int ends_hom = 0;               // of which carry homology

  bool e0_nonempty() const;
  bool e_nonempty() const;
};

enum class Tri { False, True, Undetermined };
const char* tri_name(Tri t);

Report check_triple(const ClassifyingTriple& t);
Tri condition_star_triple(const ClassifyingTriple& t);
ClassifyingTriple triple_of_pair(SpecPtr pair, std::optional<int> genus = std::nullopt);
// Betti trend plus the deepest ends tree of a leaf report.
ClassifyingTriple surface_triple_of_graph(const LeafReport& r, int window = 3);
std::string triple_text(const ClassifyingTriple& t);

}  // namespace forge

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/io.hpp"

namespace forge {

struct PipelineOptions {
  int depth = 3;                  // G_xi floors, or finite-ends radius parameter
  int tower_floors = 2;           // decomposed floors realized in the tower
  std::uint64_t seed = 0;         // recorded in the manifest; the core is deterministic
  long long max_vertices = 3'000'000;
  std::optional<int> finite_ends;  // run on finite_ends_graph(k) instead of a pair
};

struct PipelineResult {
  SpecPtr spec;                    // null for the finite-ends variant
  PartitionSeq seq;
  CGraph leaf_model;               // G_xi or the finite-ends graph
  CGraphForest chain;
  ExtendedTower tower;
  LeafReport leaf;
  std::vector<std::string> audit;  // adapted-sequence and ends-match problems
  json report;
};

// Stages: 0 condition (*), 1 adapted sequence, 2 G_xi, 3 ball chain,
// 4 extended tower, 5 leaf report. Errors carry "stage k (name): ".
PipelineResult run_pipeline(SpecPtr spec, const PipelineOptions& opt);
void write_pipeline(const std::string& dir, const PipelineResult& r, const PipelineOptions& opt);

}  // namespace forge

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/cantor.hpp"
#include "forge/classify.hpp"
#include "forge/collapse.hpp"
#include "forge/covering.hpp"
#include "forge/forest.hpp"
#include "forge/tower.hpp"

namespace forge {

using json = nlohmann::json;

// Ids in files may be any integers; loading renumbers them densely in
// increasing order. `ids` receives the file ids in the new order.
struct IdMap {
  std::vector<long long> v;
  std::vector<long long> e;
};
json graph_to_json(const CGraph& g);
CGraph graph_from_json(const json& j, IdMap* ids = nullptr);

// Total graph fields at top level, "base" embedded, vmap/emap keyed by id.
json covering_to_json(const CoveringMap& p);
CoveringMap covering_from_json(const json& j);

json collapse_to_json(const Collapse& c);
Collapse collapse_from_json(const json& j);

json forest_to_json(const CGraphForest& h);
CGraphForest forest_from_json(const json& j);

json pair_to_json(const PairSpec& s);
SpecPtr pair_from_json(const json& j);

json partition_seq_to_json(const PartitionSeq& s);
PartitionSeq partition_seq_from_json(const json& j, SpecPtr spec);

json triple_to_json(const ClassifyingTriple& t);
json leaf_report_to_json(const LeafReport& r);
// Floors come back without graphs; betti and ends data are enough to classify.
LeafReport leaf_report_from_json(const json& j);
json ends_tree_to_json(const FiniteEndsTree& t);
FiniteEndsTree ends_tree_from_json(const json& j);

std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(std::uint64_t h);
std::string graph_hash(const CGraph& g);

// Kind styling: boundary vertices white circles, s-vertices black circles,
// h-vertices squares.
std::string emit_dot(const CGraph& g, const std::string& name = "G");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);
json read_json(const std::string& path);

struct Manifest {
  std::string version = "1";
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> files;  // name, hash
  std::vector<std::string> ops;
  json notes = json::object();
};
json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const json& j);

// Directory with floor_<n>.json, cover_<n>.json, forest.json, subgraphs.json,
// collapses.json, families.json (extended towers) and manifest.json.
void write_tower(const std::string& dir, const ExtendedTower& t, Manifest m);
void write_tower(const std::string& dir, const RealizedForest& rf, Manifest m);
// Hash check of every listed file against the manifest.
Report verify_manifest(const std::string& dir);
ExtendedTower read_tower(const std::string& dir);

}  // namespace forge

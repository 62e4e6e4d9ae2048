#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "forge/io.hpp"
#include "testing.hpp"
#include "testing_cantor.hpp"
#include "testing_collapse.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

bool same_graph(const CGraph& a, const CGraph& b) {
  return graph_to_json(a) == graph_to_json(b);
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("forge_io_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("graph round trip") {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    CGraph g = testing::random_cgraph(rng, 2 + it % 7);
    if (it % 3 == 0 && g.num_vertices()) g.pointing = it % g.num_vertices();
    json j = graph_to_json(g);
    CGraph back = graph_from_json(json::parse(j.dump()));
    CHECK(same_graph(g, back));
    CHECK(back.pointing == g.pointing);
  }
}

TEST_CASE("sparse ids are renumbered in order") {
  json j = json::parse(R"({
    "vertices": [{"id": 40, "kind": "B1"}, {"id": 7, "kind": "S4"}, {"id": 12, "kind": "B1"},
                 {"id": 9, "kind": "B1"}, {"id": 100, "kind": "B1"}],
    "edges": [{"id": 5, "a": 7, "b": 40}, {"id": 2, "a": 7, "b": 12},
              {"id": 30, "a": 9, "b": 7}, {"id": 31, "a": 7, "b": 100}],
    "pointing": 7})");
  IdMap ids;
  CGraph g = graph_from_json(j, &ids);
  CHECK(ids.v == std::vector<long long>{7, 9, 12, 40, 100});
  CHECK(ids.e == std::vector<long long>{2, 5, 30, 31});
  CHECK(g.kind(0) == Kind::S4);
  CHECK(*g.pointing == 0);
  CHECK(g.edge(1).b == 3);  // edge 5 joins 7 and 40
  CHECK(validate(g).empty());
  CHECK(is_isomorphic(g, basic_piece(Piece::S)));
}

TEST_CASE("malformed graphs are rejected") {
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"vertices":[{"id":1,"kind":"B1"},{"id":1,"kind":"B1"}]})")),
                  Error);
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"vertices":[{"id":1,"kind":"B1"}],
                                                   "edges":[{"id":0,"a":1,"b":2}]})")),
                  Error);
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"vertices":[{"id":1,"kind":"q9"}]})")), Error);
  CHECK_THROWS(graph_from_json(json::parse(R"({"edges":[]})")));
}

TEST_CASE("covering round trip") {
  std::mt19937 rng(12);
  for (int it = 0; it < 40; ++it) {
    CoveringMap p = testing::random_cover(rng, 1 + it % 6, it % 2 == 0);
    if (it % 4 == 1) p = seed_base().cover;
    CoveringMap back = covering_from_json(json::parse(covering_to_json(p).dump()));
    CHECK(same_graph(*back.total, *p.total));
    CHECK(same_graph(*back.base, *p.base));
    CHECK(back.vmap == p.vmap);
    CHECK(back.emap == p.emap);
    CHECK(validate_covering(back).empty());
  }
}

TEST_CASE("covering with partial map is rejected") {
  CoveringMap p = disjoint_cover(testing::figure_eight_ptr(), 2);
  json j = covering_to_json(p);
  j["vmap"].erase("1");
  CHECK_THROWS_AS(covering_from_json(j), Error);
}

TEST_CASE("collapse round trip") {
  std::mt19937 rng(13);
  for (int it = 0; it < 40; ++it) {
    Collapse c = testing::random_collapse(rng, 1 + it % 4);
    Collapse back = collapse_from_json(json::parse(collapse_to_json(c).dump()));
    CHECK(same_graph(back.source, c.source));
    CHECK(same_graph(back.target, c.target));
    CHECK(back.family == c.family);
    CHECK(back.vmap == c.vmap);
    CHECK(back.emap == c.emap);
    CHECK(validate_collapse(back).empty());
  }
}

TEST_CASE("forest round trip keeps witnesses and shares graphs") {
  std::mt19937 rng(14);
  for (int it = 0; it < 20; ++it) {
    CGraphForest h = testing::chain_forest(rng, Piece(it % 3), 1 + it % 4);
    json j = forest_to_json(h);
    CGraphForest back = forest_from_json(json::parse(j.dump()));
    REQUIRE(back.num_vertices() == h.num_vertices());
    CHECK(back.floor == h.floor);
    CHECK(back.top == h.top);
    for (int v = 0; v < h.num_vertices(); ++v) CHECK(same_graph(*back.graphs[v], *h.graphs[v]));
    REQUIRE(back.edges.size() == h.edges.size());
    for (size_t e = 0; e < h.edges.size(); ++e) {
      CHECK(back.edges[e].inc->vmap == h.edges[e].inc->vmap);
      CHECK(back.edges[e].witness.has_value() == h.edges[e].witness.has_value());
    }
    CHECK(validate_cgraph_forest(back).empty());
    CHECK(forest_to_json(back) == j);
  }
  CGraphForest u = universal_forest(1);
  json ju = forest_to_json(u);
  CHECK(ju["graphs"].size() <= (size_t)u.num_vertices());
  CHECK(forest_to_json(forest_from_json(ju)) == ju);
}

TEST_CASE("pair spec round trip and names") {
  std::mt19937 rng(15);
  for (int it = 0; it < 60; ++it) {
    SpecPtr s = testing::random_pair_spec(rng, 1 + it % 6);
    json j = pair_to_json(*s);
    CHECK(j["states"][0].is_number_integer());
    SpecPtr back = pair_from_json(json::parse(j.dump()));
    CHECK(back->succ == s->succ);
    CHECK(back->k0_state == s->k0_state);
    CHECK(back->start == s->start);
    CHECK(condition_star(*back) == condition_star(*s));
    CHECK(pair_to_json(*back) == j);
  }
  json named = json::parse(R"({"states":["a","b"],"edges":[["a","b"],["b","b"],["a","a"]],
                               "start":"a","k0_states":["b"],"k0_edges":[["b","b"]]})");
  SpecPtr s = pair_from_json(named);
  CHECK(s->names == std::vector<std::string>{"a", "b"});
  CHECK(pair_to_json(*s)["states"][1] == "b");
  named["edges"].push_back({"a", "zz"});
  CHECK_THROWS_AS(pair_from_json(named), Error);
}

TEST_CASE("partition sequence round trip") {
  SpecPtr s = make_pair_spec(2, 0, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0}, {{0, 0}});
  PartitionSeq seq = adapted_sequence(s, 2, {.min_floors = 4, .max_floor = 4});
  json j = partition_seq_to_json(seq);
  PartitionSeq back = partition_seq_from_json(json::parse(j.dump()), s);
  REQUIRE(back.floors.size() == seq.floors.size());
  for (size_t i = 0; i < seq.floors.size(); ++i) CHECK(back.floors[i] == seq.floors[i]);
  CHECK(back.checkpoints == seq.checkpoints);
  CHECK(back.truncated == seq.truncated);
}

TEST_CASE("hash and dot") {
  CHECK(hash_hex(fnv1a("")) == "cbf29ce484222325");
  CHECK(hash_hex(fnv1a("a")) == "af63dc4c8601ec8c");
  CHECK(hash_hex(fnv1a("foobar")) == "85944171f73967e8");
  CGraph s = basic_piece(Piece::S);
  CHECK(graph_hash(s) == graph_hash(graph_from_json(graph_to_json(s))));
  CHECK(graph_hash(s) != graph_hash(basic_piece(Piece::H2)));
  std::string dot = emit_dot(basic_piece(Piece::H4), "h4");
  CHECK(dot.rfind("graph h4 {", 0) == 0);
  CHECK(dot.find("shape=square") != std::string::npos);
  CHECK(dot.find("fillcolor=white") != std::string::npos);
  CHECK(emit_dot(s).find("fillcolor=black") != std::string::npos);
}

TEST_CASE("manifest round trip") {
  Manifest m;
  m.seed = 77;
  m.files = {{"a.json", "0123456789abcdef"}};
  m.ops = {"build"};
  m.notes["depth"] = 2;
  Manifest back = manifest_from_json(json::parse(manifest_to_json(m).dump()));
  CHECK(back.seed == 77);
  CHECK(back.files == m.files);
  CHECK(back.ops == m.ops);
  CHECK(back.notes == m.notes);
}

TEST_CASE("tower directory round trip") {
  std::mt19937 rng(4);
  auto F = testing::chain_forest(rng, Piece::S, 1, 1);
  ExtendedTower t = extended_tower(F, seed_base(), 2);
  fs::path dir = scratch("tower");
  Manifest m;
  m.seed = 4;
  m.ops = {"extend"};
  write_tower(dir.string(), t, m);
  CHECK(verify_manifest(dir.string()).empty());

  ExtendedTower back = read_tower(dir.string());
  CHECK(back.fam == t.fam);
  REQUIRE(back.rf.gamma.size() == t.rf.gamma.size());
  for (size_t n = 0; n < t.rf.gamma.size(); ++n) CHECK(same_graph(*back.rf.gamma[n], *t.rf.gamma[n]));
  auto bad = validate_extended(back);
  CHECK_MESSAGE(bad.empty(), report_text(bad));
  auto bad2 = validate_realization(back.rf);
  CHECK_MESSAGE(bad2.empty(), report_text(bad2));

  // writing twice gives identical bytes
  fs::path dir2 = scratch("tower2");
  write_tower(dir2.string(), back, m);
  for (const auto& f : fs::directory_iterator(dir))
    CHECK(read_file(f.path().string()) == read_file((dir2 / f.path().filename()).string()));

  // tampering is detected
  write_file((dir / "floor_1.json").string(), "{}");
  auto tampered = verify_manifest(dir.string());
  REQUIRE(tampered.size() == 1);
  CHECK(tampered[0].where == "floor_1.json");
  CHECK_THROWS_AS(read_tower(dir.string()), Error);
  fs::remove(dir / "cover_0.json");
  CHECK(verify_manifest(dir.string()).size() == 2);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("realized forest writes without families") {
  std::mt19937 rng(5);
  auto F = testing::chain_forest(rng, Piece::H2, 2, 1);
  RealizedForest rf = realize_forest(F, seed_base(), 2);
  fs::path dir = scratch("rf");
  write_tower(dir.string(), rf, Manifest{});
  ExtendedTower back = read_tower(dir.string());
  CHECK(back.rf.depth == rf.depth);
  CHECK(back.rf.host == rf.host);
  CHECK(back.rf.j == rf.j);
  auto bad = validate_realization(back.rf);
  CHECK_MESSAGE(bad.empty(), report_text(bad));
  auto rep = leaf_report(back.rf, {0, 1, 2});
  json j = leaf_report_to_json(rep);
  CHECK(j["floors"].size() == 3);
  CHECK(j.contains("triple"));
  LeafReport back_rep = leaf_report_from_json(json::parse(j.dump()));
  REQUIRE(back_rep.floors.size() == rep.floors.size());
  for (size_t k = 0; k < rep.floors.size(); ++k) {
    CHECK(back_rep.floors[k].betti == rep.floors[k].betti);
    CHECK(back_rep.floors[k].ends.encode() == rep.floors[k].ends.encode());
    CHECK(back_rep.floors[k].branches == rep.floors[k].branches);
  }
  CHECK(triple_text(surface_triple_of_graph(back_rep)) == triple_text(surface_triple_of_graph(rep)));
  fs::remove_all(dir);
}

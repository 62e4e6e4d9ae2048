#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/classify.hpp"
#include "testing.hpp"
#include "testing_cantor.hpp"

using namespace forge;

namespace {
SpecPtr cantor_no_genus() { return make_pair_spec(2, 0, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {}, {}); }
SpecPtr perfect_all_genus() {
  return make_pair_spec(2, 0, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}
SpecPtr one_point() { return make_pair_spec(1, 0, {{0, 0}}, {}, {}); }
SpecPtr jacob_ladder() { return make_pair_spec(3, 0, {{0, 1}, {0, 2}, {1, 1}, {2, 2}}, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 1}, {2, 2}}); }
}  // namespace

TEST_CASE("check triple") {
  CHECK(check_triple(triple_of_pair(perfect_all_genus())).empty());
  CHECK(!triple_of_pair(perfect_all_genus()).genus.has_value());
  ClassifyingTriple bad = triple_of_pair(perfect_all_genus());
  bad.genus = 3;
  CHECK(!check_triple(bad).empty());
  auto single = triple_of_pair(one_point(), 0);
  CHECK(check_triple(single).empty());
  CHECK(condition_star_triple(single) == Tri::False);
  ClassifyingTriple nothing;
  nothing.genus = 0;
  CHECK(!check_triple(nothing).empty());
}

TEST_CASE("condition star on triples") {
  CHECK(condition_star_triple(triple_of_pair(cantor_no_genus())) == Tri::True);
  CHECK(condition_star_triple(triple_of_pair(jacob_ladder())) == Tri::True);
  CHECK(condition_star_triple(triple_of_pair(one_point())) == Tri::False);
  ClassifyingTriple trunc;
  trunc.tree = FiniteEndsTree{};
  CHECK(condition_star_triple(trunc) == Tri::Undetermined);
  // agrees with the spec-level decision for random pairs
  std::mt19937 rng(9);
  for (int it = 0; it < 300; ++it) {
    auto s = testing::random_pair_spec(rng, 1 + it % 5);
    auto t = triple_of_pair(s);
    CHECK(condition_star_triple(t) == (condition_star(*s) ? Tri::True : Tri::False));
    CHECK(check_triple(t).empty());
  }
}

TEST_CASE("triples of leaf reports") {
  CHECK_THROWS_AS(surface_triple_of_graph(LeafReport{}), Error);
  std::mt19937 rng(1);
  // family ray: finite genus, no genus at the ends, fan-out
  auto F = testing::chain_forest(rng, Piece::S, 1, 1);
  auto t = extended_tower(F, seed_base(), 4);
  auto rep = family_leaf_report(t, 2);
  auto tr = surface_triple_of_graph(rep);
  REQUIRE(tr.genus);
  CHECK(*tr.genus == 2);
  CHECK(tr.ends_hom == 0);
  CHECK(tr.ends > 1);
  CHECK(check_triple(tr).empty());
  // ray of h2 pieces: genus grows with homology at the far end
  CGraphForest H;
  auto g = std::make_shared<CGraph>(basic_piece(Piece::H2));
  int v = H.add_vertex(0, g);
  for (int k = 0; k < 4; ++k) {
    int b = -1;
    for (int x = 0; x < g->num_vertices(); ++x)
      if (g->kind(x) == Kind::B1) b = x;
    auto at = attach_piece(*g, {Piece::H2, {b}});
    auto ng = std::make_shared<CGraph>(at.g);
    int u = H.add_vertex(k + 1, ng);
    H.add_edge(v, u, std::make_shared<CInclusion>(at.inc), peel_decomposition(*g, *ng, at.inc));
    v = u, g = ng;
  }
  H.top = 4;
  auto rf = realize_forest(H, seed_base(), 4);
  auto lr = leaf_report(rf, {0, 1, 2, 3, 4});
  auto th = surface_triple_of_graph(lr);
  CHECK(!th.genus.has_value());
  CHECK(th.ends_hom > 0);
  CHECK(check_triple(th).empty());
  // every report from random chains gives a consistent triple
  for (int it = 0; it < 10; ++it) {
    auto C = testing::chain_forest(rng, Piece(it % 3), 3, 1);
    int N = (int)elementary_decomposition(C).steps.size();
    auto r2 = realize_forest(C, seed_base(), N);
    std::vector<int> ray{r2.dec.forest.at_floor(0)[0]};
    while ((int)ray.size() <= N) ray.push_back(r2.dec.forest.edges[r2.dec.forest.out_edges(ray.back())[0]].t);
    CHECK(check_triple(surface_triple_of_graph(leaf_report(r2, ray))).empty());
  }
}

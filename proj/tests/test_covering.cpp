#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/covering.hpp"
#include "testing.hpp"

using namespace forge;
using forge::testing::figure_eight_ptr;

TEST_CASE("identity and disjoint covers") {
  auto f = figure_eight_ptr();
  CHECK(validate_covering(identity_cover(f)).empty());
  auto p2 = disjoint_cover(f, 2);
  CHECK(validate_covering(p2).empty());
  CHECK(p2.degree() == 2);
  CHECK(num_components(*p2.total) == 2);
  CHECK(betti(*p2.total) == 4);
  auto p3 = disjoint_cover(f, 3);
  CHECK(p3.degree() == 3);
  CHECK(num_components(*p3.total) == 3);
}

TEST_CASE("validator catches a collapsed edge") {
  auto f = figure_eight_ptr();
  auto p = identity_cover(f);
  p.emap[1] = 0;
  auto r = validate_covering(p);
  CHECK(std::any_of(r.begin(), r.end(), [](auto& v) { return v.what == "star bijection fails"; }));
}

TEST_CASE("cut") {
  CGraph f = figure_eight();
  auto c0 = cut(f, {});
  CHECK(c0.g.num_vertices() == 3);
  auto c1 = cut(f, {1});
  CHECK(c1.g.num_vertices() == 4);
  CHECK(c1.g.num_edges() == 4);
  CHECK(connected(c1.g));
  auto c2 = cut(f, {1, 2});
  CHECK(connected(c2.g));
  int b1 = 0;
  for (int v = 0; v < c2.g.num_vertices(); ++v) b1 += c2.g.kind(v) == Kind::B1;
  CHECK(b1 == 4);
  CHECK_THROWS(cut(f, {0}));
}

TEST_CASE("surgery joins the two-fold disjoint cover") {
  auto f = figure_eight_ptr();
  auto p2 = disjoint_cover(f, 2);
  CHECK(validate_covering(surgery(p2, {})).empty());
  auto s = surgery(p2, {1, 4});
  CHECK(validate_covering(s).empty());
  CHECK(connected(*s.total));
  CHECK(s.degree() == 2);
  CHECK_THROWS(surgery(p2, {1}));
}

TEST_CASE("surgery sweep keeps valid covers") {
  std::mt19937 rng(21);
  for (int it = 0; it < 1000; ++it) {
    int d = 2 + it % 5;
    auto p = testing::random_cover(rng, d, false);
    // pick a few base b2 vertices and two preimages of each
    std::vector<int> X;
    for (int a : {1, 2}) {
      if (rng() % 2) continue;
      std::vector<int> fib;
      for (int v = 0; v < p.total->num_vertices(); ++v)
        if (p.vmap[v] == a) fib.push_back(v);
      std::shuffle(fib.begin(), fib.end(), rng);
      X.push_back(fib[0]);
      X.push_back(fib[1]);
    }
    auto q = surgery(p, X);
    REQUIRE(validate_covering(q).empty());
    CHECK(q.degree() == d);
    if (connected(*q.total)) CHECK(betti(*q.total) == d + 1);
  }
}

TEST_CASE("cyclic surgery") {
  auto f = figure_eight_ptr();
  auto c2 = cyclic_surgery(f, 1, 2);
  auto s2 = surgery(disjoint_cover(f, 2), {1, 4});
  CHECK(is_isomorphic(*c2.total, *s2.total));
  auto c5 = cyclic_surgery(f, 1, 5);
  CHECK(validate_covering(c5).empty());
  CHECK(connected(*c5.total));
  CHECK(betti(*c5.total) == 6);
  std::mt19937 rng(4);
  for (int it = 0; it < 100; ++it) {
    auto p = testing::random_cover(rng, 1 + it % 5, true);
    auto g = p.total;
    int a = 0;
    while (g->kind(a) != Kind::B2) ++a;
    auto c = cyclic_surgery(g, a, 2 + it % 4);
    CHECK(validate_covering(c).empty());
    CHECK(connected(*c.total));
  }
}

TEST_CASE("boundary vertices do not disconnect covers") {
  std::mt19937 rng(8);
  for (int it = 0; it < 100; ++it) {
    auto p = testing::random_cover(rng, 1 + it % 6, true);
    for (int v = 0; v < p.total->num_vertices(); ++v)
      if (p.total->kind(v) == Kind::B2) CHECK(connected(cut(*p.total, {v}).g));
  }
}

TEST_CASE("non-disconnecting vertex") {
  CGraph f = figure_eight();
  int v = find_nondisconnecting_b2(f, {0, 1, 2});
  CHECK((v == 1 || v == 2));
  CGraph t = basic_piece(Piece::S);
  auto a = attach_piece(t, {Piece::S, {1}});
  std::vector<int> all(a.g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  CHECK_THROWS(find_nondisconnecting_b2(a.g, all));
  std::mt19937 rng(9);
  for (int it = 0; it < 100; ++it) {
    auto p = testing::random_cover(rng, 1 + it % 6, true);
    std::vector<int> comp(p.total->num_vertices());
    std::iota(comp.begin(), comp.end(), 0);
    int x = find_nondisconnecting_b2(*p.total, comp);
    CHECK(connected(cut(*p.total, {x}).g));
  }
}

TEST_CASE("compose multiplies degrees") {
  auto f = figure_eight_ptr();
  auto q = cyclic_surgery(f, 1, 2);
  auto p = cyclic_surgery(q.total, 0 + 1, 3);
  auto c = compose(p, q);
  CHECK(validate_covering(c).empty());
  CHECK(c.degree() == 6);
  CHECK(betti(*c.total) == 7);
  auto ci = compose(identity_cover(q.total), q);
  CHECK(ci.vmap == q.vmap);
}

TEST_CASE("sheet lifts") {
  auto f = figure_eight_ptr();
  auto p = cyclic_surgery(f, 1, 3);
  // the star of the s vertex avoiding the glued vertex lifts into each sheet
  for (int k = 0; k < 3; ++k) {
    auto L = lift_into_sheet(p, {0, 2}, k);
    REQUIRE(L.has_value());
    for (size_t i = 0; i < L->v.size(); ++i) CHECK(p.vmap[L->v[i]] == std::vector<int>{0, 2}[i]);
  }
  // a cut vertex with both edges in the subgraph cannot lift
  CHECK_FALSE(lift_into_sheet(p, {0, 1}, 0).has_value());
}

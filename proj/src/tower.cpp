#include "forge/tower.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace forge {

namespace {

GraphPtr fig8() {
  static GraphPtr f = std::make_shared<CGraph>(figure_eight());
  return f;
}

// figure eight: s=0, x=1, y=2; edges 0,1 at x and 2,3 at y. The plus edge at
// copy k of x is rerouted to copy sx[k].
CoveringMap cover_from_perms(const std::vector<int>& sx, const std::vector<int>& sy) {
  const int d = (int)sx.size();
  CoveringMap p = disjoint_cover(fig8(), d);
  std::vector<Edge> es;
  for (int e = 0; e < p.total->num_edges(); ++e) es.push_back(p.total->edge(e));
  for (int k = 0; k < d; ++k) {
    es[k * 4 + 1].b = sx[k] * 3 + 1;
    es[k * 4 + 3].b = sy[k] * 3 + 2;
  }
  auto t = std::make_shared<CGraph>();
  for (int v = 0; v < p.total->num_vertices(); ++v) t->add_vertex(p.total->kind(v));
  for (auto& e : es) t->add_edge(e.a, e.b);
  p.total = t;
  return p;
}

// Isomorphism between two stars (one non-boundary center, B1 leaves).
std::optional<CInclusion> star_iso(const CGraph& a, const CGraph& b) {
  auto center = [](const CGraph& g) {
    int c = -1;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (!is_boundary(g.kind(v))) {
        if (c >= 0) return -2;
        c = v;
      } else if (g.kind(v) != Kind::B1) {
        return -2;
      }
    return c;
  };
  int ca = center(a), cb = center(b);
  if (ca < 0 || cb < 0 || a.kind(ca) != b.kind(cb)) return std::nullopt;
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return std::nullopt;
  if (a.valency(ca) != a.num_edges() || b.valency(cb) != b.num_edges()) return std::nullopt;
  CInclusion m;
  m.vmap.assign(a.num_vertices(), -1);
  m.emap.assign(a.num_edges(), -1);
  m.vmap[ca] = cb;
  for (int i = 0; i < a.valency(ca); ++i) {
    int ea = a.incident(ca)[i], eb = b.incident(cb)[i];
    m.emap[ea] = eb;
    m.vmap[a.other(ea, ca)] = b.other(eb, cb);
  }
  return m;
}

Collapse push_forward(const Collapse& c, const CGraph& target, const CInclusion& iso) {
  Collapse r = c;
  r.target = target;
  for (int& v : r.vmap) v = iso.vmap[v];
  for (int& e : r.emap)
    if (e >= 0) e = iso.emap[e];
  return r;
}

int edge_between(const CGraph& g, int x, int y) {
  for (int e : g.incident(x))
    if (g.other(e, x) == y) return e;
  return -1;
}

bool same_graph(const CGraph& a, const CGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  for (int v = 0; v < a.num_vertices(); ++v)
    if (a.kind(v) != b.kind(v)) return false;
  for (int e = 0; e < a.num_edges(); ++e) {
    const Edge &x = a.edge(e), &y = b.edge(e);
    if (!((x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a))) return false;
  }
  return true;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void mark_disjoint(std::vector<char>& used, const VertexList& vs, const char* what) {
  for (int v : vs) {
    if (used[v]) throw Error(std::string(what) + ": lifted subgraphs overlap at v" + std::to_string(v));
    used[v] = 1;
  }
}

int preimage_of(const Collapse& f, const VertexList& G, int h) {
  for (int x = 0; x < (int)f.vmap.size(); ++x)
    if (f.vmap[x] == h && is_boundary(f.source.kind(x))) return G[x];
  throw Error("attach vertex has no preimage under the collapse");
}

// Vertices of target outside the image of inc: the center and new B1 ids.
void new_part(const CGraph& target, const CInclusion& inc, Piece kind, int& center, std::vector<int>& b1) {
  std::vector<char> hit(target.num_vertices(), 0);
  for (int v : inc.vmap) hit[v] = 1;
  center = -1;
  for (int v = 0; v < target.num_vertices(); ++v)
    if (!hit[v] && target.kind(v) == piece_center(kind)) {
      if (center >= 0) throw Error("target adds more than one piece");
      center = v;
    }
  if (center < 0) throw Error("target does not add a piece of the step's kind");
  b1.clear();
  for (int e : target.incident(center)) {
    int w = target.other(e, center);
    if (!hit[w]) b1.push_back(w);
  }
  int extra = 0;
  for (int v = 0; v < target.num_vertices(); ++v) extra += !hit[v];
  if (extra != 1 + (int)b1.size()) throw Error("target is not one elementary step over the source");
}


// Connected C-subgraph made of s-vertices (copy >= first) and their
// neighbors with betti exactly m. Bounded backtracking over frontier choices.
std::optional<VertexList> betti_region(const CGraph& T, const std::vector<int>& copy, int first,
                                       const std::vector<char>& hit, int m) {
  auto allowed = [&](int s) {
    if (copy[s] < first || T.kind(s) != Kind::S4 || hit[s]) return false;
    for (int e : T.incident(s)) {
      int w = T.other(e, s);
      if (copy[w] < first || hit[w]) return false;
    }
    return true;
  };
  std::vector<int> cover(T.num_vertices(), 0);
  std::vector<int> chosen;
  long long budget = 200000;
  const int limit = 2 * m + 10;
  int beta = 0;  // E - V + 1 of the current region
  auto fresh_of = [&](int s) {
    int f = 0;
    for (int e : T.incident(s)) f += cover[T.other(e, s)] == 0;
    return f;
  };
  auto apply = [&](int s, int sign) {
    cover[s] += sign;
    for (int e : T.incident(s)) cover[T.other(e, s)] += sign;
  };
  std::function<bool()> dfs = [&]() -> bool {
    if (beta == m) return true;
    if ((int)chosen.size() >= limit || --budget < 0) return false;
    std::set<int> cand;
    for (int s : chosen)
      for (int e : T.incident(s)) {
        int w = T.other(e, s);
        for (int e2 : T.incident(w)) {
          int x = T.other(e2, w);
          if (!cover[x] && allowed(x)) cand.insert(x);
        }
      }
    std::vector<std::pair<int, int>> order;  // (rank, s)
    for (int x : cand) {
      int gain = 3 - fresh_of(x);
      if (gain > m - beta) continue;
      order.push_back({gain == 0 ? 10 : gain, x});
    }
    std::sort(order.begin(), order.end());
    if (order.size() > 6) order.resize(6);
    for (auto [rank, x] : order) {
      int gain = 3 - fresh_of(x);
      apply(x, +1);
      chosen.push_back(x);
      beta += gain;
      if (dfs()) return true;
      beta -= gain;
      chosen.pop_back();
      apply(x, -1);
    }
    return false;
  };
  for (int s0 = 0; s0 < T.num_vertices(); ++s0) {
    if (!allowed(s0)) continue;
    apply(s0, +1);
    chosen = {s0};
    beta = 0;
    if (dfs()) {
      VertexList out;
      for (int v = 0; v < T.num_vertices(); ++v)
        if (cover[v]) out.push_back(v);
      return out;
    }
    apply(s0, -1);
    if (budget < 0) break;
  }
  return std::nullopt;
}

}  // namespace

const SeedBase& seed_base() {
  static const SeedBase seed = [] {
    SeedBase s;
    s.cover = cover_from_perms({5, 0, 3, 2, 7, 6, 1, 4}, {1, 0, 4, 5, 3, 7, 2, 6});
    const CGraph& G = *s.cover.total;
    auto region = [&](std::vector<int> sheets) {
      std::set<int> vs;
      for (int k : sheets) {
        vs.insert(3 * k);
        for (int e : G.incident(3 * k)) vs.insert(G.other(e, 3 * k));
      }
      return VertexList(vs.begin(), vs.end());
    };
    auto collapse_onto = [&](const VertexList& R, Piece kind) {
      Induced in = induced(G, R);
      std::vector<int> member;
      for (int i = 0; i < in.g.num_vertices(); ++i)
        if (in.g.kind(i) != Kind::B1) member.push_back(i);
      Collapse c = kind == Piece::S ? identity_collapse(in.g) : quotient_by_family(in.g, {member});
      CGraph piece = basic_piece(kind);
      auto iso = star_iso(c.target, piece);
      if (!iso) throw Error("seed region does not collapse to the expected piece");
      return push_forward(c, piece, *iso);
    };
    s.kinds = {Piece::H2, Piece::S, Piece::H4};
    s.regions = {region({0, 1}), region({7}), region({2, 3})};
    for (int i = 0; i < 3; ++i) s.collapses.push_back(collapse_onto(s.regions[i], s.kinds[i]));
    // verified at load
    if (!validate_covering(s.cover).empty() || !connected(G)) throw Error("seed cover invalid");
    std::vector<char> used(G.num_vertices(), 0);
    for (int i = 0; i < 3; ++i) {
      mark_disjoint(used, s.regions[i], "seed");
      if (!is_c_subgraph(G, s.regions[i]) || !validate_collapse(s.collapses[i]).empty())
        throw Error("seed region invalid");
    }
    return s;
  }();
  return seed;
}

Collapse transport_collapse(const Collapse& f, const CGraph& old_host, const VertexList& old_verts,
                            const CoveringMap& q, const VertexList& new_verts) {
  Induced oi = induced(old_host, old_verts);
  Induced ni = induced(*q.total, new_verts);
  std::unordered_map<int, int> old_local;
  for (int i = 0; i < (int)oi.to_host_e.size(); ++i) old_local[oi.to_host_e[i]] = i;
  Collapse r = f;
  r.source = ni.g;
  r.source.pointing = f.source.pointing;
  r.emap.assign(ni.g.num_edges(), -1);
  for (int k = 0; k < ni.g.num_edges(); ++k) {
    auto it = old_local.find(q.emap[ni.to_host_e[k]]);
    if (it == old_local.end()) throw Error("transport: lifted edge has no edge below it");
    r.emap[k] = f.emap[it->second];
  }
  return r;
}

Realization elementary_realization(GraphPtr gamma, const VertexList& G, const std::vector<VertexList>& G0,
                                   const Collapse& f, const ElementaryStep& step, const CGraph& target,
                                   const CInclusion& inc) {
  const CGraph& B = *gamma;
  if (betti(B) < 3) throw Error("elementary realization needs betti >= 3");
  if ((int)f.source.num_vertices() != (int)G.size()) throw Error("collapse does not match the subgraph");
  if ((int)step.attach.size() != (step.kind == Piece::H4 ? 2 : 1))
    throw Error("step has the wrong number of attach vertices");
  for (int a : step.attach)
    if (a < 0 || a >= f.target.num_vertices() || f.target.kind(a) != Kind::B1)
      throw Error("attach vertex is not B1 in the source graph");

  Realization R;
  std::vector<int> gi(B.num_vertices(), -1);
  for (int i = 0; i < (int)G.size(); ++i) gi[G[i]] = i;
  int A1 = preimage_of(f, G, step.attach[0]);
  int A2 = step.kind == Piece::H4 ? preimage_of(f, G, step.attach[1]) : -1;

  std::vector<int> added;        // new vertices, in order
  std::vector<int> added_image;  // their target vertices
  std::vector<char> in_member;   // per added vertex
  int center = -1;
  std::vector<int> b1;
  new_part(target, inc, step.kind, center, b1);

  if (step.kind != Piece::H4) {
    auto d = disjoint_cover(gamma, 2);
    R.p = surgery(d, {d.sheet_vertex(A1, 0), d.sheet_vertex(A1, 1)});
    R.sheet = 0;
  } else {
    CutResult c = cut(B, {A1, A2});
    std::vector<int> comp(c.g.num_vertices(), -1);
    int a0c = -1;
    for (int s = 0; s < c.g.num_vertices() && a0c < 0; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> vs{s};
      comp[s] = s;
      for (size_t i = 0; i < vs.size(); ++i)
        for (int e : c.g.incident(vs[i])) {
          int w = c.g.other(e, vs[i]);
          if (comp[w] < 0) comp[w] = s, vs.push_back(w);
        }
      std::sort(vs.begin(), vs.end());
      if (betti(induced(c.g, vs).g) > 0) a0c = find_nondisconnecting_b2(c.g, vs);
    }
    if (a0c < 0) throw Error("no component of the cut graph carries homology");
    R.a0 = c.fold_v[a0c];
    auto d = disjoint_cover(gamma, 3);
    R.p = surgery(d, {d.sheet_vertex(R.a0, 0), d.sheet_vertex(R.a0, 1), d.sheet_vertex(A1, 0),
                      d.sheet_vertex(A1, 2), d.sheet_vertex(A2, 1), d.sheet_vertex(A2, 2)});
    R.sheet = 2;
  }
  const CoveringMap& p = R.p;
  const CGraph& T = *p.total;
  auto lift = lift_into_sheet(p, G, R.sheet);
  if (!lift) throw Error("subgraph does not lift");
  std::vector<char> in_j(T.num_vertices(), 0);
  for (int v : lift->v) in_j[v] = 1;
  int j1 = lift->v[gi[A1]];

  if (step.kind == Piece::H2) {
    int x1 = p.sheet_vertex(A1, 0), x2 = p.sheet_vertex(A1, 1);
    for (int v = 0; v < T.num_vertices(); ++v)
      if (p.copy[v] == 1 && v != x2) added.push_back(v), added_image.push_back(center), in_member.push_back(1);
    added.push_back(j1 == x1 ? x2 : x1);
    added_image.push_back(b1.at(0));
    in_member.push_back(0);
  } else if (step.kind == Piece::S) {
    int c = -1;
    for (int e : T.incident(j1))
      if (!in_j[T.other(e, j1)]) c = T.other(e, j1);
    if (c < 0 || T.kind(c) != Kind::S4) throw Error("no s-vertex beside the attach vertex");
    added.push_back(c), added_image.push_back(center), in_member.push_back(0);
    size_t k = 0;
    for (int e : T.incident(c)) {
      int w = T.other(e, c);
      if (w == j1) continue;
      added.push_back(w), added_image.push_back(b1.at(k++)), in_member.push_back(0);
    }
  } else {
    int j2 = lift->v[gi[A2]];
    int g10 = p.sheet_vertex(A1, 0), g12 = p.sheet_vertex(A1, 2);
    int g21 = p.sheet_vertex(A2, 1), g22 = p.sheet_vertex(A2, 2);
    for (int v = 0; v < T.num_vertices(); ++v)
      if ((p.copy[v] == 0 || p.copy[v] == 1) && v != g10 && v != g21)
        added.push_back(v), added_image.push_back(center), in_member.push_back(1);
    added.push_back(j1 == g10 ? g12 : g10), added_image.push_back(b1.at(0)), in_member.push_back(0);
    added.push_back(j2 == g21 ? g22 : g21), added_image.push_back(b1.at(1)), in_member.push_back(0);
  }
  if (!connected(T)) throw Error("elementary realization produced a disconnected cover");

  R.g_hat = lift->v;
  const int ng = (int)G.size();
  for (int v : added) {
    if (in_j[v]) throw Error("new piece meets the lifted subgraph");
    R.g_hat.push_back(v);
  }
  Induced gi_hat = induced(T, R.g_hat);
  Collapse& F = R.f_hat;
  F.source = gi_hat.g;
  F.source.pointing = f.source.pointing;
  F.target = target;
  F.family = f.family;
  std::vector<int> member;
  for (size_t i = 0; i < added.size(); ++i)
    if (in_member[i]) member.push_back(ng + (int)i);
  if (!member.empty()) F.family.push_back(member);
  F.vmap.resize(R.g_hat.size());
  for (int x = 0; x < ng; ++x) F.vmap[x] = inc.vmap[f.vmap[x]];
  for (size_t i = 0; i < added.size(); ++i) F.vmap[ng + i] = added_image[i];
  std::unordered_map<int, int> lifted_edge;  // host edge -> local edge of G
  for (int i = 0; i < (int)lift->e.size(); ++i) lifted_edge[lift->e[i]] = i;
  std::vector<char> is_member(R.g_hat.size(), 0);
  for (int x : member) is_member[x] = 1;
  F.emap.assign(F.source.num_edges(), -1);
  for (int k = 0; k < F.source.num_edges(); ++k) {
    int u = F.source.edge(k).a, w = F.source.edge(k).b;
    if (is_member[u] && is_member[w]) continue;
    auto it = lifted_edge.find(gi_hat.to_host_e[k]);
    if (it != lifted_edge.end()) {
      int fe = f.emap[it->second];
      F.emap[k] = fe < 0 ? -1 : inc.emap[fe];
    } else {
      F.emap[k] = edge_between(target, F.vmap[u], F.vmap[w]);
    }
  }
  Report rep = validate_collapse(F);
  if (!rep.empty()) throw Error("elementary realization: collapse invalid: " + report_text(rep));

  std::vector<char> used(T.num_vertices(), 0);
  mark_disjoint(used, R.g_hat, "elementary realization");
  for (const auto& g0 : G0) {
    auto l = lift_into_sheet(p, g0, R.sheet);
    if (!l) throw Error("G0 does not lift");
    mark_disjoint(used, l->v, "elementary realization");
    R.g0_hat.push_back(l->v);
  }
  return R;
}

Realization elementary_realization(GraphPtr gamma, const VertexList& G, const std::vector<VertexList>& G0,
                                   const Collapse& f, const ElementaryStep& step) {
  Attached at = attach_piece(f.target, step);
  return elementary_realization(std::move(gamma), G, G0, f, step, at.g, at.inc);
}

Replication replicate(GraphPtr gamma, const std::vector<VertexList>& G, const std::vector<int>& m) {
  if (G.size() != m.size()) throw Error("replicate: one multiplicity per subgraph");
  int N = 0;
  for (int x : m) {
    if (x < 0) throw Error("replicate: negative multiplicity");
    N += x;
  }
  Replication r;
  std::vector<char> used(gamma->num_vertices(), 0);
  for (const auto& g : G) mark_disjoint(used, g, "replicate");
  if (N <= 1) {
    r.p = identity_cover(gamma);
  } else {
    int a = -1;
    for (int v = 0; v < gamma->num_vertices() && a < 0; ++v)
      if (!used[v] && gamma->kind(v) == Kind::B2) a = v;
    if (a < 0) throw Error("replicate: no free b2 vertex");
    r.p = cyclic_surgery(gamma, a, N);
    if (!connected(*r.p.total)) throw Error("replicate: disconnected cover");
  }
  int sheet = 0;
  std::vector<char> hit(r.p.total->num_vertices(), 0);
  for (size_t k = 0; k < G.size(); ++k) {
    r.lifts.emplace_back();
    for (int l = 0; l < m[k]; ++l) {
      auto L = lift_into_sheet(r.p, G[k], sheet++);
      if (!L) throw Error("replicate: subgraph does not lift");
      mark_disjoint(hit, L->v, "replicate");
      r.lifts.back().push_back(L->v);
    }
  }
  return r;
}

namespace {

struct RootPlan {
  std::vector<int> region;  // seed region per root
  std::vector<CInclusion> iso;
};

RootPlan plan_roots(const CGraphForest& F, const SeedBase& seed) {
  RootPlan rp;
  for (int v : F.at_floor(0)) {
    bool ok = false;
    for (size_t i = 0; i < seed.kinds.size() && !ok; ++i) {
      auto iso = star_iso(seed.collapses[i].target, *F.graphs[v]);
      if (iso) rp.region.push_back((int)i), rp.iso.push_back(*iso), ok = true;
    }
    if (!ok) throw Error("floor-0 graph " + std::to_string(v) + " is not a basic piece");
  }
  return rp;
}

// One decomposed floor transition; `extra` subgraphs get 1:1 lifts.
struct Stepper {
  RealizedForest& rf;
  const RealizeOptions& opt;

  void check_cap(long long factor) const {
    if ((long long)rf.gamma.back()->num_vertices() * factor > opt.max_vertices)
      throw ResourceError("cover would exceed " + std::to_string(opt.max_vertices) + " vertices");
  }

  // returns the cover and the lifts of extra
  std::pair<CoveringMap, std::vector<VertexList>> advance(int n, const std::vector<VertexList>& extra) {
    const CGraphForest& F = rf.dec.forest;
    GraphPtr gamma = rf.gamma.back();
    std::vector<int> E;
    for (int e = 0; e < (int)F.edges.size(); ++e)
      if (F.floor[F.edges[e].o] == n) E.push_back(e);
    const FloorStep& fs = rf.dec.steps[n];
    std::vector<VertexList> extra_out;
    CoveringMap q;
    if (fs.elementary) {
      const ForestEdge& es = F.edges[fs.edge];
      check_cap(fs.step.kind == Piece::H4 ? 3 : 2);
      std::vector<VertexList> G0;
      std::vector<int> others;
      for (int e : E)
        if (e != fs.edge) G0.push_back(rf.host[F.edges[e].o]), others.push_back(e);
      for (const auto& x : extra) G0.push_back(x);
      Realization R = elementary_realization(gamma, rf.host[es.o], G0, rf.f[es.o], fs.step, *F.graphs[es.t], *es.inc);
      q = R.p;
      rf.a0.push_back(R.a0);
      rf.host[es.t] = R.g_hat;
      rf.f[es.t] = R.f_hat;
      rf.j[fs.edge] = iota_vec((int)rf.host[es.o].size());
      for (size_t i = 0; i < others.size(); ++i) {
        const ForestEdge& ed = F.edges[others[i]];
        rf.host[ed.t] = R.g0_hat[i];
        rf.j[others[i]] = iota_vec((int)R.g0_hat[i].size());
      }
      extra_out.assign(R.g0_hat.begin() + others.size(), R.g0_hat.end());
      for (int e : others) {
        const ForestEdge& ed = F.edges[e];
        rf.f[ed.t] = push_forward(transport_collapse(rf.f[ed.o], *gamma, rf.host[ed.o], q, rf.host[ed.t]),
                                  *F.graphs[ed.t], *ed.inc);
      }
    } else {
      std::vector<int> origins;
      std::map<int, std::vector<int>> outs;
      for (int e : E) {
        if (!outs.count(F.edges[e].o)) origins.push_back(F.edges[e].o);
        outs[F.edges[e].o].push_back(e);
      }
      std::vector<VertexList> G;
      std::vector<int> m;
      for (int o : origins) G.push_back(rf.host[o]), m.push_back((int)outs[o].size());
      for (const auto& x : extra) G.push_back(x), m.push_back(1);
      int N = std::accumulate(m.begin(), m.end(), 0);
      check_cap(std::max(N, 1));
      Replication rep = replicate(gamma, G, m);
      q = rep.p;
      rf.a0.push_back(-1);
      for (size_t k = 0; k < origins.size(); ++k)
        for (size_t l = 0; l < outs[origins[k]].size(); ++l) {
          int e = outs[origins[k]][l];
          const ForestEdge& ed = F.edges[e];
          rf.host[ed.t] = rep.lifts[k][l];
          rf.j[e] = iota_vec((int)rf.host[ed.o].size());
          rf.f[ed.t] = push_forward(transport_collapse(rf.f[ed.o], *gamma, rf.host[ed.o], q, rf.host[ed.t]),
                                    *F.graphs[ed.t], *ed.inc);
        }
      for (size_t k = origins.size(); k < G.size(); ++k) extra_out.push_back(rep.lifts[k][0]);
    }
    return {q, extra_out};
  }
};

RealizedForest start_forest(const CGraphForest& h, const SeedBase& seed, int N) {
  RealizedForest rf;
  rf.dec = elementary_decomposition(h, N);
  const CGraphForest& F = rf.dec.forest;
  rf.host.resize(F.num_vertices());
  rf.f.resize(F.num_vertices());
  rf.j.resize(F.edges.size());
  RootPlan rp = plan_roots(F, seed);
  auto roots = F.at_floor(0);
  std::vector<int> count(seed.regions.size(), 0);
  for (int r : rp.region) ++count[r];
  bool rep = std::any_of(count.begin(), count.end(), [](int c) { return c > 1; });
  GraphPtr g0 = seed.cover.total;
  if (!rep) {
    rf.base = seed.cover;
    for (size_t i = 0; i < roots.size(); ++i) {
      rf.host[roots[i]] = seed.regions[rp.region[i]];
      rf.f[roots[i]] = push_forward(seed.collapses[rp.region[i]], *F.graphs[roots[i]], rp.iso[i]);
    }
  } else {
    std::vector<VertexList> G;
    std::vector<int> m, idx(seed.regions.size(), -1);
    for (size_t r = 0; r < seed.regions.size(); ++r)
      if (count[r] > 0) idx[r] = (int)G.size(), G.push_back(seed.regions[r]), m.push_back(count[r]);
    Replication R = replicate(g0, G, m);
    rf.base = compose(R.p, seed.cover);
    std::vector<int> used(seed.regions.size(), 0);
    for (size_t i = 0; i < roots.size(); ++i) {
      int r = rp.region[i];
      rf.host[roots[i]] = R.lifts[idx[r]][used[r]++];
      Collapse c = transport_collapse(seed.collapses[r], *g0, seed.regions[r], R.p, rf.host[roots[i]]);
      rf.f[roots[i]] = push_forward(c, *F.graphs[roots[i]], rp.iso[i]);
    }
  }
  rf.gamma.push_back(rf.base.total);
  return rf;
}

}  // namespace

RealizedForest realize_forest(const CGraphForest& h, const SeedBase& seed, int N, const RealizeOptions& opt) {
  if (N < 0) throw Error("depth must be nonnegative");
  RealizedForest rf = start_forest(h, seed, N);
  Stepper st{rf, opt};
  int floors = (int)rf.dec.steps.size();
  for (int n = 0; n < std::min(N, floors); ++n) {
    auto [q, unused] = st.advance(n, {});
    rf.q.push_back(q);
    rf.gamma.push_back(q.total);
    rf.depth = n + 1;
  }
  return rf;
}

int achievable_depth(const CGraphForest& h, const SeedBase& seed, int max_n, const RealizeOptions& opt) {
  Decomposed d = elementary_decomposition(h, max_n);
  long long size = seed.cover.total->num_vertices();
  std::vector<int> count(seed.regions.size(), 0);
  for (int r : plan_roots(d.forest, seed).region) ++count[r];
  int tot = 0;
  for (int c : count) tot += c;
  if (*std::max_element(count.begin(), count.end()) > 1) size *= tot;
  if (size > opt.max_vertices) return -1;
  int n = 0;
  for (; n < (int)d.steps.size(); ++n) {
    long long factor = 1;
    if (d.steps[n].elementary) {
      factor = d.steps[n].step.kind == Piece::H4 ? 3 : 2;
    } else {
      int outs = 0;
      for (auto& e : d.forest.edges) outs += d.forest.floor[e.o] == n;
      factor = std::max(outs, 1);
    }
    if (size * factor > opt.max_vertices) break;
    size *= factor;
  }
  return n;
}

namespace {

// Edge map of the vertex map j : G_o -> G_t over the covering q.
std::optional<CInclusion> lifted_inclusion(const CGraph& low, const VertexList& lo, const CoveringMap& q,
                                           const VertexList& hi, const std::vector<int>& j, Induced* lo_in,
                                           Induced* hi_in) {
  *lo_in = induced(low, lo);
  *hi_in = induced(*q.total, hi);
  CInclusion inc;
  inc.vmap = j;
  for (int k = 0; k < lo_in->g.num_edges(); ++k) {
    int host = lo_in->to_host_e[k];
    int u = j[lo_in->g.edge(k).a];
    int found = -1;
    for (int e : hi_in->g.incident(u))
      if (q.emap[hi_in->to_host_e[e]] == host) found = e;
    if (found < 0) return std::nullopt;
    inc.emap.push_back(found);
  }
  return inc;
}

}  // namespace

Report validate_realization(const RealizedForest& rf) {
  Report r;
  auto add = [&](const std::string& what, const std::string& where) { r.push_back({what, where}); };
  const CGraphForest& F = rf.dec.forest;
  if ((int)rf.gamma.size() < rf.depth + 1 || (int)rf.q.size() < rf.depth) {
    add("missing floors", "tower");
    return r;
  }
  if (rf.base.total != rf.gamma[0] || !validate_covering(rf.base).empty() || rf.base.base->num_vertices() != 3)
    add("floor 0 is not a cover of the figure eight", "gamma0");
  for (size_t n = 0; n < rf.q.size(); ++n) {
    std::string at = "q" + std::to_string(n);
    if (rf.q[n].base != rf.gamma[n] || rf.q[n].total != rf.gamma[n + 1]) add("not composable", at);
    for (auto& v : validate_covering(rf.q[n])) add(v.what + " " + v.where, at);
  }
  for (size_t n = 0; n < rf.gamma.size(); ++n)
    if (!connected(*rf.gamma[n])) add("floor not connected", "gamma" + std::to_string(n));
  for (int n = 0; n <= rf.depth; ++n) {
    const CGraph& G = *rf.gamma[n];
    std::vector<char> used(G.num_vertices(), 0);
    for (int v : F.at_floor(n)) {
      std::string at = "vertex " + std::to_string(v);
      const VertexList& hv = rf.host[v];
      if (hv.empty()) {
        add("not hosted", at);
        continue;
      }
      bool ok = true;
      for (int x : hv) {
        if (x < 0 || x >= G.num_vertices()) {
          ok = false;
          break;
        }
        if (used[x]) add("hosted subgraphs overlap", at), ok = false;
        used[x] = 1;
      }
      if (!ok) continue;
      if (!is_c_subgraph(G, hv)) add("host is not a C-subgraph", at);
      if (!same_graph(induced(G, hv).g, rf.f[v].source)) add("collapse source differs from host", at);
      if (!same_graph(rf.f[v].target, *F.graphs[v])) add("collapse target differs from forest graph", at);
      for (auto& x : validate_collapse(rf.f[v])) add("collapse: " + x.what + " " + x.where, at);
    }
  }
  for (int e = 0; e < (int)F.edges.size(); ++e) {
    const ForestEdge& ed = F.edges[e];
    int n = F.floor[ed.o];
    if (n >= rf.depth) continue;
    std::string at = "edge " + std::to_string(e);
    const auto& j = rf.j[e];
    const auto& lo = rf.host[ed.o];
    const auto& hi = rf.host[ed.t];
    if (j.size() != lo.size()) {
      add("lift map size mismatch", at);
      continue;
    }
    bool ok = true;
    for (size_t i = 0; i < j.size() && ok; ++i)
      ok = j[i] >= 0 && j[i] < (int)hi.size() && rf.q[n].vmap[hi[j[i]]] == lo[i];
    if (!ok) {
      add("q o j is not the identity", at);
      continue;
    }
    Induced li, hin;
    auto inc = lifted_inclusion(*rf.gamma[n], lo, rf.q[n], hi, j, &li, &hin);
    if (!inc) {
      add("lift misses an edge", at);
      continue;
    }
    for (auto& x : validate_inclusion(li.g, hin.g, *inc)) add("lift: " + x.what + " " + x.where, at);
    const Collapse& fo = rf.f[ed.o];
    const Collapse& ft = rf.f[ed.t];
    for (size_t x = 0; x < j.size(); ++x)
      if (ft.vmap[j[x]] != ed.inc->vmap[fo.vmap[x]]) {
        add("square does not commute on vertices", at);
        break;
      }
    for (size_t k = 0; k < inc->emap.size(); ++k) {
      int want = fo.emap[k] < 0 ? -1 : ed.inc->emap[fo.emap[k]];
      if (ft.emap[inc->emap[k]] != want) {
        add("square does not commute on edges", at);
        break;
      }
    }
  }
  return r;
}

CGraph thicken_T(const CGraph& g, int r) {
  CGraph t = g;
  std::vector<int> frontier;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (t.kind(v) == Kind::B1) frontier.push_back(v);
  for (int step = 0; step < r; ++step) {
    std::vector<int> next;
    for (int b : frontier) {
      t.set_kind(b, Kind::B2);
      int s = t.add_vertex(Kind::S4);
      t.add_edge(b, s);
      for (int i = 0; i < 3; ++i) {
        int u = t.add_vertex(Kind::B1);
        t.add_edge(s, u);
        next.push_back(u);
      }
    }
    frontier = std::move(next);
  }
  return t;
}

CGraph t_star_truncation(int depth) { return thicken_T(basic_piece(Piece::S), depth); }

Variation variation_realization(GraphPtr gamma, const std::vector<VertexList>& gs,
                                const std::vector<VertexList>& G0, int m, int max_sheets) {
  const CGraph& B = *gamma;
  if (m < 1) throw Error("variation needs betti m >= 1");
  std::vector<char> used(B.num_vertices(), 0);
  for (const auto& g : gs) mark_disjoint(used, g, "variation");
  for (const auto& g : G0) mark_disjoint(used, g, "variation");

  // Each B1 vertex b of a thickened subgraph is glued to a sheet whose copy of
  // the s-vertex beyond b starts the tree; b's sharing a sheet must have
  // disjoint neighborhoods there.
  struct Tip {
    int b, s;
    std::vector<int> ext;
    int sheet = 0;
  };
  std::vector<Tip> tips;
  for (const auto& g : gs) {
    Induced in = induced(B, g);
    std::unordered_set<int> gset(g.begin(), g.end());
    for (int i = 0; i < in.g.num_vertices(); ++i) {
      if (in.g.kind(i) != Kind::B1) continue;
      Tip t;
      t.b = g[i];
      t.s = -1;
      for (int e : B.incident(t.b))
        if (!gset.count(B.other(e, t.b))) t.s = B.other(e, t.b);
      if (t.s < 0 || B.kind(t.s) != Kind::S4) throw Error("variation: boundary vertex without an outer s-vertex");
      t.ext.push_back(t.s);
      for (int e : B.incident(t.s)) t.ext.push_back(B.other(e, t.s));
      tips.push_back(t);
    }
  }
  std::vector<std::unordered_set<int>> taken;
  for (auto& t : tips) {
    int c = 0;
    while (true) {
      if (c == (int)taken.size()) taken.emplace_back();
      bool clash = false;
      for (int x : t.ext) clash = clash || taken[c].count(x);
      if (!clash) break;
      ++c;
    }
    for (int x : t.ext) taken[c].insert(x);
    t.sheet = c + 1;
  }
  const int first_f = (int)taken.size() + 1;
  std::vector<int> free_b2;
  for (int v = 0; v < B.num_vertices(); ++v)
    if (!used[v] && B.kind(v) == Kind::B2) free_b2.push_back(v);
  if (free_b2.empty()) throw Error("variation: no free b2 vertex");

  // F lives in `fcount` fresh sheets chained to sheet 0 through free b2
  // vertices; the count doubles until a region with betti m is found.
  for (int fcount = 1;; fcount *= 2) {
    const int sheets = first_f + fcount;
    if (sheets > max_sheets) throw ResourceError("variation needs more than " + std::to_string(max_sheets) + " sheets");
    if (fcount > (int)free_b2.size()) throw Error("variation: not enough free b2 vertices to chain sheets");
    auto d = disjoint_cover(gamma, sheets);
    std::vector<int> X;
    for (int i = 0; i < fcount; ++i) {
      int from = i == 0 ? 0 : first_f + i - 1;
      X.push_back(d.sheet_vertex(free_b2[i], from));
      X.push_back(d.sheet_vertex(free_b2[i], first_f + i));
    }
    for (auto& t : tips) X.push_back(d.sheet_vertex(t.b, 0)), X.push_back(d.sheet_vertex(t.b, t.sheet));
    Variation V;
    V.sheets = sheets;
    V.p = surgery(d, X);
    const CGraph& T = *V.p.total;
    if (!connected(T)) throw Error("variation produced a disconnected cover");

    std::vector<char> hit(T.num_vertices(), 0);
    for (const auto& g : gs) {
      auto L = lift_into_sheet(V.p, g, 0);
      if (!L) throw Error("variation: subgraph does not lift");
      std::vector<char> in_j(T.num_vertices(), 0);
      for (int v : L->v) in_j[v] = 1;
      VertexList out = L->v;
      Induced in = induced(B, g);
      for (int i = 0; i < in.g.num_vertices(); ++i) {
        if (in.g.kind(i) != Kind::B1) continue;
        int jb = L->v[i], s = -1;
        for (int e : T.incident(jb))
          if (!in_j[T.other(e, jb)]) s = T.other(e, jb);
        if (s < 0 || T.kind(s) != Kind::S4) throw Error("variation: no tree start beyond a boundary vertex");
        out.push_back(s);
        for (int e : T.incident(s))
          if (T.other(e, s) != jb) out.push_back(T.other(e, s));
      }
      mark_disjoint(hit, out, "variation");
      if (!is_isomorphic(induced(T, out).g, thicken_T(in.g, 1)))
        throw Error("variation: neighborhood is not T(G,1)");
      V.g_hat.push_back(std::move(out));
    }
    for (const auto& g : G0) {
      auto L = lift_into_sheet(V.p, g, 0);
      if (!L) throw Error("variation: G0 does not lift");
      mark_disjoint(hit, L->v, "variation");
      V.g0_hat.push_back(L->v);
    }
    auto fv = betti_region(T, V.p.copy, first_f, hit, m);
    if (!fv) continue;
    if (!is_c_subgraph(T, *fv) || betti(induced(T, *fv).g) != m) throw Error("variation: F is malformed");
    V.f_hat = std::move(*fv);
    return V;
  }
}

ExtendedTower extended_tower(const CGraphForest& h, const SeedBase& seed, int N, const RealizeOptions& opt) {
  if (N < 0) throw Error("depth must be nonnegative");
  ExtendedTower t;
  t.rf = start_forest(h, seed, N);
  RealizedForest& rf = t.rf;
  Stepper st{rf, opt};
  const CGraphForest& F = rf.dec.forest;
  int floors = (int)rf.dec.steps.size();
  t.fam.push_back({});
  for (int n = 0; n < N; ++n) {
    GraphPtr gamma = rf.gamma.back();
    CoveringMap q1 = identity_cover(gamma);
    std::vector<VertexList> fam = t.fam[n];
    bool forest_step = n < floors;
    if (forest_step) {
      auto [q, lifted] = st.advance(n, fam);
      q1 = q;
      fam = lifted;
    } else {
      rf.a0.push_back(-1);
    }
    // forest subgraphs on the new floor ride along as G0
    std::vector<int> alive;
    if (forest_step)
      for (int v : F.at_floor(n + 1))
        if (!rf.host[v].empty()) alive.push_back(v);
    std::vector<VertexList> G0;
    for (int v : alive) G0.push_back(rf.host[v]);
    GraphPtr mid = q1.total;
    if ((long long)mid->num_vertices() * 4 > opt.max_vertices)
      throw ResourceError("extended tower exceeds the vertex cap");
    Variation V = variation_realization(mid, fam, G0, n + 1);
    for (size_t i = 0; i < alive.size(); ++i) {
      int v = alive[i];
      rf.f[v] = transport_collapse(rf.f[v], *mid, rf.host[v], V.p, V.g0_hat[i]);
      rf.host[v] = V.g0_hat[i];
    }
    CoveringMap q = compose(V.p, q1);
    rf.q.push_back(q);
    rf.gamma.push_back(q.total);
    if (forest_step) rf.depth = n + 1;
    std::vector<VertexList> next = V.g_hat;
    next.push_back(V.f_hat);
    t.fam.push_back(std::move(next));
  }
  return t;
}

Report validate_extended(const ExtendedTower& t) {
  Report r = validate_realization(t.rf);
  const auto& rf = t.rf;
  for (size_t n = 0; n < t.fam.size(); ++n) {
    const CGraph& G = *rf.gamma[n];
    std::vector<char> used(G.num_vertices(), 0);
    if ((int)n <= rf.depth)
      for (int v : rf.dec.forest.at_floor((int)n))
        for (int x : rf.host[v]) used[x] = 1;
    if (t.fam[n].size() != n) r.push_back({"family size differs from floor", "floor " + std::to_string(n)});
    for (size_t i = 0; i < t.fam[n].size(); ++i) {
      std::string at = "G_" + std::to_string(i + 1) + "," + std::to_string(n);
      const VertexList& g = t.fam[n][i];
      bool clash = false;
      for (int x : g) clash = clash || used[x], used[x] = 1;
      if (clash) r.push_back({"family member overlaps", at});
      if (!is_c_subgraph(G, g)) r.push_back({"not a C-subgraph", at});
      CGraph gi = induced(G, g).g;
      if (betti(gi) != (int)i + 1 || !connected(gi)) r.push_back({"betti ladder broken", at});
      if (n + 1 < t.fam.size() && i < n) {
        const VertexList& up = t.fam[n + 1][i];
        const CoveringMap& q = rf.q[n];
        bool lifts = up.size() >= g.size();
        for (size_t k = 0; k < g.size() && lifts; ++k) lifts = q.vmap[up[k]] == g[k];
        if (!lifts) r.push_back({"next member is not a lift", at});
        CGraph upg = induced(*rf.gamma[n + 1], up).g;
        if (canonical_form(upg) != canonical_form(thicken_T(gi, 1))) r.push_back({"next member is not T(G,1)", at});
        auto in = interior(upg);
        std::vector<char> inside(upg.num_vertices(), 0);
        for (int x : in) inside[x] = 1;
        for (size_t k = 0; k < g.size(); ++k)
          if (!inside[k]) {
            r.push_back({"lift not in the interior", at});
            break;
          }
      }
    }
  }
  return r;
}

namespace {

LeafFloor leaf_floor(int n, CGraph g, const std::vector<int>& roots, int depth) {
  LeafFloor lf;
  lf.floor = n;
  lf.betti = betti(g);
  lf.ends = ends_tree(g, roots, depth);
  lf.branches = lf.ends.branches();
  lf.g = std::move(g);
  return lf;
}

}  // namespace

LeafReport leaf_report(const RealizedForest& rf, const std::vector<int>& ray) {
  const CGraphForest& F = rf.dec.forest;
  if (ray.empty()) throw Error("empty ray");
  LeafReport rep;
  rep.ray = "forest";
  std::vector<int> roots;
  for (size_t k = 0; k < ray.size(); ++k) {
    int v = ray[k];
    rep.ray += " " + std::to_string(v);
    if (v < 0 || v >= F.num_vertices() || F.floor[v] != (int)k || F.floor[v] > rf.depth)
      throw Error("ray does not follow the realized floors");
    bool nested = true;
    if (k == 0) {
      roots = iota_vec((int)rf.host[v].size());
    } else {
      int e = F.in_edge(v);
      if (e < 0 || F.edges[e].o != ray[k - 1]) throw Error("ray is not a path in the forest");
      Induced li, hi;
      nested = lifted_inclusion(*rf.gamma[k - 1], rf.host[ray[k - 1]], rf.q[k - 1], rf.host[v], rf.j[e], &li, &hi)
                   .has_value();
      for (int& x : roots) x = rf.j[e][x];
    }
    LeafFloor lf = leaf_floor((int)k, induced(*rf.gamma[k], rf.host[v]).g, roots, std::max(1, 2 * (int)k));
    lf.nested = nested;
    rep.floors.push_back(std::move(lf));
  }
  rep.genus = rep.floors.back().betti;
  const auto& et = rep.floors.back().ends;
  for (const auto& nd : et.nodes) rep.ends_hom = rep.ends_hom || (nd.level == et.depth && nd.hom);
  return rep;
}

LeafReport family_leaf_report(const ExtendedTower& t, int i) {
  int N = (int)t.fam.size() - 1;
  if (i < 1 || i > N) throw Error("family index out of range");
  LeafReport rep;
  rep.ray = "family " + std::to_string(i);
  int base = (int)t.fam[i][i - 1].size();
  for (int n = i; n <= N; ++n) {
    const VertexList& g = t.fam[n][i - 1];
    bool nested = true;
    if (n > i) {
      const VertexList& low = t.fam[n - 1][i - 1];
      for (size_t k = 0; k < low.size() && nested; ++k) nested = t.rf.q[n - 1].vmap[g[k]] == low[k];
    }
    int k = n - i;
    LeafFloor lf = leaf_floor(n, induced(*t.rf.gamma[n], g).g, iota_vec(base), std::max(0, 2 * k - 1));
    lf.nested = nested;
    rep.floors.push_back(std::move(lf));
  }
  rep.genus = rep.floors.back().betti;
  return rep;
}

}  // namespace forge

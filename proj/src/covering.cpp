#include "forge/covering.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace forge {

int CoveringMap::degree() const {
  if (base->num_vertices() == 0) return 0;
  return total->num_vertices() / base->num_vertices();
}

bool CoveringMap::sheeted() const { return !copy.empty() && copy[0] >= 0; }

int CoveringMap::sheet_vertex(int v, int k) const {
  int u = k * base->num_vertices() + v;
  if (u >= total->num_vertices() || vmap[u] != v || copy[u] != k) throw Error("sheet lookup failed");
  return u;
}

int CoveringMap::sheet_edge(int e, int k) const {
  int f = k * base->num_edges() + e;
  if (f >= total->num_edges() || emap[f] != e) throw Error("sheet lookup failed");
  return f;
}

Report validate_covering(const CoveringMap& p) {
  Report r;
  for (auto& v : validate(*p.base)) r.push_back({"base: " + v.what, v.where});
  for (auto& v : validate(*p.total)) r.push_back({"total: " + v.what, v.where});
  const CGraph& B = *p.base;
  const CGraph& T = *p.total;
  if ((int)p.vmap.size() != T.num_vertices() || (int)p.emap.size() != T.num_edges()) {
    r.push_back({"map size mismatch", "covering"});
    return r;
  }
  for (int v = 0; v < T.num_vertices(); ++v) {
    int b = p.vmap[v];
    std::string at = "v" + std::to_string(v);
    if (b < 0 || b >= B.num_vertices()) {
      r.push_back({"vertex image out of range", at});
      continue;
    }
    if (T.kind(v) != B.kind(b)) r.push_back({"kind not preserved", at});
  }
  for (int e = 0; e < T.num_edges(); ++e) {
    int f = p.emap[e];
    std::string at = "e" + std::to_string(e);
    if (f < 0 || f >= B.num_edges()) {
      r.push_back({"edge image out of range", at});
      continue;
    }
    const Edge& s = T.edge(e);
    const Edge& t = B.edge(f);
    int a = p.vmap[s.a], b = p.vmap[s.b];
    if (!((a == t.a && b == t.b) || (a == t.b && b == t.a))) r.push_back({"not a graph morphism", at});
  }
  if (!r.empty()) return r;
  for (int v = 0; v < T.num_vertices(); ++v) {
    std::vector<int> img;
    for (int e : T.incident(v)) img.push_back(p.emap[e]);
    std::vector<int> want(B.incident(p.vmap[v]));
    std::sort(img.begin(), img.end());
    std::sort(want.begin(), want.end());
    if (img != want) r.push_back({"star bijection fails", "v" + std::to_string(v)});
  }
  if (B.num_vertices() > 0 && T.num_vertices() % B.num_vertices() != 0)
    r.push_back({"fiber sizes differ", "covering"});
  else if (B.num_vertices() > 0) {
    std::vector<int> fib(B.num_vertices(), 0);
    for (int b : p.vmap) ++fib[b];
    for (int b = 0; b < B.num_vertices(); ++b)
      if (fib[b] != fib[0] && connected(B)) r.push_back({"fiber sizes differ", "v" + std::to_string(b)});
  }
  return r;
}

CoveringMap identity_cover(GraphPtr g) {
  CoveringMap p;
  p.base = g;
  p.total = g;
  p.vmap.resize(g->num_vertices());
  p.emap.resize(g->num_edges());
  std::iota(p.vmap.begin(), p.vmap.end(), 0);
  std::iota(p.emap.begin(), p.emap.end(), 0);
  p.copy.assign(g->num_vertices(), 0);
  return p;
}

CoveringMap disjoint_cover(GraphPtr base, int n) {
  if (n < 1) throw Error("disjoint_cover needs N >= 1");
  if (n == 1) return identity_cover(base);
  auto t = std::make_shared<CGraph>();
  const int nv = base->num_vertices(), ne = base->num_edges();
  CoveringMap p;
  for (int k = 0; k < n; ++k)
    for (int v = 0; v < nv; ++v) {
      t->add_vertex(base->kind(v));
      p.vmap.push_back(v);
      p.copy.push_back(k);
    }
  for (int k = 0; k < n; ++k)
    for (int e = 0; e < ne; ++e) {
      t->add_edge(k * nv + base->edge(e).a, k * nv + base->edge(e).b);
      p.emap.push_back(e);
    }
  p.base = base;
  p.total = t;
  return p;
}

CoveringMap compose(const CoveringMap& p, const CoveringMap& q) {
  if (p.base != q.total && !(p.base->num_vertices() == q.total->num_vertices() &&
                              p.base->num_edges() == q.total->num_edges()))
    throw Error("compose: total of q must equal base of p");
  CoveringMap r;
  r.base = q.base;
  r.total = p.total;
  for (int v : p.vmap) r.vmap.push_back(q.vmap.at(v));
  for (int e : p.emap) r.emap.push_back(q.emap.at(e));
  r.copy = p.copy;
  return r;
}

int minus_edge(const CGraph& base, int a) {
  const auto& inc = base.incident(a);
  return *std::min_element(inc.begin(), inc.end());
}

CutResult cut(const CGraph& g, const std::vector<int>& X, const std::vector<int>& minus_of) {
  CutResult r;
  const int nv = g.num_vertices();
  std::vector<int> plus_edge(g.num_edges(), -1);  // edge -> new endpoint
  std::vector<char> inx(nv, 0);
  for (int v = 0; v < nv; ++v) {
    r.g.add_vertex(g.kind(v));
    r.fold_v.push_back(v);
  }
  for (size_t i = 0; i < X.size(); ++i) {
    int x = X[i];
    if (x < 0 || x >= nv || g.kind(x) != Kind::B2) throw Error("cut: vertex " + std::to_string(x) + " is not B2");
    if (inx[x]++) throw Error("cut: repeated vertex");
    const auto& inc = g.incident(x);
    int mi = minus_of.empty() ? std::min(inc[0], inc[1]) : minus_of[i];
    int pl = inc[0] == mi ? inc[1] : inc[0];
    r.g.set_kind(x, Kind::B1);
    int h = r.g.add_vertex(Kind::B1);
    r.fold_v.push_back(x);
    plus_edge[pl] = h;
    r.halves.push_back({x, h});
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    Edge ed = g.edge(e);
    if (plus_edge[e] >= 0) {
      if (inx[ed.a]) ed.a = plus_edge[e];
      else ed.b = plus_edge[e];
    }
    r.g.add_edge(ed.a, ed.b);
    r.fold_e.push_back(e);
  }
  if (g.pointing) r.g.pointing = g.pointing;
  return r;
}

namespace {
// Move edge e's endpoint `from` to `to`, rebuilding the graph.
CGraph rewire(const CGraph& g, const std::vector<std::array<int, 3>>& moves) {
  std::vector<Edge> es;
  for (int e = 0; e < g.num_edges(); ++e) es.push_back(g.edge(e));
  for (auto [e, from, to] : moves) {
    if (es[e].a == from) es[e].a = to;
    else if (es[e].b == from) es[e].b = to;
    else throw Error("rewire: endpoint mismatch");
  }
  CGraph out;
  for (int v = 0; v < g.num_vertices(); ++v) out.add_vertex(g.kind(v));
  for (auto& ed : es) out.add_edge(ed.a, ed.b);
  out.pointing = g.pointing;
  return out;
}

int edge_over(const CoveringMap& p, int x, int base_edge) {
  for (int e : p.total->incident(x))
    if (p.emap[e] == base_edge) return e;
  throw Error("no edge over the requested base edge");
}
}  // namespace

CoveringMap surgery(const CoveringMap& p0, const std::vector<int>& X) {
  std::map<int, std::vector<int>> fib;
  for (int x : X) {
    if (x < 0 || x >= p0.total->num_vertices() || p0.total->kind(x) != Kind::B2)
      throw Error("surgery: vertex " + std::to_string(x) + " is not B2");
    fib[p0.vmap[x]].push_back(x);
  }
  std::vector<std::array<int, 3>> moves;
  for (auto& [a, xs] : fib) {
    if (xs.size() != 2 || xs[0] == xs[1]) throw Error("surgery: fiber condition violated over base vertex " + std::to_string(a));
    std::sort(xs.begin(), xs.end());
    int ep = p0.base->incident(a)[0] == minus_edge(*p0.base, a) ? p0.base->incident(a)[1] : p0.base->incident(a)[0];
    int p1 = edge_over(p0, xs[0], ep), p2 = edge_over(p0, xs[1], ep);
    // a1+ ~ a2- and a1- ~ a2+: swap the plus edges
    moves.push_back({p1, xs[0], xs[1]});
    moves.push_back({p2, xs[1], xs[0]});
  }
  CoveringMap p = p0;
  p.total = std::make_shared<CGraph>(rewire(*p0.total, moves));
  return p;
}

CoveringMap cyclic_surgery(GraphPtr g, int a, int n) {
  if (g->kind(a) != Kind::B2) throw Error("cyclic_surgery: vertex is not B2");
  if (n < 2) throw Error("cyclic_surgery needs N >= 2");
  CoveringMap p = disjoint_cover(g, n);
  int ep = g->incident(a)[0] == minus_edge(*g, a) ? g->incident(a)[1] : g->incident(a)[0];
  std::vector<std::array<int, 3>> moves;
  for (int k = 0; k < n; ++k) {
    int from = p.sheet_vertex(a, k), to = p.sheet_vertex(a, (k + 1) % n);
    moves.push_back({p.sheet_edge(ep, k), from, to});
  }
  p.total = std::make_shared<CGraph>(rewire(*p.total, moves));
  return p;
}

bool connected(const CGraph& g) { return g.num_vertices() == 0 || num_components(g) == 1; }

std::vector<char> bridges(const CGraph& g) {
  const int n = g.num_vertices();
  std::vector<char> br(g.num_edges(), 0);
  std::vector<int> tin(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int v, pe, i;
  };
  for (int s = 0; s < n; ++s) {
    if (tin[s] >= 0) continue;
    std::vector<Frame> st{{s, -1, 0}};
    tin[s] = low[s] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      const auto& inc = g.incident(f.v);
      if (f.i < (int)inc.size()) {
        int e = inc[f.i++];
        if (e == f.pe) continue;
        int w = g.other(e, f.v);
        if (tin[w] >= 0) {
          low[f.v] = std::min(low[f.v], tin[w]);
        } else {
          tin[w] = low[w] = timer++;
          st.push_back({w, e, 0});
        }
      } else {
        int v = f.v, pe = f.pe;
        st.pop_back();
        if (!st.empty()) {
          int u = st.back().v;
          low[u] = std::min(low[u], low[v]);
          if (low[v] > tin[u]) br[pe] = 1;
        }
      }
    }
  }
  return br;
}

int find_nondisconnecting_b2(const CGraph& g, const std::vector<int>& component) {
  Induced in = induced(g, component);
  auto br = bridges(in.g);
  for (int i = 0; i < in.g.num_vertices(); ++i) {
    if (in.g.kind(i) != Kind::B2 || g.kind(in.to_host_v[i]) != Kind::B2) continue;
    if (!br[in.g.incident(i)[0]] && !br[in.g.incident(i)[1]]) {
      // least id among candidates
      int best = in.to_host_v[i];
      for (int j = i + 1; j < in.g.num_vertices(); ++j)
        if (in.g.kind(j) == Kind::B2 && g.kind(in.to_host_v[j]) == Kind::B2 && !br[in.g.incident(j)[0]] &&
            !br[in.g.incident(j)[1]])
          best = std::min(best, in.to_host_v[j]);
      return best;
    }
  }
  throw Error("no non-disconnecting B2 vertex: component has no cycle");
}

std::optional<Lift> lift_into_sheet(const CoveringMap& p, const std::vector<int>& verts, int k) {
  const CGraph& B = *p.base;
  const CGraph& T = *p.total;
  std::vector<int> local(B.num_vertices(), -1);
  for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = (int)i;
  Lift L;
  L.v.assign(verts.size(), -1);
  for (int v : verts)
    for (int e : B.incident(v)) {
      int w = B.other(e, v);
      if (local[w] >= 0) L.base_edges.push_back(e);
    }
  std::sort(L.base_edges.begin(), L.base_edges.end());
  L.base_edges.erase(std::unique(L.base_edges.begin(), L.base_edges.end()), L.base_edges.end());
  for (size_t i = 0; i < verts.size(); ++i)
    if (!is_boundary(B.kind(verts[i]))) L.v[i] = p.sheet_vertex(verts[i], k);
  for (int e : L.base_edges) {
    int f = p.sheet_edge(e, k);
    L.e.push_back(f);
    const Edge& be = B.edge(e);
    const Edge& te = T.edge(f);
    for (int end = 0; end < 2; ++end) {
      int bv = end ? be.b : be.a;
      int tv = p.vmap[te.a] == bv ? te.a : te.b;
      int& slot = L.v[local[bv]];
      if (slot < 0) slot = tv;
      else if (slot != tv) return std::nullopt;
    }
  }
  for (size_t i = 0; i < verts.size(); ++i)
    if (L.v[i] < 0) L.v[i] = p.sheet_vertex(verts[i], k);
  return L;
}

}  // namespace forge

#include "forge/forest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace forge {

int CGraphForest::add_vertex(int fl, GraphPtr g) {
  floor.push_back(fl);
  graphs.push_back(std::move(g));
  top = std::max(top, fl);
  return num_vertices() - 1;
}

int CGraphForest::add_edge(int o, int t, InclusionPtr inc, std::optional<std::vector<PeelStep>> w) {
  edges.push_back({o, t, std::move(inc), std::move(w)});
  return static_cast<int>(edges.size()) - 1;
}

std::vector<int> CGraphForest::at_floor(int n) const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (floor[v] == n) out.push_back(v);
  return out;
}

std::vector<int> CGraphForest::out_edges(int v) const {
  std::vector<int> out;
  for (int e = 0; e < (int)edges.size(); ++e)
    if (edges[e].o == v) out.push_back(e);
  return out;
}

int CGraphForest::in_edge(int v) const {
  for (int e = 0; e < (int)edges.size(); ++e)
    if (edges[e].t == v) return e;
  return -1;
}

Report validate_forest(const CGraphForest& h) {
  Report r;
  std::vector<int> indeg(h.num_vertices(), 0), outdeg(h.num_vertices(), 0);
  for (int e = 0; e < (int)h.edges.size(); ++e) {
    const auto& ed = h.edges[e];
    std::string at = "edge " + std::to_string(e);
    if (ed.o < 0 || ed.t < 0 || ed.o >= h.num_vertices() || ed.t >= h.num_vertices()) {
      r.push_back({"endpoint out of range", at});
      continue;
    }
    if (h.floor[ed.t] != h.floor[ed.o] + 1) r.push_back({"edge does not join consecutive floors", at});
    ++indeg[ed.t];
    ++outdeg[ed.o];
  }
  for (int v = 0; v < h.num_vertices(); ++v) {
    std::string at = "vertex " + std::to_string(v);
    if (h.floor[v] > 0 && indeg[v] != 1) r.push_back({"not the terminal vertex of exactly one edge", at});
    if (h.floor[v] == 0 && indeg[v] != 0) r.push_back({"root with an incoming edge", at});
    if (h.floor[v] < h.top && outdeg[v] == 0) r.push_back({"vertex below the top floor without outgoing edge", at});
  }
  return r;
}

Report validate_cgraph_forest(const CGraphForest& h) {
  Report r = validate_forest(h);
  if (!r.empty()) return r;
  for (int v = 0; v < h.num_vertices(); ++v)
    for (auto& x : validate(*h.graphs[v])) r.push_back({"graph: " + x.what, "vertex " + std::to_string(v) + " " + x.where});
  for (int e = 0; e < (int)h.edges.size(); ++e) {
    const auto& ed = h.edges[e];
    const CGraph& a = *h.graphs[ed.o];
    const CGraph& b = *h.graphs[ed.t];
    for (auto& x : validate_inclusion(a, b, *ed.inc)) r.push_back({"inclusion: " + x.what, "edge " + std::to_string(e)});
    if (ed.witness && r.empty()) {
      try {
        Replay rp = replay_peel(a, b, *ed.inc, *ed.witness);
        if (!is_isomorphic(rp.g, b)) r.push_back({"witness does not replay to the target", "edge " + std::to_string(e)});
      } catch (const Error& err) {
        r.push_back({std::string("witness invalid: ") + err.what(), "edge " + std::to_string(e)});
      }
    }
  }
  return r;
}

CGraphForest sigma_compose(const CGraphForest& h, const std::vector<int>& sigma) {
  for (size_t i = 1; i < sigma.size(); ++i)
    if (sigma[i] <= sigma[i - 1]) throw Error("sigma must be strictly increasing");
  CGraphForest out;
  std::vector<int> newid(h.num_vertices(), -1);
  std::vector<int> in(h.num_vertices(), -1);
  for (int e = 0; e < (int)h.edges.size(); ++e) in[h.edges[e].t] = e;
  for (size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > h.top) throw Error("sigma exceeds the forest horizon");
    for (int v : h.at_floor(sigma[k])) {
      newid[v] = out.add_vertex((int)k, h.graphs[v]);
      if (k == 0) continue;
      // walk up to floor sigma[k-1], composing inclusions
      int u = v;
      CInclusion acc = identity_inclusion(*h.graphs[v]);
      while (h.floor[u] > sigma[k - 1]) {
        int e = in[u];
        if (e < 0) throw Error("sigma_compose: broken ancestry");
        acc = compose(*h.edges[e].inc, acc);
        u = h.edges[e].o;
      }
      out.add_edge(newid[u], newid[v], std::make_shared<CInclusion>(std::move(acc)));
    }
  }
  out.top = (int)sigma.size() - 1;
  return out;
}

namespace {

struct Chain {
  std::vector<GraphPtr> K;                // K_0 = H_o, ..., K_k
  std::vector<ElementaryStep> steps;      // step i builds K_{i+1}
  std::vector<InclusionPtr> incs;         // K_i -> K_{i+1}
  InclusionPtr iso;                       // K_k -> H_t
};

Chain build_chain(const CGraphForest& h, int e) {
  const auto& ed = h.edges[e];
  const CGraph& src = *h.graphs[ed.o];
  const CGraph& dst = *h.graphs[ed.t];
  std::vector<PeelStep> peel;
  if (ed.witness) peel = *ed.witness;
  else {
    auto p = peel_decomposition(src, dst, *ed.inc);
    if (!p) throw Error("edge " + std::to_string(e) + " is not elementarily decomposable");
    peel = *p;
  }
  Chain c;
  c.K.push_back(h.graphs[ed.o]);
  if (peel.empty()) {
    c.iso = ed.inc;
    return c;
  }
  std::vector<int> from_t(dst.num_vertices(), -1);
  for (int v = 0; v < src.num_vertices(); ++v) from_t[ed.inc->vmap[v]] = v;
  CGraph cur = src;
  for (const auto& st : peel) {
    ElementaryStep es{st.kind, {}};
    for (int a : st.attach) es.attach.push_back(from_t.at(a));
    Attached at = attach_piece(cur, es);
    from_t[st.center] = at.center;
    int next = at.center + 1;
    for (int x : dst.incident(st.center)) {
      int w = dst.other(x, st.center);
      if (std::find(st.attach.begin(), st.attach.end(), w) != st.attach.end()) continue;
      from_t[w] = next++;
    }
    c.steps.push_back(es);
    c.incs.push_back(std::make_shared<CInclusion>(at.inc));
    cur = at.g;
    c.K.push_back(std::make_shared<CGraph>(cur));
  }
  // iso K_k -> H_t
  CInclusion iso;
  iso.vmap.assign(cur.num_vertices(), -1);
  for (int t = 0; t < dst.num_vertices(); ++t)
    if (from_t[t] >= 0) iso.vmap[from_t[t]] = t;
  const int base_edges = src.num_edges();
  for (int x = 0; x < cur.num_edges(); ++x) {
    if (x < base_edges) {
      iso.emap.push_back(ed.inc->emap[x]);
      continue;
    }
    int U = iso.vmap[cur.edge(x).a], W = iso.vmap[cur.edge(x).b];
    int found = -1;
    for (int y : dst.incident(U))
      if (dst.other(y, U) == W) found = y;
    iso.emap.push_back(found);
  }
  auto rep = validate_inclusion(cur, dst, iso);
  if (!rep.empty() || cur.num_vertices() != dst.num_vertices() || cur.num_edges() != dst.num_edges())
    throw Error("edge " + std::to_string(e) + ": witness does not replay to the target");
  c.iso = std::make_shared<CInclusion>(std::move(iso));
  return c;
}

}  // namespace

Decomposed elementary_decomposition(const CGraphForest& h, int max_floor) {
  Decomposed D;
  D.vertex_of.assign(h.num_vertices(), -1);
  for (int v : h.at_floor(0)) D.vertex_of[v] = D.forest.add_vertex(0, h.graphs[v]);
  D.sigma.push_back(0);
  int fl = 0;
  std::unordered_map<const CGraph*, InclusionPtr> ident;
  auto identity_of = [&](const GraphPtr& g) {
    auto it = ident.find(g.get());
    if (it != ident.end()) return it->second;
    auto p = std::make_shared<CInclusion>(identity_inclusion(*g));
    ident[g.get()] = p;
    return InclusionPtr(p);
  };
  for (int n = 0; n < h.top; ++n) {
    std::vector<int> E;
    for (int e = 0; e < (int)h.edges.size(); ++e)
      if (h.floor[h.edges[e].o] == n) E.push_back(e);
    std::vector<Chain> chains;
    int S = 0;
    std::map<int, int> outs;
    for (int e : E) {
      chains.push_back(build_chain(h, e));
      S += (int)chains.back().steps.size();
      ++outs[h.edges[e].o];
    }
    if (S == 0) {
      if (fl + 1 > max_floor) { D.truncated = true; break; }
      ++fl;
      for (size_t i = 0; i < E.size(); ++i) {
        const auto& ed = h.edges[E[i]];
        int t = D.forest.add_vertex(fl, h.graphs[ed.t]);
        D.forest.add_edge(D.vertex_of[ed.o], t, ed.inc);
        D.vertex_of[ed.t] = t;
      }
      D.steps.push_back({});
      D.sigma.push_back(fl);
      continue;
    }
    bool rep = false;
    for (auto& [o, c] : outs) rep = rep || c > 1;
    std::vector<int> head(E.size());
    for (size_t i = 0; i < E.size(); ++i) head[i] = D.vertex_of[h.edges[E[i]].o];
    bool stop = false;
    if (rep) {
      if (fl + 1 > max_floor) { D.truncated = true; break; }
      ++fl;
      for (size_t i = 0; i < E.size(); ++i) {
        GraphPtr g = chains[i].K[0];
        int v = D.forest.add_vertex(fl, g);
        D.forest.add_edge(head[i], v, identity_of(g));
        head[i] = v;
      }
      D.steps.push_back({});
    }
    std::vector<int> pos(E.size(), 0);  // index of the current K in each chain
    int done = 0;
    for (size_t i = 0; i < E.size() && !stop; ++i) {
      for (size_t s = 0; s < chains[i].steps.size(); ++s) {
        if (fl + 1 > max_floor) { stop = true; break; }
        ++fl;
        ++done;
        bool last = done == S;
        for (size_t j = 0; j < E.size(); ++j) {
          const Chain& c = chains[j];
          const auto& ed = h.edges[E[j]];
          int v;
          if (j == i) {
            if (last) {
              v = D.forest.add_vertex(fl, h.graphs[ed.t]);
              D.forest.add_edge(head[j], v, std::make_shared<CInclusion>(compose(*c.incs[s], *c.iso)));
            } else {
              v = D.forest.add_vertex(fl, c.K[s + 1]);
              D.forest.add_edge(head[j], v, c.incs[s]);
            }
            pos[j] = (int)s + 1;
          } else if (last) {
            v = D.forest.add_vertex(fl, h.graphs[ed.t]);
            D.forest.add_edge(head[j], v, c.iso);
          } else {
            GraphPtr g = c.K[pos[j]];
            v = D.forest.add_vertex(fl, g);
            D.forest.add_edge(head[j], v, identity_of(g));
          }
          head[j] = v;
          if (last) D.vertex_of[ed.t] = v;
        }
        FloorStep fs;
        fs.elementary = true;
        fs.edge = (int)D.forest.edges.size() - (int)E.size() + (int)i;
        fs.step = chains[i].steps[s];
        D.steps.push_back(fs);
      }
    }
    if (stop) { D.truncated = true; break; }
    D.sigma.push_back(fl);
  }
  D.forest.top = fl;
  return D;
}

Truncation limit_truncation(const CGraphForest& h, const std::vector<int>& ray, int n) {
  if (n > (int)ray.size()) throw Error("ray shorter than the requested floor");
  std::vector<int> roots = h.at_floor(0);
  if (ray.empty()) {
    if (n != 0 || roots.empty()) throw Error("empty ray needs a root");
    return {*h.graphs[roots[0]], identity_inclusion(*h.graphs[roots[0]])};
  }
  if (h.floor[h.edges[ray[0]].o] != 0) throw Error("ray must start on floor 0");
  int v = h.edges[ray[0]].o;
  CInclusion acc = identity_inclusion(*h.graphs[v]);
  for (int i = 0; i < n; ++i) {
    const auto& ed = h.edges[ray[i]];
    if (ed.o != v) throw Error("inconsistent ray");
    acc = compose(acc, *ed.inc);
    v = ed.t;
  }
  return {*h.graphs[v], acc};
}

bool family_c_check(const CGraph& g, int n, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!validate(g).empty()) return fail("not a C-graph");
  if (!g.pointing) return fail("not pointed");
  int p = *g.pointing;
  auto d = bfs_dist(g, {p});
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (d[v] < 0 || d[v] > 2 * n + 1) return fail("vertex outside the ball of radius 2n+1");
    if (d[v] == 2 * n + 1 && g.kind(v) != Kind::B1) return fail("outer sphere not free boundary");
  }
  auto distinct_nb = [&](int c) {
    std::set<int> s;
    for (int e : g.incident(c)) s.insert(g.other(e, c));
    return (int)s.size() == g.valency(c);
  };
  if (!distinct_nb(p)) return fail("root is not a basic piece");
  std::vector<int> last_shell{p};
  for (int k = 1; k <= n; ++k) {
    bool any = false;
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (d[v] == 2 * k - 1) {
        // every old boundary vertex is met by exactly one new piece
        int up = 0;
        for (int e : g.incident(v)) up += d[g.other(e, v)] == 2 * k;
        if (up != 1) return fail("old boundary vertex met " + std::to_string(up) + " times in shell " + std::to_string(k));
      }
      if (d[v] == 2 * k + 1) {
        int down = 0;
        for (int e : g.incident(v)) down += d[g.other(e, v)] == 2 * k;
        if (down != 1) return fail("new pieces of shell " + std::to_string(k) + " are not disjoint");
      }
      if (d[v] != 2 * k) continue;
      any = true;
      if (!distinct_nb(v)) return fail("shell piece is not a basic piece");
      int contacts = 0;
      for (int e : g.incident(v)) contacts += d[g.other(e, v)] == 2 * k - 1;
      int want = g.kind(v) == Kind::H4 ? 2 : 1;
      if (contacts != want) return fail("piece meets the old boundary at " + std::to_string(contacts) + " vertices");
    }
    if (!any) return fail("shell " + std::to_string(k) + " adds nothing");
  }
  return true;
}

std::vector<CGraph> shell_extensions(const CGraph& B) {
  // boundary points grouped by their center (twins are interchangeable)
  std::map<int, std::vector<int>> by_center;
  for (int v = 0; v < B.num_vertices(); ++v)
    if (B.kind(v) == Kind::B1) by_center[B.other(B.incident(v)[0], v)].push_back(v);
  std::vector<std::vector<int>> blocks;
  for (auto& [c, pts] : by_center) blocks.push_back(pts);
  const int nb = (int)blocks.size();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nb; ++i)
    for (int j = i; j < nb; ++j) pairs.push_back({i, j});

  std::set<std::string> seen;
  std::vector<CGraph> out;
  std::vector<int> ns(nb), nh(nb), np(nb), mult(pairs.size());

  auto emit = [&]() {
    CGraph g = B;
    std::vector<size_t> cursor(nb, 0);
    auto take = [&](int b) { return blocks[b][cursor[b]++]; };
    auto add = [&](Piece pc, std::vector<int> at) {
      ElementaryStep st{pc, at};
      g = attach_piece(g, st).g;
    };
    for (int b = 0; b < nb; ++b) {
      for (int i = 0; i < ns[b]; ++i) add(Piece::S, {take(b)});
      for (int i = 0; i < nh[b]; ++i) add(Piece::H2, {take(b)});
    }
    for (size_t k = 0; k < pairs.size(); ++k)
      for (int m = 0; m < mult[k]; ++m) {
        int x = take(pairs[k].first);
        int y = take(pairs[k].second);
        add(Piece::H4, {x, y});
      }
    std::string cf = canonical_form(g);
    if (seen.insert(cf).second) out.push_back(std::move(g));
  };

  std::vector<int> rem(nb);
  std::function<void(size_t)> pair_rec = [&](size_t k) {
    if (k == pairs.size()) {
      for (int b = 0; b < nb; ++b)
        if (rem[b]) return;
      emit();
      return;
    }
    auto [i, j] = pairs[k];
    // once all pairs touching i have been decided, rem[i] must be zero
    int maxm = i == j ? rem[i] / 2 : std::min(rem[i], rem[j]);
    for (int m = 0; m <= maxm; ++m) {
      mult[k] = m;
      if (i == j) rem[i] -= 2 * m;
      else { rem[i] -= m; rem[j] -= m; }
      bool ok = true;
      if (j == nb - 1 && rem[i] != 0) ok = false;
      if (ok) pair_rec(k + 1);
      if (i == j) rem[i] += 2 * m;
      else { rem[i] += m; rem[j] += m; }
    }
    mult[k] = 0;
  };

  std::function<void(int)> block_rec = [&](int b) {
    if (b == nb) {
      for (int i = 0; i < nb; ++i) rem[i] = np[i];
      pair_rec(0);
      return;
    }
    int sz = (int)blocks[b].size();
    for (int s = 0; s <= sz; ++s)
      for (int hh = 0; s + hh <= sz; ++hh) {
        ns[b] = s;
        nh[b] = hh;
        np[b] = sz - s - hh;
        block_rec(b + 1);
      }
  };
  block_rec(0);
  return out;
}

CGraphForest universal_forest(int n, long long max_vertices) {
  if (n < 0) throw Error("depth must be nonnegative");
  CGraphForest F;
  for (Piece p : {Piece::H2, Piece::S, Piece::H4}) F.add_vertex(0, std::make_shared<CGraph>(basic_piece(p)));
  for (int k = 0; k < n; ++k) {
    for (int v : F.at_floor(k)) {
      auto kids = shell_extensions(*F.graphs[v]);
      for (auto& c : kids) {
        if (F.num_vertices() >= max_vertices)
          throw ResourceError("universal forest exceeds " + std::to_string(max_vertices) + " vertices");
        const CGraph& par = *F.graphs[v];
        auto cg = std::make_shared<CGraph>(std::move(c));
        int t = F.add_vertex(k + 1, cg);
        // attach_piece keeps old ids, so the inclusion is the identity prefix
        CInclusion inc;
        inc.vmap.resize(par.num_vertices());
        inc.emap.resize(par.num_edges());
        std::iota(inc.vmap.begin(), inc.vmap.end(), 0);
        std::iota(inc.emap.begin(), inc.emap.end(), 0);
        auto w = peel_decomposition(par, *cg, inc);
        F.add_edge(v, t, std::make_shared<CInclusion>(std::move(inc)), w);
      }
    }
  }
  F.top = n;
  return F;
}

CGraphForest ball_chain(const CGraph& g, int n) {
  if (!g.pointing) throw Error("ball_chain needs a pointed graph");
  CGraphForest F;
  std::vector<Induced> balls;
  for (int k = 0; k <= n; ++k) balls.push_back(ball_induced(g, *g.pointing, 2 * k + 1));
  int prev = -1;
  for (int k = 0; k <= n; ++k) {
    auto gp = std::make_shared<CGraph>(balls[k].g);
    int v = F.add_vertex(k, gp);
    if (k > 0) {
      const Induced& a = balls[k - 1];
      const Induced& b = balls[k];
      std::unordered_map<int, int> lv, le;
      for (int i = 0; i < (int)b.to_host_v.size(); ++i) lv[b.to_host_v[i]] = i;
      for (int i = 0; i < (int)b.to_host_e.size(); ++i) le[b.to_host_e[i]] = i;
      CInclusion inc;
      for (int x : a.to_host_v) inc.vmap.push_back(lv.at(x));
      for (int x : a.to_host_e) inc.emap.push_back(le.at(x));
      auto w = peel_decomposition(a.g, b.g, inc);
      if (!w) throw Error("ball chain step " + std::to_string(k) + " is not elementarily decomposable");
      F.add_edge(prev, v, std::make_shared<CInclusion>(std::move(inc)), w);
    }
    prev = v;
  }
  F.top = n;
  return F;
}

}  // namespace forge

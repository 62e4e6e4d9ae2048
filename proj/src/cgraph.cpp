#include "forge/cgraph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace forge {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::B1: return "B1";
    case Kind::B2: return "B2";
    case Kind::S4: return "S4";
    case Kind::H2: return "H2";
    case Kind::H4: return "H4";
  }
  return "?";
}

Kind kind_from_name(const std::string& s) {
  if (s == "B1") return Kind::B1;
  if (s == "B2") return Kind::B2;
  if (s == "S4") return Kind::S4;
  if (s == "H2") return Kind::H2;
  if (s == "H4") return Kind::H4;
  throw Error("unknown vertex kind '" + s + "'");
}

int kind_valency(Kind k) {
  switch (k) {
    case Kind::B1: return 1;
    case Kind::B2: case Kind::H2: return 2;
    case Kind::S4: case Kind::H4: return 4;
  }
  return 0;
}

int CGraph::add_vertex(Kind k) {
  kind_.push_back(k);
  inc_.emplace_back();
  return num_vertices() - 1;
}

int CGraph::add_edge(int a, int b) {
  if (a < 0 || b < 0 || a >= num_vertices() || b >= num_vertices())
    throw Error("edge endpoint out of range");
  edges_.push_back({a, b});
  int e = num_edges() - 1;
  inc_[a].push_back(e);
  if (b != a) inc_[b].push_back(e);
  return e;
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  for (const auto& v : r) os << v.where << ": " << v.what << "\n";
  return os.str();
}

Report validate(const CGraph& g) {
  Report r;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    std::string at = "e" + std::to_string(e);
    if (ed.a == ed.b) {
      r.push_back({"self-loop", at});
      continue;
    }
    bool ba = is_boundary(g.kind(ed.a)), bb = is_boundary(g.kind(ed.b));
    if (ba && bb) r.push_back({"edge endpoints both boundary", at});
    if (!ba && !bb) r.push_back({"edge endpoints both non-boundary", at});
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.valency(v) != kind_valency(g.kind(v)))
      r.push_back({"valency mismatch: " + std::string(kind_name(g.kind(v))) + " has valency " +
                       std::to_string(g.valency(v)),
                   "v" + std::to_string(v)});
  if (g.pointing) {
    int p = *g.pointing;
    if (p < 0 || p >= g.num_vertices())
      r.push_back({"pointing out of range", "pointing"});
    else if (is_boundary(g.kind(p)))
      r.push_back({"pointing at boundary vertex", "v" + std::to_string(p)});
  }
  return r;
}

namespace {
std::vector<int> component_ids(const CGraph& g, int* count) {
  std::vector<int> comp(g.num_vertices(), -1);
  int c = 0;
  std::vector<int> st;
  for (int s = 0; s < g.num_vertices(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = c;
    st.push_back(s);
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int e : g.incident(u)) {
        int w = g.other(e, u);
        if (comp[w] < 0) {
          comp[w] = c;
          st.push_back(w);
        }
      }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}
}  // namespace

int num_components(const CGraph& g) {
  int c = 0;
  component_ids(g, &c);
  return c;
}

int betti(const CGraph& g) { return g.num_edges() - g.num_vertices() + num_components(g); }

std::vector<int> bfs_dist(const CGraph& g, const std::vector<int>& roots) {
  std::vector<int> d(g.num_vertices(), -1);
  std::deque<int> q;
  for (int r : roots)
    if (d[r] < 0) {
      d[r] = 0;
      q.push_back(r);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int e : g.incident(u)) {
      int w = g.other(e, u);
      if (d[w] < 0) {
        d[w] = d[u] + 1;
        q.push_back(w);
      }
    }
  }
  return d;
}

Induced induced(const CGraph& host, const std::vector<int>& verts) {
  Induced out;
  std::vector<int> local(host.num_vertices(), -1);
  for (int v : verts) {
    if (local[v] >= 0) throw Error("duplicate vertex in subgraph");
    local[v] = out.g.add_vertex(host.kind(v));
    out.to_host_v.push_back(v);
  }
  // edges in host-id order so local edge ids are deterministic
  std::vector<int> es;
  for (int v : verts)
    for (int e : host.incident(v)) {
      int w = host.other(e, v);
      if (local[w] >= 0 && (v < w || (v == w))) es.push_back(e);
    }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  for (int e : es) {
    out.g.add_edge(local[host.edge(e).a], local[host.edge(e).b]);
    out.to_host_e.push_back(e);
  }
  for (int i = 0; i < out.g.num_vertices(); ++i)
    if (is_boundary(out.g.kind(i))) out.g.set_kind(i, out.g.valency(i) >= 2 ? Kind::B2 : Kind::B1);
  if (host.pointing && local[*host.pointing] >= 0) out.g.pointing = local[*host.pointing];
  return out;
}

Induced ball_induced(const CGraph& g, int v, int r) {
  auto d = bfs_dist(g, {v});
  std::vector<int> vs;
  for (int u = 0; u < g.num_vertices(); ++u)
    if (d[u] >= 0 && d[u] <= r) vs.push_back(u);
  // keep the center first, then by distance then id
  std::stable_sort(vs.begin(), vs.end(), [&](int a, int b) { return d[a] < d[b]; });
  Induced in = induced(g, vs);
  if (!is_boundary(g.kind(v))) in.g.pointing = 0;
  return in;
}

CGraph ball(const CGraph& g, int v, int r) { return ball_induced(g, v, r).g; }

bool is_c_subgraph(const CGraph& g, const std::vector<int>& verts) {
  std::vector<char> in(g.num_vertices(), 0);
  for (int v : verts) in[v] = 1;
  for (int v : verts) {
    if (is_boundary(g.kind(v))) continue;
    for (int e : g.incident(v))
      if (!in[g.other(e, v)]) return false;
  }
  return true;
}

bool hom_nontrivial(const CGraph& g, const std::vector<int>& verts) {
  for (int v : verts)
    if (is_h(g.kind(v))) return true;
  return betti(induced(g, verts).g) > 0;
}

std::vector<int> interior(const CGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.kind(v) != Kind::B1) out.push_back(v);
  return out;
}

Report validate_inclusion(const CGraph& src, const CGraph& dst, const CInclusion& inc) {
  Report r;
  if ((int)inc.vmap.size() != src.num_vertices() || (int)inc.emap.size() != src.num_edges()) {
    r.push_back({"map size mismatch", "inclusion"});
    return r;
  }
  std::vector<int> seen_v(dst.num_vertices(), 0), seen_e(dst.num_edges(), 0);
  for (int v = 0; v < src.num_vertices(); ++v) {
    int w = inc.vmap[v];
    std::string at = "v" + std::to_string(v);
    if (w < 0 || w >= dst.num_vertices()) {
      r.push_back({"vertex image out of range", at});
      continue;
    }
    if (seen_v[w]++) r.push_back({"vertex map not injective", at});
    Kind a = src.kind(v), b = dst.kind(w);
    if (a != b && !(a == Kind::B1 && b == Kind::B2)) r.push_back({"kind not preserved", at});
  }
  for (int e = 0; e < src.num_edges(); ++e) {
    int f = inc.emap[e];
    std::string at = "e" + std::to_string(e);
    if (f < 0 || f >= dst.num_edges()) {
      r.push_back({"edge image out of range", at});
      continue;
    }
    if (seen_e[f]++) r.push_back({"edge map not injective", at});
    const Edge& s = src.edge(e);
    const Edge& t = dst.edge(f);
    int a = inc.vmap[s.a], b = inc.vmap[s.b];
    if (!((a == t.a && b == t.b) || (a == t.b && b == t.a))) r.push_back({"edge endpoints not preserved", at});
  }
  if (!r.empty()) return r;
  // image closed under stars of non-boundary vertices
  for (int v = 0; v < src.num_vertices(); ++v)
    if (!is_boundary(src.kind(v)) && src.valency(v) != dst.valency(inc.vmap[v]))
      r.push_back({"image not a C-subgraph", "v" + std::to_string(v)});
  if (src.pointing && dst.pointing && inc.vmap[*src.pointing] != *dst.pointing)
    r.push_back({"pointing not preserved", "pointing"});
  return r;
}

CInclusion identity_inclusion(const CGraph& g) {
  CInclusion i;
  i.vmap.resize(g.num_vertices());
  i.emap.resize(g.num_edges());
  std::iota(i.vmap.begin(), i.vmap.end(), 0);
  std::iota(i.emap.begin(), i.emap.end(), 0);
  return i;
}

CInclusion compose(const CInclusion& first, const CInclusion& second) {
  CInclusion out;
  for (int v : first.vmap) out.vmap.push_back(second.vmap.at(v));
  for (int e : first.emap) out.emap.push_back(second.emap.at(e));
  return out;
}

const char* piece_name(Piece p) {
  switch (p) {
    case Piece::H2: return "H2piece";
    case Piece::S: return "Spiece";
    case Piece::H4: return "H4piece";
  }
  return "?";
}

Piece piece_from_name(const std::string& s) {
  if (s == "H2piece" || s == "h2") return Piece::H2;
  if (s == "Spiece" || s == "s") return Piece::S;
  if (s == "H4piece" || s == "h4") return Piece::H4;
  throw Error("unknown piece kind '" + s + "'");
}

Kind piece_center(Piece p) {
  return p == Piece::H2 ? Kind::H2 : p == Piece::S ? Kind::S4 : Kind::H4;
}

int piece_contacts(Piece p) { return p == Piece::H4 ? 2 : 1; }

CGraph basic_piece(Piece p) {
  CGraph g;
  int c = g.add_vertex(piece_center(p));
  for (int i = 0; i < kind_valency(piece_center(p)); ++i) g.add_edge(c, g.add_vertex(Kind::B1));
  g.pointing = c;
  return g;
}

Attached attach_piece(const CGraph& h, const ElementaryStep& step) {
  if ((int)step.attach.size() != piece_contacts(step.kind)) throw Error("invalid attachment: wrong contact count");
  if (step.attach.size() == 2 && step.attach[0] == step.attach[1])
    throw Error("invalid attachment: h4 contacts must be distinct");
  for (int a : step.attach)
    if (a < 0 || a >= h.num_vertices() || h.kind(a) != Kind::B1)
      throw Error("invalid attachment: vertex " + std::to_string(a) + " is not a free boundary vertex");
  Attached out{h, identity_inclusion(h), -1};
  CGraph& g = out.g;
  Kind ck = piece_center(step.kind);
  out.center = g.add_vertex(ck);
  for (int a : step.attach) {
    g.add_edge(out.center, a);
    g.set_kind(a, Kind::B2);
  }
  for (int i = (int)step.attach.size(); i < kind_valency(ck); ++i) g.add_edge(out.center, g.add_vertex(Kind::B1));
  return out;
}

namespace {
std::optional<Piece> piece_of(Kind k) {
  if (k == Kind::H2) return Piece::H2;
  if (k == Kind::S4) return Piece::S;
  if (k == Kind::H4) return Piece::H4;
  return std::nullopt;
}
int piece_rank(Piece p) { return p == Piece::H2 ? 0 : p == Piece::S ? 1 : 2; }
}  // namespace

std::optional<std::vector<PeelStep>> peel_decomposition(const CGraph& src, const CGraph& dst,
                                                        const CInclusion& inc) {
  if (!validate_inclusion(src, dst, inc).empty()) return std::nullopt;
  std::vector<char> in(dst.num_vertices(), 0);
  for (int v : inc.vmap) in[v] = 1;
  std::vector<int> centers;
  for (int v = 0; v < dst.num_vertices(); ++v) {
    if (in[v] || is_boundary(dst.kind(v))) continue;
    // a piece needs distinct boundary neighbors
    std::set<int> nb;
    for (int e : dst.incident(v)) nb.insert(dst.other(e, v));
    if ((int)nb.size() != dst.valency(v)) return std::nullopt;
    centers.push_back(v);
  }
  // every vertex outside the image must lie in some piece
  {
    std::vector<char> cov = in;
    for (int c : centers) {
      cov[c] = 1;
      for (int e : dst.incident(c)) cov[dst.other(e, c)] = 1;
    }
    for (char x : cov)
      if (!x) return std::nullopt;
  }
  std::sort(centers.begin(), centers.end(), [&](int a, int b) {
    int ra = piece_rank(*piece_of(dst.kind(a))), rb = piece_rank(*piece_of(dst.kind(b)));
    return ra != rb ? ra < rb : a < b;
  });
  const int k = (int)centers.size();
  std::vector<char> used(k, 0);
  std::vector<int> cur = std::vector<int>(in.begin(), in.end());
  std::vector<PeelStep> out;
  std::unordered_set<std::string> dead;
  std::function<bool()> rec = [&]() -> bool {
    if ((int)out.size() == k) return true;
    std::string key(used.begin(), used.end());
    if (dead.count(key)) return false;
    for (int i = 0; i < k; ++i) {
      if (used[i]) continue;
      int c = centers[i];
      Piece p = *piece_of(dst.kind(c));
      std::vector<int> contact;
      for (int e : dst.incident(c)) {
        int w = dst.other(e, c);
        if (cur[w]) contact.push_back(w);
      }
      if ((int)contact.size() != piece_contacts(p)) continue;
      used[i] = 1;
      std::vector<int> added;
      cur[c] = 1;
      for (int e : dst.incident(c)) {
        int w = dst.other(e, c);
        if (!cur[w]) {
          cur[w] = 1;
          added.push_back(w);
        }
      }
      out.push_back({p, c, contact});
      if (rec()) return true;
      out.pop_back();
      cur[c] = 0;
      for (int w : added) cur[w] = 0;
      used[i] = 0;
    }
    dead.insert(key);
    return false;
  };
  if (!rec()) return std::nullopt;
  return out;
}

Replay replay_peel(const CGraph& src, const CGraph& dst, const CInclusion& inc,
                   const std::vector<PeelStep>& steps) {
  Replay r{src, std::vector<int>(dst.num_vertices(), -1)};
  for (int v = 0; v < src.num_vertices(); ++v) r.from_target_v[inc.vmap[v]] = v;
  for (const auto& st : steps) {
    ElementaryStep es{st.kind, {}};
    for (int a : st.attach) {
      if (r.from_target_v[a] < 0) throw Error("peel step attaches outside the built part");
      es.attach.push_back(r.from_target_v[a]);
    }
    Attached at = attach_piece(r.g, es);
    r.from_target_v[st.center] = at.center;
    int next = at.center + 1;
    for (int e : dst.incident(st.center)) {
      int w = dst.other(e, st.center);
      if (std::find(st.attach.begin(), st.attach.end(), w) != st.attach.end()) continue;
      r.from_target_v[w] = next++;
    }
    r.g = std::move(at.g);
  }
  return r;
}

// ---- canonical form -------------------------------------------------------

namespace {

struct Refiner {
  int n;
  const std::vector<std::vector<int>>& adj;  // neighbor lists with multiplicity

  int refine(std::vector<int>& col) const {
    int ncol = 1 + *std::max_element(col.begin(), col.end());
    std::vector<std::pair<std::vector<int>, int>> sig(n);
    while (true) {
      for (int v = 0; v < n; ++v) {
        auto& s = sig[v].first;
        s.clear();
        s.push_back(col[v]);
        for (int u : adj[v]) s.push_back(col[u]);
        std::sort(s.begin() + 1, s.end());
        sig[v].second = v;
      }
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a].first < sig[b].first; });
      std::vector<int> nc(n);
      int c = 0;
      for (int i = 0; i < n; ++i) {
        if (i > 0 && sig[order[i]].first != sig[order[i - 1]].first) ++c;
        nc[order[i]] = c;
      }
      int cnt = c + 1;
      col.swap(nc);
      if (cnt == ncol) return cnt;
      ncol = cnt;
    }
  }
};

struct Search {
  int n;
  std::vector<std::vector<int>> adj;
  std::vector<std::pair<int, int>> edges;  // core edges (with multiplicity)
  Refiner ref{0, adj};

  bool have_first = false;
  std::vector<int> first_cert, first_col, first_path;
  std::vector<int> best_cert, best_col, best_path;
  std::vector<std::vector<int>> autos;

  std::vector<int> cert(const std::vector<int>& col) const {
    std::vector<int> c;
    c.reserve(edges.size());
    for (auto [a, b] : edges) {
      int x = col[a], y = col[b];
      if (x > y) std::swap(x, y);
      c.push_back(x * n + y);
    }
    std::sort(c.begin(), c.end());
    return c;
  }

  static int common(const std::vector<int>& a, const std::vector<int>& b) {
    int i = 0;
    while (i < (int)a.size() && i < (int)b.size() && a[i] == b[i]) ++i;
    return i;
  }

  void add_auto(const std::vector<int>& from_col, const std::vector<int>& to_col) {
    std::vector<int> inv(n);
    for (int v = 0; v < n; ++v) inv[to_col[v]] = v;
    std::vector<int> g(n);
    for (int u = 0; u < n; ++u) g[u] = inv[from_col[u]];
    autos.push_back(std::move(g));
  }

  std::vector<int> individualize(const std::vector<int>& col, int v) const {
    std::vector<int> c(n);
    for (int u = 0; u < n; ++u) c[u] = 2 * col[u] + ((u != v && col[u] == col[v]) ? 1 : 0);
    // compact
    std::vector<int> vals(c);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (int& x : c) x = int(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin());
    return c;
  }

  int run(std::vector<int>& col, std::vector<int>& path) {
    int ncol = 1 + *std::max_element(col.begin(), col.end());
    int depth = (int)path.size();
    if (ncol == n) {
      auto c = cert(col);
      if (!have_first) {
        have_first = true;
        first_cert = best_cert = c;
        first_col = best_col = col;
        first_path = best_path = path;
        return -1;
      }
      if (c == first_cert) {
        add_auto(first_col, col);
        return common(path, first_path);
      }
      if (c == best_cert) {
        add_auto(best_col, col);
        return common(path, best_path);
      }
      if (c < best_cert) {
        best_cert = c;
        best_col = col;
        best_path = path;
      }
      return -1;
    }
    std::vector<int> size(ncol, 0);
    for (int v = 0; v < n; ++v) ++size[col[v]];
    int target = 0;
    while (size[target] == 1) ++target;
    std::vector<int> cell;
    for (int v = 0; v < n; ++v)
      if (col[v] == target) cell.push_back(v);
    std::vector<int> explored;
    for (int v : cell) {
      if (!explored.empty() && !autos.empty()) {
        // orbits of automorphisms fixing the current path pointwise
        std::vector<int> uf(n);
        std::iota(uf.begin(), uf.end(), 0);
        std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
        for (const auto& g : autos) {
          bool fixes = true;
          for (int p : path)
            if (g[p] != p) { fixes = false; break; }
          if (!fixes) continue;
          for (int u = 0; u < n; ++u) uf[find(u)] = find(g[u]);
        }
        bool skip = false;
        for (int w : explored)
          if (find(w) == find(v)) { skip = true; break; }
        if (skip) continue;
      }
      auto child = individualize(col, v);
      ref.refine(child);
      path.push_back(v);
      int r = run(child, path);
      path.pop_back();
      explored.push_back(v);
      if (r >= 0 && r < depth) return r;
    }
    return -1;
  }
};

std::string label_of(const CGraph& g, int v) {
  std::string s = kind_name(g.kind(v));
  if (g.pointing && *g.pointing == v) s += "*";
  return s;
}

std::string component_form(const CGraph& g, const std::vector<int>& verts) {
  const int nv = g.num_vertices();
  std::vector<char> in(nv, 0);
  for (int v : verts) in[v] = 1;
  long long e2 = 0;
  for (int v : verts) e2 += g.valency(v);
  bool is_tree = e2 / 2 == (long long)verts.size() - 1;
  if (is_tree) {
    // rounds of simultaneous leaf removal give the center(s)
    std::vector<int> d(nv, 0);
    std::vector<char> gone(nv, 0);
    std::vector<int> layer;
    for (int v : verts) {
      d[v] = g.valency(v);
      if (d[v] <= 1) layer.push_back(v);
    }
    int left = (int)verts.size();
    while (left > 2) {
      std::vector<int> next;
      for (int v : layer) {
        gone[v] = 1;
        --left;
      }
      for (int v : layer)
        for (int e : g.incident(v)) {
          int w = g.other(e, v);
          if (!gone[w] && --d[w] == 1) next.push_back(w);
        }
      layer.swap(next);
    }
    std::vector<int> centers;
    for (int v : verts)
      if (!gone[v]) centers.push_back(v);
    auto rooted = [&](int root, int block) {
      // iterative post-order
      std::vector<std::string> c(nv);
      std::vector<int> par(nv, -2);
      std::vector<int> ord;
      std::vector<int> st{root};
      par[root] = block;
      while (!st.empty()) {
        int u = st.back();
        st.pop_back();
        ord.push_back(u);
        for (int e : g.incident(u)) {
          int w = g.other(e, u);
          if (w == par[u] || par[w] != -2 || w == block) continue;
          par[w] = u;
          st.push_back(w);
        }
      }
      std::vector<std::vector<std::string>> ch(nv);
      for (int i = (int)ord.size() - 1; i >= 0; --i) {
        int u = ord[i];
        std::sort(ch[u].begin(), ch[u].end());
        std::string s = "(" + label_of(g, u);
        for (auto& x : ch[u]) s += x;
        s += ")";
        ch[u].clear();
        if (u == root) return s;
        ch[par[u]].push_back(std::move(s));
      }
      return std::string();
    };
    if (centers.size() == 1) return "T" + rooted(centers[0], -1);
    std::string a = rooted(centers[0], centers[1]), b = rooted(centers[1], centers[0]);
    if (b < a) std::swap(a, b);
    return "E" + a + b;
  }
  std::vector<int> deg(nv, 0);
  for (int v : verts) deg[v] = g.valency(v);
  std::vector<char> removed(nv, 0);
  std::vector<std::vector<std::string>> child_codes(nv);
  std::vector<std::string> code(nv);
  std::deque<int> q;
  for (int v : verts)
    if (deg[v] <= 1) q.push_back(v);
  // peel pendant trees down to the 2-core
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (removed[v]) continue;
    removed[v] = 1;
    auto& cc = child_codes[v];
    std::sort(cc.begin(), cc.end());
    std::string c = "(" + label_of(g, v);
    for (auto& s : cc) c += s;
    c += ")";
    code[v] = std::move(c);
    cc.clear();
    cc.shrink_to_fit();
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (removed[w]) continue;
      child_codes[w].push_back(code[v]);
      if (--deg[w] <= 1) q.push_back(w);
    }
  }
  std::vector<int> core;
  for (int v : verts)
    if (!removed[v]) core.push_back(v);
  // core with hanging-tree labels
  const int n = (int)core.size();
  std::vector<int> local(nv, -1);
  for (int i = 0; i < n; ++i) local[core[i]] = i;
  std::vector<std::string> lab(n);
  for (int i = 0; i < n; ++i) {
    int v = core[i];
    auto& cc = child_codes[v];
    std::sort(cc.begin(), cc.end());
    std::string s = label_of(g, v);
    for (auto& x : cc) s += x;
    lab[i] = std::move(s);
  }
  std::vector<std::string> table(lab);
  std::sort(table.begin(), table.end());
  table.erase(std::unique(table.begin(), table.end()), table.end());
  Search S;
  S.n = n;
  S.adj.assign(n, {});
  std::vector<int> col(n);
  for (int i = 0; i < n; ++i) col[i] = int(std::lower_bound(table.begin(), table.end(), lab[i]) - table.begin());
  for (int v : core)
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (local[w] < 0) continue;
      S.adj[local[v]].push_back(local[w]);
      if (g.edge(e).a == v) S.edges.push_back({local[v], local[w]});
    }
  S.ref.n = n;
  S.ref.refine(col);
  std::vector<int> path;
  S.run(col, path);
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[S.best_col[v]] = v;
  std::ostringstream os;
  os << "C" << n << "[";
  for (auto& t : table) os << t << ";";
  os << "]";
  for (int p = 0; p < n; ++p)
    os << int(std::lower_bound(table.begin(), table.end(), lab[inv[p]]) - table.begin()) << ",";
  os << "|";
  for (int x : S.best_cert) os << x / n << "-" << x % n << ",";
  return os.str();
}

}  // namespace

std::string canonical_form(const CGraph& g) {
  int nc = 0;
  auto comp = component_ids(g, &nc);
  std::vector<std::vector<int>> members(nc);
  for (int v = 0; v < g.num_vertices(); ++v) members[comp[v]].push_back(v);
  std::vector<std::string> forms;
  for (auto& m : members) forms.push_back(component_form(g, m));
  std::sort(forms.begin(), forms.end());
  std::string out = "G" + std::to_string(nc) + "{";
  for (auto& f : forms) out += f + "}{";
  out.back() = ' ';
  return out;
}

bool is_isomorphic(const CGraph& a, const CGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  return canonical_form(a) == canonical_form(b);
}

CGraph figure_eight() {
  CGraph g;
  int s = g.add_vertex(Kind::S4);
  int x = g.add_vertex(Kind::B2);
  int y = g.add_vertex(Kind::B2);
  g.add_edge(s, x);
  g.add_edge(s, x);
  g.add_edge(s, y);
  g.add_edge(s, y);
  return g;
}

CGraph relabel(const CGraph& g, const std::vector<int>& vperm, const std::vector<int>& eperm) {
  // vperm[old] = new, eperm[old] = new
  int n = g.num_vertices(), m = g.num_edges();
  std::vector<int> vinv(n), einv(m);
  for (int v = 0; v < n; ++v) vinv[vperm[v]] = v;
  for (int e = 0; e < m; ++e) einv[eperm[e]] = e;
  CGraph out;
  for (int i = 0; i < n; ++i) out.add_vertex(g.kind(vinv[i]));
  for (int i = 0; i < m; ++i) {
    const Edge& e = g.edge(einv[i]);
    out.add_edge(vperm[e.a], vperm[e.b]);
  }
  if (g.pointing) out.pointing = vperm[*g.pointing];
  return out;
}

}  // namespace forge

#include "forge/collapse.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace forge {

namespace {
bool connected_subset(const CGraph& g, const std::vector<int>& verts) {
  if (verts.empty()) return true;
  std::vector<char> in(g.num_vertices(), 0), seen(g.num_vertices(), 0);
  for (int v : verts) in[v] = 1;
  std::vector<int> st{verts[0]};
  seen[verts[0]] = 1;
  size_t cnt = 1;
  while (!st.empty()) {
    int u = st.back();
    st.pop_back();
    for (int e : g.incident(u)) {
      int w = g.other(e, u);
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        ++cnt;
        st.push_back(w);
      }
    }
  }
  return cnt == verts.size();
}

Report check_family(const CGraph& g, const std::vector<std::vector<int>>& family) {
  Report r;
  std::vector<int> owner(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (is_h(g.kind(v))) r.push_back({"source has an h-vertex", "v" + std::to_string(v)});
  for (size_t i = 0; i < family.size(); ++i) {
    std::string at = "member " + std::to_string(i);
    if (family[i].empty()) {
      r.push_back({"empty member", at});
      continue;
    }
    for (int v : family[i]) {
      if (v < 0 || v >= g.num_vertices()) {
        r.push_back({"vertex out of range", at});
        return r;
      }
      if (owner[v] >= 0) r.push_back({"members overlap", at});
      owner[v] = (int)i;
      if (g.kind(v) == Kind::B1) r.push_back({"member touches boundary", at});
    }
    if (!connected_subset(g, family[i])) r.push_back({"member not connected", at});
    else if (betti(induced(g, family[i]).g) == 0) r.push_back({"member has trivial homology", at});
  }
  return r;
}
}  // namespace

Collapse quotient_by_family(const CGraph& g, const std::vector<std::vector<int>>& family) {
  Report r = check_family(g, family);
  if (!r.empty()) throw Error("invalid collapse family: " + r[0].where + ": " + r[0].what);
  Collapse c;
  c.source = g;
  c.family = family;
  std::vector<int> owner(g.num_vertices(), -1);
  for (size_t i = 0; i < family.size(); ++i)
    for (int v : family[i]) owner[v] = (int)i;
  c.vmap.assign(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (owner[v] < 0) c.vmap[v] = c.target.add_vertex(g.kind(v));
  std::vector<int> leaving(family.size(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    int oa = owner[g.edge(e).a], ob = owner[g.edge(e).b];
    if (oa != ob) {
      if (oa >= 0) ++leaving[oa];
      if (ob >= 0) ++leaving[ob];
    }
  }
  std::vector<int> hv(family.size());
  for (size_t i = 0; i < family.size(); ++i) {
    if (leaving[i] != 2 && leaving[i] != 4)
      throw Error("invalid collapse valency: member " + std::to_string(i) + " has " + std::to_string(leaving[i]) +
                  " leaving edges");
    hv[i] = c.target.add_vertex(leaving[i] == 2 ? Kind::H2 : Kind::H4);
    for (int v : family[i]) c.vmap[v] = hv[i];
  }
  c.emap.assign(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    int a = g.edge(e).a, b = g.edge(e).b;
    if (owner[a] >= 0 && owner[a] == owner[b]) continue;
    c.emap[e] = c.target.add_edge(c.vmap[a], c.vmap[b]);
  }
  if (g.pointing) c.target.pointing = c.vmap[*g.pointing];
  Report t = validate(c.target);
  if (!t.empty()) throw Error("invalid collapse: quotient is not a C-graph (" + t[0].where + ": " + t[0].what + ")");
  return c;
}

Collapse identity_collapse(const CGraph& g) { return quotient_by_family(g, {}); }

Report validate_collapse(const Collapse& c) {
  Report r = check_family(c.source, c.family);
  for (auto& v : validate(c.source)) r.push_back({"source: " + v.what, v.where});
  for (auto& v : validate(c.target)) r.push_back({"target: " + v.what, v.where});
  const CGraph& S = c.source;
  const CGraph& T = c.target;
  if ((int)c.vmap.size() != S.num_vertices() || (int)c.emap.size() != S.num_edges()) {
    r.push_back({"map size mismatch", "collapse"});
    return r;
  }
  if (!r.empty()) return r;
  std::vector<int> owner(S.num_vertices(), -1);
  for (size_t i = 0; i < c.family.size(); ++i)
    for (int v : c.family[i]) owner[v] = (int)i;
  std::vector<int> hit(T.num_vertices(), 0);
  std::vector<int> member_image(c.family.size(), -1);
  for (int v = 0; v < S.num_vertices(); ++v) {
    int w = c.vmap[v];
    std::string at = "v" + std::to_string(v);
    if (w < 0 || w >= T.num_vertices()) {
      r.push_back({"vertex image out of range", at});
      return r;
    }
    if (owner[v] >= 0) {
      int& mi = member_image[owner[v]];
      if (mi < 0) {
        mi = w;
        ++hit[w];
      } else if (mi != w) {
        r.push_back({"member not sent to one vertex", at});
      }
      if (!is_h(T.kind(w))) r.push_back({"member not sent to an h-vertex", at});
    } else {
      ++hit[w];
      if (S.kind(v) != T.kind(w)) r.push_back({"kind not preserved", at});
    }
  }
  for (int w = 0; w < T.num_vertices(); ++w)
    if (hit[w] != 1) r.push_back({"vertex map not bijective off the family", "target v" + std::to_string(w)});
  std::vector<int> ehit(T.num_edges(), 0);
  for (int e = 0; e < S.num_edges(); ++e) {
    int a = S.edge(e).a, b = S.edge(e).b;
    bool inside = owner[a] >= 0 && owner[a] == owner[b];
    int f = c.emap[e];
    std::string at = "e" + std::to_string(e);
    if (inside) {
      if (f != -1) r.push_back({"member edge not crushed", at});
      continue;
    }
    if (f < 0 || f >= T.num_edges()) {
      r.push_back({"edge image missing", at});
      continue;
    }
    ++ehit[f];
    int x = c.vmap[a], y = c.vmap[b];
    const Edge& t = T.edge(f);
    if (!((x == t.a && y == t.b) || (x == t.b && y == t.a))) r.push_back({"edge endpoints not preserved", at});
  }
  for (int f = 0; f < T.num_edges(); ++f)
    if (ehit[f] != 1) r.push_back({"edge map not bijective off the family", "target e" + std::to_string(f)});
  return r;
}

std::vector<int> preimage_component(const Collapse& c, const std::vector<int>& target_set) {
  std::vector<char> in(c.target.num_vertices(), 0);
  for (int v : target_set) in[v] = 1;
  std::vector<int> out;
  for (int v = 0; v < c.source.num_vertices(); ++v)
    if (in[c.vmap[v]]) out.push_back(v);
  if (connected_subset(c.target, target_set) && !connected_subset(c.source, out))
    throw Error("preimage of a connected set is disconnected");
  return out;
}

int FiniteEndsTree::count_at(int level) const {
  int n = 0;
  for (auto& nd : nodes) n += nd.level == level;
  return n;
}

int FiniteEndsTree::branches() const { return count_at(depth); }

std::string FiniteEndsTree::encode() const {
  std::function<std::string(int)> enc = [&](int i) {
    std::vector<std::string> ch;
    for (int c : nodes[i].children) ch.push_back(enc(c));
    std::sort(ch.begin(), ch.end());
    std::string s = nodes[i].hom ? "(h" : "(t";
    for (auto& x : ch) s += x;
    return s + ")";
  };
  return nodes.empty() ? "" : enc(0);
}

FiniteEndsTree ends_tree_exhaustion(const CGraph& g, const std::vector<std::vector<char>>& removed) {
  FiniteEndsTree t;
  t.depth = (int)removed.size();
  EndsNode root;
  root.level = 0;
  root.size = g.num_vertices();
  root.hom = g.num_vertices() > 0 && hom_nontrivial(g, [&] {
               std::vector<int> all(g.num_vertices());
               std::iota(all.begin(), all.end(), 0);
               return all;
             }());
  t.nodes.push_back(root);
  t.pruned.assign(t.depth + 1, 0);
  std::vector<int> node_of(g.num_vertices(), 0);  // node containing v at previous level
  for (int i = 1; i <= t.depth; ++i) {
    const auto& K = removed[i - 1];
    std::vector<int> comp(g.num_vertices(), -1);
    std::vector<int> next_node(g.num_vertices(), -1);
    for (int s = 0; s < g.num_vertices(); ++s) {
      if (K[s] || comp[s] >= 0) continue;
      std::vector<int> members{s}, st{s};
      comp[s] = s;
      while (!st.empty()) {
        int u = st.back();
        st.pop_back();
        for (int e : g.incident(u)) {
          int w = g.other(e, u);
          if (!K[w] && comp[w] < 0) {
            comp[w] = s;
            members.push_back(w);
            st.push_back(w);
          }
        }
      }
      bool frontier = false;
      for (int v : members) frontier = frontier || g.kind(v) == Kind::B1;
      if (!frontier) {
        ++t.pruned[i];
        continue;
      }
      int parent = node_of[s];
      if (parent < 0) {
        ++t.pruned[i];
        continue;
      }
      std::sort(members.begin(), members.end());
      EndsNode nd;
      nd.level = i;
      nd.parent = parent;
      nd.size = (int)members.size();
      nd.hom = hom_nontrivial(g, members);
      int id = (int)t.nodes.size();
      t.nodes.push_back(nd);
      t.nodes[parent].children.push_back(id);
      for (int v : members) next_node[v] = id;
    }
    node_of.swap(next_node);
  }
  return t;
}

FiniteEndsTree ends_tree(const CGraph& g, const std::vector<int>& roots, int depth) {
  auto d = bfs_dist(g, roots);
  std::vector<std::vector<char>> removed(depth, std::vector<char>(g.num_vertices(), 0));
  for (int i = 1; i <= depth; ++i)
    for (int v = 0; v < g.num_vertices(); ++v) removed[i - 1][v] = d[v] >= 0 && d[v] <= i;
  auto t = ends_tree_exhaustion(g, removed);
  t.roots = roots;
  return t;
}

bool ends_trees_equivalent(const FiniteEndsTree& a, const FiniteEndsTree& b) {
  return a.depth == b.depth && a.encode() == b.encode();
}

}  // namespace forge

#include "forge/cantor.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "forge/forest.hpp"

namespace forge {

namespace {

using u64 = std::uint64_t;
constexpr u64 kInf = PairSpec::kInfinite;

u64 sat_add(u64 a, u64 b) { return (a == kInf || b == kInf || a + b < a) ? kInf : a + b; }

bool is_prefix(const Cylinder& p, const Cylinder& c) {
  return p.size() <= c.size() && std::equal(p.begin(), p.end(), c.begin());
}

const PairSpec& same_spec(const ClopenSet& a, const ClopenSet& b) {
  if (a.spec() != b.spec() || !a.spec()) throw Error("clopen sets over different pair specs");
  return *a.spec();
}

bool has_edge(const PairSpec& s, int a, int b) {
  return std::binary_search(s.succ[a].begin(), s.succ[a].end(), b);
}

std::vector<Cylinder> canonical(const PairSpec& s, std::vector<Cylinder> c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::vector<Cylinder> anti;
  for (auto& x : c) {
    if (!anti.empty() && is_prefix(anti.back(), x)) continue;
    anti.push_back(std::move(x));
  }
  // merge complete sibling families, deepest first
  std::map<size_t, std::vector<Cylinder>> by_len;
  for (auto& x : anti) by_len[x.size()].push_back(std::move(x));
  std::vector<Cylinder> out;
  while (!by_len.empty()) {
    auto it = std::prev(by_len.end());
    size_t len = it->first;
    std::vector<Cylinder> level = std::move(it->second);
    by_len.erase(it);
    std::sort(level.begin(), level.end());
    for (size_t i = 0; i < level.size();) {
      size_t j = i;
      if (len > 1) {
        while (j < level.size() && std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) ++j;
      } else {
        j = i + 1;
      }
      int parent_state = len > 1 ? level[i][len - 2] : -1;
      if (len > 1 && j - i == s.succ[parent_state].size()) {
        Cylinder p(level[i].begin(), level[i].end() - 1);
        by_len[len - 1].push_back(std::move(p));
      } else {
        for (size_t k = i; k < j; ++k) out.push_back(std::move(level[k]));
      }
      i = j;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cylinder> children(const PairSpec& s, const Cylinder& c) {
  std::vector<Cylinder> out;
  for (int t : s.succ[c.back()]) {
    Cylinder x = c;
    x.push_back(t);
    out.push_back(std::move(x));
  }
  return out;
}

void diff_into(const PairSpec& s, const Cylinder& a, const std::vector<const Cylinder*>& bs,
               std::vector<Cylinder>& out) {
  std::vector<const Cylinder*> below;
  for (const Cylinder* b : bs) {
    if (is_prefix(*b, a)) return;
    if (is_prefix(a, *b)) below.push_back(b);
  }
  if (below.empty()) {
    out.push_back(a);
    return;
  }
  for (const auto& c : children(s, a)) diff_into(s, c, below, out);
}

bool k0_path(const PairSpec& s, const Cylinder& c) {
  if (!s.k0_state[c[0]]) return false;
  for (size_t i = 1; i < c.size(); ++i)
    if (!s.k0_step(c[i - 1], c[i])) return false;
  return true;
}

}  // namespace

SpecPtr make_pair_spec(int n, int start, const std::vector<std::pair<int, int>>& edges,
                       const std::vector<int>& k0_states,
                       const std::vector<std::pair<int, int>>& k0_edges) {
  if (n < 1) throw Error("pair spec needs at least one state");
  if (start < 0 || start >= n) throw Error("start state out of range");
  auto s = std::make_shared<PairSpec>();
  s->start = start;
  s->succ.assign(n, {});
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw Error("edge endpoint out of range");
    s->succ[a].push_back(b);
  }
  for (auto& v : s->succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) throw Error("state without outgoing edge");
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int t : s->succ[q])
      if (!seen[t]) seen[t] = 1, stack.push_back(t);
  }
  for (int q = 0; q < n; ++q)
    if (!seen[q]) throw Error("state " + std::to_string(q) + " unreachable from start");

  s->k0_state.assign(n, 0);
  s->k0_edge.assign(n, std::vector<char>(n, 0));
  for (int q : k0_states) {
    if (q < 0 || q >= n) throw Error("K0 state out of range");
    s->k0_state[q] = 1;
  }
  for (auto [a, b] : k0_edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || !has_edge(*s, a, b)) throw Error("K0 edge is not an edge");
    if (!s->k0_state[a] || !s->k0_state[b]) throw Error("K0 edge leaves the K0 states");
    s->k0_edge[a][b] = 1;
  }
  for (int q = 0; q < n; ++q) {
    if (!s->k0_state[q]) continue;
    bool out = false;
    for (int t : s->succ[q]) out |= s->k0_edge[q][t] != 0;
    if (!out) throw Error("K0 state " + std::to_string(q) + " has no outgoing K0 edge");
  }

  // reach[q][p]: p reachable from q in >= 0 steps
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int q = 0; q < n; ++q) {
    std::vector<int> st{q};
    reach[q][q] = 1;
    while (!st.empty()) {
      int x = st.back();
      st.pop_back();
      for (int t : s->succ[x])
        if (!reach[q][t]) reach[q][t] = 1, st.push_back(t);
    }
  }
  auto on_cycle = [&](int q) {
    for (int t : s->succ[q])
      if (reach[t][q]) return true;
    return false;
  };
  std::vector<char> branching(n), cyc(n);
  for (int q = 0; q < n; ++q) {
    cyc[q] = on_cycle(q);
    branching[q] = cyc[q] && s->succ[q].size() >= 2;
  }
  s->rays.assign(n, 0);
  s->in_d.assign(n, 0);
  std::vector<char> done(n, 0);
  // finite counts: non-cycle states form a DAG once branching cycles are excluded
  std::function<u64(int)> count = [&](int q) -> u64 {
    if (done[q]) return s->rays[q];
    u64 r = 0;
    bool inf = false;
    for (int p = 0; p < n; ++p) inf |= reach[q][p] && branching[p];
    if (inf) {
      r = kInf;
    } else if (cyc[q]) {
      r = 1;
    } else {
      for (int t : s->succ[q]) r = sat_add(r, count(t));
    }
    done[q] = 1;
    return s->rays[q] = r;
  };
  for (int q = 0; q < n; ++q) {
    count(q);
    bool d = true;
    for (int p = 0; p < n; ++p) d &= !reach[q][p] || s->succ[p].size() == 1;
    s->in_d[q] = d;
  }
  s->names.resize(n);
  for (int q = 0; q < n; ++q) s->names[q] = std::to_string(q);
  return s;
}

ClopenSet::ClopenSet(SpecPtr spec, std::vector<Cylinder> cyl) : spec_(std::move(spec)) {
  if (!spec_) throw Error("clopen set without pair spec");
  for (const auto& c : cyl) {
    if (c.empty() || c[0] != spec_->start) throw Error("cylinder does not begin at the start state");
    for (size_t i = 1; i < c.size(); ++i)
      if (c[i] < 0 || c[i] >= spec_->num_states() || !has_edge(*spec_, c[i - 1], c[i]))
        throw Error("cylinder is not a path of the automaton");
  }
  cyl_ = canonical(*spec_, std::move(cyl));
}

ClopenSet ClopenSet::whole(SpecPtr spec) {
  int s = spec->start;
  return ClopenSet(std::move(spec), {Cylinder{s}});
}

ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
  same_spec(a, b);
  std::vector<Cylinder> out;
  for (const auto& x : a.cylinders())
    for (const auto& y : b.cylinders()) {
      if (is_prefix(x, y))
        out.push_back(y);
      else if (is_prefix(y, x))
        out.push_back(x);
    }
  return ClopenSet(a.spec(), std::move(out));
}

ClopenSet unite(const ClopenSet& a, const ClopenSet& b) {
  same_spec(a, b);
  auto all = a.cylinders();
  all.insert(all.end(), b.cylinders().begin(), b.cylinders().end());
  return ClopenSet(a.spec(), std::move(all));
}

ClopenSet subtract(const ClopenSet& a, const ClopenSet& b) {
  const PairSpec& s = same_spec(a, b);
  std::vector<const Cylinder*> bs;
  for (const auto& y : b.cylinders()) bs.push_back(&y);
  std::vector<Cylinder> out;
  for (const auto& x : a.cylinders()) diff_into(s, x, bs, out);
  return ClopenSet(a.spec(), std::move(out));
}

bool is_empty(const ClopenSet& a) { return a.cylinders().empty(); }

u64 point_count(const ClopenSet& a) {
  u64 r = 0;
  for (const auto& c : a.cylinders()) r = sat_add(r, a.spec()->rays[c.back()]);
  return r;
}

bool is_finite(const ClopenSet& a) { return point_count(a) != kInf; }
bool is_singleton(const ClopenSet& a) { return point_count(a) == 1; }

bool meets_K0(const ClopenSet& a) {
  for (const auto& c : a.cylinders())
    if (k0_path(*a.spec(), c)) return true;
  return false;
}

bool subset(const ClopenSet& a, const ClopenSet& b) { return is_empty(subtract(a, b)); }

std::vector<ClopenSet> singletons(const ClopenSet& a) {
  if (!is_finite(a)) throw Error("singletons of an infinite clopen set");
  const PairSpec& s = *a.spec();
  std::vector<ClopenSet> out;
  std::function<void(Cylinder&)> walk = [&](Cylinder& c) {
    if (s.in_d[c.back()]) {
      out.emplace_back(a.spec(), std::vector<Cylinder>{c});
      return;
    }
    for (int t : s.succ[c.back()]) {
      c.push_back(t);
      walk(c);
      c.pop_back();
    }
  };
  for (auto c : a.cylinders()) walk(c);
  return out;
}

std::optional<ClopenSet> isolated_point(const ClopenSet& a) {
  const PairSpec& s = *a.spec();
  int n = s.num_states();
  for (const auto& c : a.cylinders()) {
    // shortest route from the cylinder's end into the deterministic tail
    std::vector<int> prev(n, -2);
    std::deque<int> q{c.back()};
    prev[c.back()] = -1;
    int hit = -1;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      if (s.in_d[x]) {
        hit = x;
        break;
      }
      for (int t : s.succ[x])
        if (prev[t] == -2) prev[t] = x, q.push_back(t);
    }
    if (hit < 0) continue;
    std::vector<int> tail;
    for (int x = hit; x != c.back(); x = prev[x]) tail.push_back(x);
    Cylinder w = c;
    w.insert(w.end(), tail.rbegin(), tail.rend());
    return ClopenSet(a.spec(), {w});
  }
  return std::nullopt;
}

std::optional<std::vector<ClopenSet>> split_infinite(const ClopenSet& a, int k) {
  if (k < 1 || is_empty(a) || is_finite(a)) return std::nullopt;
  const PairSpec& s = *a.spec();
  std::vector<Cylinder> front = a.cylinders();
  size_t base = 0;
  for (const auto& c : front) base = std::max(base, c.size());
  const size_t limit = base + (size_t)(k + 1) * (s.num_states() + 1);
  auto inf = [&](const Cylinder& c) { return s.rays[c.back()] == kInf; };
  while (true) {
    int n_inf = 0;
    int pick = -1;
    for (int i = 0; i < (int)front.size(); ++i) {
      if (!inf(front[i])) continue;
      ++n_inf;
      if (pick < 0 || front[i].size() < front[pick].size() ||
          (front[i].size() == front[pick].size() && front[i] < front[pick]))
        pick = i;
    }
    if (n_inf >= k) break;
    if (front[pick].size() > limit) return std::nullopt;
    Cylinder c = front[pick];
    front.erase(front.begin() + pick);
    for (auto& x : children(s, c)) front.push_back(std::move(x));
  }
  std::sort(front.begin(), front.end());
  std::vector<int> inf_idx;
  for (int i = 0; i < (int)front.size(); ++i)
    if (inf(front[i])) inf_idx.push_back(i);
  int total = (int)inf_idx.size();
  // group g starts at its first infinite cylinder; finite ones ride along
  std::vector<int> start_at(k);
  for (int g = 0; g < k; ++g) start_at[g] = g == 0 ? 0 : inf_idx[(size_t)g * total / k];
  std::vector<std::vector<Cylinder>> groups(k);
  for (int i = 0, g = 0; i < (int)front.size(); ++i) {
    while (g + 1 < k && i >= start_at[g + 1]) ++g;
    groups[g].push_back(front[i]);
  }
  std::vector<ClopenSet> out;
  for (auto& g : groups) out.emplace_back(a.spec(), std::move(g));
  return out;
}

std::string clopen_text(const ClopenSet& a) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < a.cylinders().size(); ++i) {
    if (i) os << ",";
    for (size_t j = 0; j < a.cylinders()[i].size(); ++j) {
      if (j) os << ".";
      os << a.spec()->names[a.cylinders()[i][j]];
    }
  }
  os << "}";
  return os.str();
}

bool condition_star(const PairSpec& s) {
  int n = s.num_states();
  std::vector<char> seen(2 * n, 0);
  int s0 = s.start * 2 + (s.k0_state[s.start] ? 0 : 1);
  std::vector<int> st{s0};
  seen[s0] = 1;
  while (!st.empty()) {
    int x = st.back();
    st.pop_back();
    int q = x / 2, bad = x % 2;
    if (bad && s.in_d[q]) return false;
    for (int t : s.succ[q]) {
      int y = t * 2 + (bad || !s.k0_step(q, t) ? 1 : 0);
      if (!seen[y]) seen[y] = 1, st.push_back(y);
    }
  }
  return true;
}

bool k1_infinite(const PairSpec& s) { return s.rays[s.start] == kInf; }

Partition prefix_partition(SpecPtr spec, int n) {
  std::vector<Cylinder> level{Cylinder{spec->start}};
  for (int i = 0; i < n; ++i) {
    std::vector<Cylinder> next;
    for (const auto& c : level)
      for (auto& x : children(*spec, c)) next.push_back(std::move(x));
    level = std::move(next);
  }
  Partition out;
  for (auto& c : level) out.emplace_back(spec, std::vector<Cylinder>{std::move(c)});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> partition_problems(const Partition& p) {
  std::vector<std::string> out;
  if (p.empty()) return {"empty partition"};
  std::vector<Cylinder> all;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].spec() != p[0].spec()) return {"members over different pair specs"};
    if (is_empty(p[i])) out.push_back("member " + std::to_string(i) + " is empty");
    all.insert(all.end(), p[i].cylinders().begin(), p[i].cylinders().end());
  }
  std::sort(all.begin(), all.end());
  for (size_t i = 1; i < all.size(); ++i)
    if (is_prefix(all[i - 1], all[i])) {
      out.push_back("members overlap");
      break;
    }
  if (!(ClopenSet(p[0].spec(), all) == ClopenSet::whole(p[0].spec()))) out.push_back("members do not cover K1");
  return out;
}

int parent_index(const Partition& p, const ClopenSet& b) {
  if (p.empty() || is_empty(b)) return -1;
  const PairSpec& s = *b.spec();
  std::map<Cylinder, int> owner;
  size_t maxlen = 0;
  for (int j = 0; j < (int)p.size(); ++j)
    for (const auto& c : p[j].cylinders()) {
      owner[c] = j;
      maxlen = std::max(maxlen, c.size());
    }
  Cylinder x = b.cylinders().front();
  while (true) {
    for (size_t len = 1; len <= x.size(); ++len) {
      auto it = owner.find(Cylinder(x.begin(), x.begin() + len));
      if (it != owner.end()) return subset(b, p[it->second]) ? it->second : -1;
    }
    if (x.size() > maxlen) return -1;
    x.push_back(s.succ[x.back()][0]);
  }
}

bool refines(const Partition& coarse, const Partition& fine) {
  for (const auto& b : fine)
    if (parent_index(coarse, b) < 0) return false;
  return true;
}

std::vector<Partition> split3(const ClopenSet& a, int n) {
  if (is_empty(a) || is_finite(a)) throw Error("split3 needs an infinite clopen set");
  std::vector<Partition> nu{{a}};
  for (int i = 0; i < n; ++i) {
    Partition next;
    for (const auto& m : nu.back()) {
      auto parts = split_infinite(m, 3);
      if (!parts) throw Error("clopen set " + clopen_text(m) + " has no split into three infinite pieces");
      for (auto& x : *parts) next.push_back(std::move(x));
    }
    std::sort(next.begin(), next.end());
    nu.push_back(std::move(next));
  }
  return nu;
}

LemmaResult partition_lemma(const Partition& xi, const Partition& mu, int max_floor) {
  for (const auto* p : {&xi, &mu}) {
    auto probs = partition_problems(*p);
    if (!probs.empty()) throw Error("partition lemma input: " + probs.front());
  }
  if (xi[0].spec() != mu[0].spec()) throw Error("clopen sets over different pair specs");
  for (const auto& a : xi)
    if (is_finite(a) && !is_singleton(a)) throw Error("partition lemma input: finite member is not a singleton");

  // eta^A per member of xi
  std::vector<std::vector<Partition>> etas;
  for (const auto& a : xi) {
    std::vector<ClopenSet> muA;
    for (const auto& b : mu) {
      ClopenSet x = intersect(a, b);
      if (is_empty(x)) continue;
      if (is_finite(x) && !is_singleton(x)) {
        for (auto& y : singletons(x)) muA.push_back(std::move(y));
      } else {
        muA.push_back(std::move(x));
      }
    }
    std::sort(muA.begin(), muA.end());
    if (muA.size() % 2 == 0) {
      // odd repair on the least infinite member
      auto it = std::find_if(muA.begin(), muA.end(), [](const ClopenSet& x) { return !is_finite(x); });
      if (it == muA.end()) throw Error("partition lemma: cannot make the subdivision odd");
      ClopenSet m = *it;
      muA.erase(it);
      if (auto x = isolated_point(m)) {
        muA.push_back(subtract(m, *x));
        muA.push_back(*x);
      } else {
        auto two = split_infinite(m, 2);
        if (!two) throw Error("partition lemma: cannot split " + clopen_text(m));
        muA.push_back((*two)[0]);
        muA.push_back((*two)[1]);
      }
      std::sort(muA.begin(), muA.end());
    }
    std::vector<Partition> levels{{a}};
    int m = ((int)muA.size() - 1) / 2;
    if (m >= 1) {
      // tails[i] = B_i union ... union B_{2m+1}, 0-based
      std::vector<ClopenSet> tails(muA.size());
      tails.back() = muA.back();
      for (int i = (int)muA.size() - 2; i >= 0; --i) tails[i] = unite(muA[i], tails[i + 1]);
      for (int i = 0; i + 2 < (int)muA.size(); i += 2) {
        if (meets_K0(tails[i])) levels.push_back({tails[i]});
        levels.push_back({muA[i], muA[i + 1], tails[i + 2]});
      }
    }
    etas.push_back(std::move(levels));
  }

  int N = 0;
  for (const auto& e : etas) N = std::max(N, (int)e.size() - 1);
  LemmaResult res;
  res.eta.assign(N + 1, {});
  for (const auto& e : etas)
    for (int i = 0; i < (int)e.size(); ++i)
      for (const auto& x : e[i]) res.eta[i].push_back(x);
  for (auto& p : res.eta) std::sort(p.begin(), p.end());

  // partition by minimal elements: members whose next level misses them
  for (const auto& e : etas)
    for (int i = 0; i < (int)e.size(); ++i) {
      ClopenSet next_hat = ClopenSet::empty(xi[0].spec());
      if (i + 1 < (int)e.size())
        for (const auto& y : e[i + 1]) next_hat = unite(next_hat, y);
      for (const auto& x : e[i])
        if (is_empty(intersect(x, next_hat))) res.minimal.emplace_back(x, i);
    }

  int top = std::min(N + 1, max_floor);
  res.seq.truncated = N + 1 > max_floor;
  res.seq.floors.assign(top + 1, {});
  for (int i = 0; i <= std::min(N, top); ++i) res.seq.floors[i] = res.eta[i];
  for (const auto& [c, o] : res.minimal) {
    if (o >= top) continue;
    if (meets_K0(c)) {
      for (int j = o + 1; j <= top; ++j) res.seq.floors[j].push_back(c);
    } else {
      auto delta = split3(c, top - o);
      for (int k = 1; k <= top - o; ++k)
        for (auto& x : delta[k]) res.seq.floors[o + k].push_back(std::move(x));
    }
  }
  for (auto& p : res.seq.floors) std::sort(p.begin(), p.end());
  return res;
}

namespace {

bool contains(const Partition& p, const ClopenSet& a) { return std::binary_search(p.begin(), p.end(), a); }

Partition sorted(Partition p) {
  std::sort(p.begin(), p.end());
  return p;
}

// Shared floor-by-floor rules; `from` is the first floor the K0 rule applies to.
void audit_floors(const PartitionSeq& s, int from, int split_from, std::vector<std::string>& out) {
  auto fl = [&](int i) { return "floor " + std::to_string(i) + ": "; };
  std::vector<Partition> fs;
  for (const auto& p : s.floors) fs.push_back(sorted(p));
  int last = (int)fs.size() - 1;
  for (int i = 0; i <= last; ++i)
    for (const auto& msg : partition_problems(fs[i])) out.push_back(fl(i) + msg);
  for (int i = 0; i < last; ++i) {
    std::vector<std::vector<int>> kids(fs[i].size());
    bool ok = true;
    for (int j = 0; j < (int)fs[i + 1].size(); ++j) {
      int p = parent_index(fs[i], fs[i + 1][j]);
      if (p < 0) {
        out.push_back(fl(i + 1) + "does not refine the previous floor");
        ok = false;
        break;
      }
      kids[p].push_back(j);
    }
    if (!ok || i < split_from) continue;
    for (int a = 0; a < (int)fs[i].size(); ++a) {
      bool repeat = kids[a].size() == 1 && fs[i + 1][kids[a][0]] == fs[i][a];
      if (!repeat && kids[a].size() != 3)
        out.push_back(fl(i) + "member " + clopen_text(fs[i][a]) + " splits into " +
                      std::to_string(kids[a].size()) + " pieces");
    }
  }
  for (int i = from; i <= last; ++i)
    for (const auto& a : fs[i]) {
      bool prev = i > 0 && contains(fs[i - 1], a);
      bool next = i < last && contains(fs[i + 1], a);
      bool meets = meets_K0(a);
      if (i == last && s.truncated) {
        if (prev && !meets) out.push_back(fl(i) + "repeated member avoids K0");
        continue;
      }
      if (meets != (prev || next))
        out.push_back(fl(i) + "member " + clopen_text(a) + (meets ? " meets K0 but is not repeated"
                                                                   : " avoids K0 but is repeated"));
    }
}

}  // namespace

std::vector<std::string> audit_lemma(const PartitionSeq& s, const Partition& mu) {
  std::vector<std::string> out;
  if (s.floors.empty()) return {"no floors"};
  audit_floors(s, 0, 0, out);
  const auto& last = s.floors.back();
  if (!s.truncated && !refines(mu, last)) out.push_back("last floor does not refine mu");
  for (const auto& a : last)
    if (is_finite(a) && !is_singleton(a)) out.push_back("finite member " + clopen_text(a) + " is not a singleton");
  return out;
}

std::vector<std::string> audit_adapted(const PartitionSeq& s) {
  std::vector<std::string> out;
  if (s.floors.size() < 2) return {"fewer than two floors"};
  if (s.floors[0].size() != 1) out.push_back("floor 0 has " + std::to_string(s.floors[0].size()) + " members");
  if (s.floors[1].size() != 2 && s.floors[1].size() != 4)
    out.push_back("floor 1 has " + std::to_string(s.floors[1].size()) + " members");
  audit_floors(s, 1, 1, out);
  for (size_t i = 1; i < s.floors.size(); ++i) {
    double bound = 4.0;
    for (size_t j = 1; j < i; ++j) bound *= 3.0;
    if ((double)s.floors[i].size() > bound) out.push_back("floor " + std::to_string(i) + " exceeds 4*3^(i-1) members");
  }
  auto spec = s.floors[0][0].spec();
  for (size_t n = 1; n <= s.checkpoints.size(); ++n) {
    int k = s.checkpoints[n - 1];
    if (k < 0 || k >= (int)s.floors.size()) {
      out.push_back("checkpoint " + std::to_string(n) + " out of range");
      continue;
    }
    if (n > 1 && k <= s.checkpoints[n - 2]) out.push_back("checkpoints not increasing");
    if (!refines(prefix_partition(spec, (int)n), sorted(s.floors[k])))
      out.push_back("floor " + std::to_string(k) + " does not refine the depth-" + std::to_string(n) + " cylinders");
  }
  return out;
}

PartitionSeq adapted_sequence(SpecPtr spec, int horizon, const AdaptOptions& opt) {
  if (!condition_star(*spec)) throw Error("pair not realizable: an isolated point of K1 lies outside K0");
  if (!k1_infinite(*spec)) throw Error("pair not realizable: K1 is finite");
  ClopenSet whole = ClopenSet::whole(spec);
  PartitionSeq out;
  out.floors.push_back({whole});
  std::optional<std::vector<ClopenSet>> first;
  if (opt.four) first = split_infinite(whole, 4);
  if (!first) first = split_infinite(whole, 2);
  if (!first) {
    // K1 has a single accumulation point: peel one isolated point
    auto x = isolated_point(whole);
    first = std::vector<ClopenSet>{subtract(whole, *x), *x};
  }
  out.floors.push_back(sorted(*first));
  if (opt.max_floor < 1) throw Error("adapted sequence needs at least two floors");
  for (int n = 1; n <= horizon || (int)out.floors.size() < opt.min_floors; ++n) {
    int base = (int)out.floors.size() - 1;
    if (base >= opt.max_floor) break;
    auto res = partition_lemma(out.floors.back(), prefix_partition(spec, n), opt.max_floor - base);
    for (size_t j = 1; j < res.seq.floors.size(); ++j) out.floors.push_back(std::move(res.seq.floors[j]));
    if (res.seq.truncated) {
      out.truncated = true;
      break;
    }
    out.checkpoints.push_back((int)out.floors.size() - 1);
  }
  return out;
}

Gxi build_Gxi(const PartitionSeq& seq, int n) {
  if (n < 1 || n >= (int)seq.floors.size()) throw Error("G_xi depth out of range");
  Gxi out;
  std::vector<std::vector<std::vector<int>>> kids(n);
  for (int i = 0; i < n; ++i) {
    kids[i].assign(seq.floors[i].size(), {});
    for (int j = 0; j < (int)seq.floors[i + 1].size(); ++j) {
      int p = parent_index(seq.floors[i], seq.floors[i + 1][j]);
      if (p < 0) throw Error("floor " + std::to_string(i + 1) + " does not refine floor " + std::to_string(i));
      kids[i][p].push_back(j);
    }
  }
  auto add = [&](Kind k, int floor, int member) {
    int v = out.g.add_vertex(k);
    out.floor_of.push_back(floor);
    out.member_of.push_back(member);
    return v;
  };
  out.node.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (int)seq.floors[i].size(); ++j) {
      int val = (int)kids[i][j].size() + (i > 0 ? 1 : 0);
      if (val != 2 && val != 4)
        throw Error("partition tree node on floor " + std::to_string(i) + " has valency " + std::to_string(val));
      out.node[i].push_back(add(val == 2 ? Kind::H2 : Kind::S4, i, j));
    }
  out.tips.assign(seq.floors[n].size(), -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (int)seq.floors[i].size(); ++j)
      for (int c : kids[i][j]) {
        if (i + 1 < n) {
          int mid = add(Kind::B2, -1, -1);
          out.g.add_edge(out.node[i][j], mid);
          out.g.add_edge(mid, out.node[i + 1][c]);
        } else {
          int tip = add(Kind::B1, -1, -1);
          out.g.add_edge(out.node[i][j], tip);
          out.tips[c] = tip;
        }
      }
  out.g.pointing = out.node[0][0];
  return out;
}

std::vector<std::string> ends_match_audit(const PartitionSeq& seq, int n) {
  std::vector<std::string> out;
  Gxi gx = build_Gxi(seq, n);
  const CGraph& g = gx.g;
  if (auto r = validate(g); !r.empty()) out.push_back("G_xi invalid: " + report_text(r));
  std::string why;
  if (!family_c_check(g, n - 1, &why)) out.push_back("G_xi outside the family: " + why);
  if (n >= 2) {
    int br = ends_tree(g, {*g.pointing}, 2 * n - 2).branches();
    if (br != (int)seq.floors[n].size())
      out.push_back("ends tree has " + std::to_string(br) + " branches, floor " + std::to_string(n) + " has " +
                    std::to_string(seq.floors[n].size()) + " members");
  }
  // parent node of each node, and cone unions bottom-up
  std::vector<int> parent(g.num_vertices(), -1);
  auto d = bfs_dist(g, {*g.pointing});
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int e : g.incident(v)) {
      int w = g.other(e, v);
      if (d[w] == d[v] - 1) {
        // step over the midpoint
        for (int f : g.incident(w)) {
          int u = g.other(f, w);
          if (d[u] == d[w] - 1) parent[v] = u;
        }
      }
    }
  auto member = [&](int v) -> const ClopenSet& {
    if (gx.floor_of[v] >= 0) return seq.floors[gx.floor_of[v]][gx.member_of[v]];
    int t = (int)(std::find(gx.tips.begin(), gx.tips.end(), v) - gx.tips.begin());
    return seq.floors[n][t];
  };
  auto spec = seq.floors[0][0].spec();
  std::vector<ClopenSet> cone(g.num_vertices(), ClopenSet::empty(spec));
  for (int t : gx.tips) cone[t] = member(t);
  for (int i = n - 1; i >= 0; --i)
    for (int v : gx.node[i])
      for (int e : g.incident(v)) {
        int w = g.other(e, v);
        if (d[w] != d[v] + 1) continue;
        int c = g.kind(w) == Kind::B1 ? w : -1;
        if (c < 0)
          for (int f : g.incident(w))
            if (d[g.other(f, w)] == d[w] + 1) c = g.other(f, w);
        cone[v] = unite(cone[v], cone[c]);
      }
  auto repeat = [&](int v) { return v >= 0 && gx.floor_of[v] >= 1 && g.kind(v) == Kind::H2; };
  for (int i = 0; i < n; ++i)
    for (int v : gx.node[i]) {
      const ClopenSet& a = member(v);
      std::string at = "floor " + std::to_string(i) + " member " + clopen_text(a);
      if (is_empty(a)) out.push_back(at + ": empty member");
      if (!(cone[v] == a)) out.push_back(at + ": cone of ends differs from the member");
      if (i >= 1 && meets_K0(a) != (repeat(v) || repeat(parent[v])))
        out.push_back(at + (meets_K0(a) ? ": meets K0 without an h2 node" : ": avoids K0 next to an h2 node"));
      if (i >= 1 && !meets_K0(a)) {
        std::vector<int> st{v};
        while (!st.empty()) {
          int x = st.back();
          st.pop_back();
          if (g.kind(x) == Kind::H2) out.push_back(at + ": h2 node below a K0-free member");
          for (int e : g.incident(x)) {
            int w = g.other(e, x);
            if (d[w] > d[x] && !is_boundary(g.kind(w))) st.push_back(w);
            if (d[w] > d[x] && g.kind(w) == Kind::B2)
              for (int f : g.incident(w))
                if (d[g.other(f, w)] > d[w]) st.push_back(g.other(f, w));
          }
        }
      }
    }
  return out;
}

CGraph finite_ends_graph(int k, int n) {
  if (k < 1) throw Error("finite ends graph needs k >= 1");
  if (n < 0) throw Error("negative depth");
  // descriptors: R = h2-ray, T = s-piece with three children, C = h4-chain
  struct Desc {
    char t;
    std::vector<int> kids;
  };
  std::vector<Desc> ds;
  auto mk = [&](char t) {
    ds.push_back({t, {}});
    return (int)ds.size() - 1;
  };
  Kind root_kind;
  std::vector<int> root_stubs;
  int subs;
  if (k % 2 == 0) {
    root_kind = Kind::H2;
    root_stubs = {mk('R'), mk('R')};
    subs = (k - 2) / 2;
  } else if (k == 1) {
    root_kind = Kind::H2;
    root_stubs = {mk('C')};
    subs = 0;
  } else {
    root_kind = Kind::S4;
    root_stubs = {mk('C'), mk('R'), mk('R')};
    subs = (k - 3) / 2;
  }
  for (int s = 0; s < subs; ++s) {
    std::deque<int> q(root_stubs.begin(), root_stubs.end());
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      if (ds[x].t == 'R') {
        int a = mk('R'), b = mk('R'), c = mk('R');
        ds[x].t = 'T';
        ds[x].kids = {a, b, c};
        break;
      }
      for (int y : ds[x].kids) q.push_back(y);
    }
  }
  CGraph g;
  int root = g.add_vertex(root_kind);
  g.pointing = root;
  struct Stub {
    int desc;
    std::vector<int> b;
  };
  std::vector<Stub> open;
  for (int x : root_stubs) {
    Stub st{x, {}};
    for (int c = 0; c < (ds[x].t == 'C' ? 2 : 1); ++c) {
      int b = g.add_vertex(Kind::B1);
      g.add_edge(root, b);
      st.b.push_back(b);
    }
    open.push_back(std::move(st));
  }
  for (int shell = 0; shell < n; ++shell) {
    std::vector<Stub> next;
    for (auto& st : open) {
      const Desc& dsc = ds[st.desc];
      Kind ck = dsc.t == 'R' ? Kind::H2 : dsc.t == 'T' ? Kind::S4 : Kind::H4;
      int c = g.add_vertex(ck);
      for (int b : st.b) {
        g.add_edge(c, b);
        g.set_kind(b, Kind::B2);
      }
      auto fresh = [&]() {
        int b = g.add_vertex(Kind::B1);
        g.add_edge(c, b);
        return b;
      };
      if (dsc.t == 'R') {
        next.push_back({st.desc, {fresh()}});
      } else if (dsc.t == 'C') {
        int b1 = fresh();
        int b2 = fresh();
        next.push_back({st.desc, {b1, b2}});
      } else {
        for (int y : dsc.kids) {
          Stub ns{y, {}};
          for (int r = 0; r < (ds[y].t == 'C' ? 2 : 1); ++r) ns.b.push_back(fresh());
          next.push_back(std::move(ns));
        }
      }
    }
    open = std::move(next);
  }
  return g;
}

}  // namespace forge

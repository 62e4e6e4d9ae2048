#include "forge/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace forge {

namespace fs = std::filesystem;

namespace {

long long as_id(const json& j) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) return std::stoll(j.get<std::string>());
  throw Error("id must be an integer");
}

// {"id": value} object or dense array -> map from file id to value
std::map<long long, long long> read_map(const json& j) {
  std::map<long long, long long> m;
  if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) m[(long long)i] = j[i].is_null() ? -1 : as_id(j[i]);
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) m[std::stoll(it.key())] = it.value().is_null() ? -1 : as_id(it.value());
  } else {
    throw Error("map must be an object or array");
  }
  return m;
}

json write_map(const std::vector<int>& v) {
  json o = json::object();
  for (size_t i = 0; i < v.size(); ++i) o[std::to_string(i)] = v[i] < 0 ? json(nullptr) : json(v[i]);
  return o;
}

int lookup(const std::vector<long long>& ids, long long x, const char* what) {
  auto it = std::lower_bound(ids.begin(), ids.end(), x);
  if (it == ids.end() || *it != x) throw Error(std::string("unknown ") + what + " id " + std::to_string(x));
  return int(it - ids.begin());
}

std::vector<int> dense(const std::map<long long, long long>& m, const std::vector<long long>& from,
                       const std::vector<long long>& to, const char* what) {
  std::vector<int> out(from.size(), -1);
  for (auto [k, v] : m) out[lookup(from, k, what)] = v < 0 ? -1 : lookup(to, v, what);
  return out;
}

json step_to_json(const PeelStep& s) {
  return {{"kind", piece_name(s.kind)}, {"center", s.center}, {"attach", s.attach}};
}

PeelStep step_from_json(const json& j) {
  return {piece_from_name(j.at("kind").get<std::string>()), j.at("center").get<int>(),
          j.at("attach").get<std::vector<int>>()};
}

}  // namespace

json graph_to_json(const CGraph& g) {
  json vs = json::array(), es = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) vs.push_back({{"id", v}, {"kind", kind_name(g.kind(v))}});
  for (int e = 0; e < g.num_edges(); ++e) es.push_back({{"id", e}, {"a", g.edge(e).a}, {"b", g.edge(e).b}});
  return {{"vertices", vs}, {"edges", es}, {"pointing", g.pointing ? json(*g.pointing) : json(nullptr)}};
}

CGraph graph_from_json(const json& j, IdMap* ids) {
  IdMap m;
  std::map<long long, Kind> kinds;
  for (const auto& v : j.at("vertices")) {
    long long id = as_id(v.at("id"));
    if (kinds.count(id)) throw Error("duplicate vertex id " + std::to_string(id));
    kinds[id] = kind_from_name(v.at("kind").get<std::string>());
  }
  std::map<long long, std::pair<long long, long long>> edges;
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) {
      long long id = as_id(e.at("id"));
      if (edges.count(id)) throw Error("duplicate edge id " + std::to_string(id));
      edges[id] = {as_id(e.at("a")), as_id(e.at("b"))};
    }
  CGraph g;
  for (auto& [id, k] : kinds) m.v.push_back(id), g.add_vertex(k);
  for (auto& [id, ab] : edges) {
    m.e.push_back(id);
    g.add_edge(lookup(m.v, ab.first, "vertex"), lookup(m.v, ab.second, "vertex"));
  }
  if (j.contains("pointing") && !j["pointing"].is_null()) g.pointing = lookup(m.v, as_id(j["pointing"]), "vertex");
  if (ids) *ids = std::move(m);
  return g;
}

json covering_to_json(const CoveringMap& p) {
  json j = graph_to_json(*p.total);
  j["base"] = graph_to_json(*p.base);
  j["vmap"] = write_map(p.vmap);
  j["emap"] = write_map(p.emap);
  if (p.sheeted()) j["copy"] = p.copy;
  return j;
}

CoveringMap covering_from_json(const json& j) {
  IdMap ti, bi;
  CoveringMap p;
  p.total = std::make_shared<CGraph>(graph_from_json(j, &ti));
  p.base = std::make_shared<CGraph>(graph_from_json(j.at("base"), &bi));
  p.vmap = dense(read_map(j.at("vmap")), ti.v, bi.v, "vertex");
  p.emap = dense(read_map(j.at("emap")), ti.e, bi.e, "edge");
  if (std::count(p.vmap.begin(), p.vmap.end(), -1) || std::count(p.emap.begin(), p.emap.end(), -1))
    throw Error("covering map is not total");
  if (j.contains("copy")) p.copy = j["copy"].get<std::vector<int>>();
  else p.copy.assign(p.total->num_vertices(), -1);
  return p;
}

json collapse_to_json(const Collapse& c) {
  return {{"source", graph_to_json(c.source)},
          {"target", graph_to_json(c.target)},
          {"family", c.family},
          {"vmap", write_map(c.vmap)},
          {"emap", write_map(c.emap)}};
}

Collapse collapse_from_json(const json& j) {
  IdMap si, ti;
  Collapse c;
  c.source = graph_from_json(j.at("source"), &si);
  c.target = graph_from_json(j.at("target"), &ti);
  for (const auto& mem : j.at("family")) {
    std::vector<int> m;
    for (const auto& x : mem) m.push_back(lookup(si.v, as_id(x), "vertex"));
    c.family.push_back(m);
  }
  c.vmap = dense(read_map(j.at("vmap")), si.v, ti.v, "vertex");
  c.emap = dense(read_map(j.at("emap")), si.e, ti.e, "edge");
  return c;
}

json forest_to_json(const CGraphForest& h) {
  json graphs = json::object(), vs = json::array(), es = json::array();
  for (int v = 0; v < h.num_vertices(); ++v) {
    std::string key = graph_hash(*h.graphs[v]);
    if (!graphs.contains(key)) graphs[key] = graph_to_json(*h.graphs[v]);
    vs.push_back({{"id", v}, {"floor", h.floor[v]}, {"graph", key}});
  }
  for (const auto& e : h.edges) {
    json w = nullptr;
    if (e.witness) {
      w = json::array();
      for (const auto& s : *e.witness) w.push_back(step_to_json(s));
    }
    es.push_back({{"o", e.o}, {"t", e.t}, {"vmap", e.inc->vmap}, {"emap", e.inc->emap}, {"witness", w}});
  }
  return {{"top", h.top}, {"graphs", graphs}, {"vertices", vs}, {"edges", es}};
}

CGraphForest forest_from_json(const json& j) {
  CGraphForest h;
  std::map<std::string, GraphPtr> graphs;
  for (auto it = j.at("graphs").begin(); it != j.at("graphs").end(); ++it)
    graphs[it.key()] = std::make_shared<CGraph>(graph_from_json(it.value()));
  std::map<long long, int> vid;
  for (const auto& v : j.at("vertices")) {
    auto g = graphs.find(v.at("graph").get<std::string>());
    if (g == graphs.end()) throw Error("forest vertex refers to an unknown graph");
    vid[as_id(v.at("id"))] = h.add_vertex(v.at("floor").get<int>(), g->second);
  }
  for (const auto& e : j.at("edges")) {
    auto inc = std::make_shared<CInclusion>();
    inc->vmap = e.at("vmap").get<std::vector<int>>();
    inc->emap = e.at("emap").get<std::vector<int>>();
    std::optional<std::vector<PeelStep>> w;
    if (e.contains("witness") && !e["witness"].is_null()) {
      w.emplace();
      for (const auto& s : e["witness"]) w->push_back(step_from_json(s));
    }
    h.add_edge(vid.at(as_id(e.at("o"))), vid.at(as_id(e.at("t"))), inc, w);
  }
  h.top = j.at("top").get<int>();
  return h;
}

json pair_to_json(const PairSpec& s) {
  bool numeric = std::all_of(s.names.begin(), s.names.end(), [](const std::string& n) {
    return !n.empty() && std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
  auto name = [&](int q) { return numeric ? json(std::stoll(s.names[q])) : json(s.names[q]); };
  json states = json::array(), edges = json::array(), k0s = json::array(), k0e = json::array();
  for (int q = 0; q < s.num_states(); ++q) {
    states.push_back(name(q));
    if (s.k0_state[q]) k0s.push_back(name(q));
    for (int t : s.succ[q]) {
      edges.push_back({name(q), name(t)});
      if (s.k0_step(q, t)) k0e.push_back({name(q), name(t)});
    }
  }
  return {{"states", states}, {"edges", edges}, {"start", name(s.start)}, {"k0_states", k0s}, {"k0_edges", k0e}};
}

SpecPtr pair_from_json(const json& j) {
  auto key = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  std::map<std::string, int> idx;
  std::vector<std::string> names;
  for (const auto& s : j.at("states")) {
    if (idx.count(key(s))) throw Error("duplicate state " + key(s));
    idx[key(s)] = (int)names.size();
    names.push_back(key(s));
  }
  auto at = [&](const json& x) {
    auto it = idx.find(key(x));
    if (it == idx.end()) throw Error("unknown state " + key(x));
    return it->second;
  };
  std::vector<std::pair<int, int>> edges, k0e;
  std::vector<int> k0s;
  for (const auto& e : j.at("edges")) edges.push_back({at(e.at(0)), at(e.at(1))});
  for (const auto& q : j.value("k0_states", json::array())) k0s.push_back(at(q));
  for (const auto& e : j.value("k0_edges", json::array())) k0e.push_back({at(e.at(0)), at(e.at(1))});
  SpecPtr base = make_pair_spec((int)names.size(), at(j.at("start")), edges, k0s, k0e);
  auto named = std::make_shared<PairSpec>(*base);
  named->names = names;
  return named;
}

json partition_seq_to_json(const PartitionSeq& s) {
  json floors = json::array();
  for (const auto& p : s.floors) {
    json f = json::array();
    for (const auto& m : p) f.push_back(m.cylinders());
    floors.push_back(f);
  }
  return {{"floors", floors}, {"checkpoints", s.checkpoints}, {"truncated", s.truncated}};
}

PartitionSeq partition_seq_from_json(const json& j, SpecPtr spec) {
  PartitionSeq s;
  for (const auto& f : j.at("floors")) {
    Partition p;
    for (const auto& m : f) p.push_back(ClopenSet(spec, m.get<std::vector<Cylinder>>()));
    s.floors.push_back(p);
  }
  s.checkpoints = j.at("checkpoints").get<std::vector<int>>();
  s.truncated = j.at("truncated").get<bool>();
  return s;
}

json ends_tree_to_json(const FiniteEndsTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"level", n.level}, {"parent", n.parent}, {"hom", n.hom}, {"size", n.size}});
  return {{"depth", t.depth}, {"branches", t.branches()}, {"nodes", nodes}, {"pruned", t.pruned},
          {"code", t.encode()}};
}

FiniteEndsTree ends_tree_from_json(const json& j) {
  FiniteEndsTree t;
  t.depth = j.at("depth").get<int>();
  for (const auto& n : j.at("nodes")) {
    EndsNode nd;
    nd.level = n.at("level").get<int>();
    nd.parent = n.at("parent").get<int>();
    nd.hom = n.at("hom").get<bool>();
    nd.size = n.value("size", 0);
    t.nodes.push_back(nd);
  }
  for (int i = 0; i < (int)t.nodes.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p >= i || (p < 0 && i > 0)) throw Error("ends tree parents must precede children");
    if (p >= 0) t.nodes[p].children.push_back(i);
  }
  t.pruned = j.value("pruned", std::vector<int>{});
  return t;
}

json triple_to_json(const ClassifyingTriple& t) {
  json j = {{"genus", t.genus ? json(*t.genus) : json("infinite")},
            {"genus_from_trend", t.genus_from_trend},
            {"e0_nonempty", t.e0_nonempty()},
            {"condition_star", tri_name(condition_star_triple(t))},
            {"text", triple_text(t)}};
  if (t.pair) j["pair"] = pair_to_json(*t.pair);
  if (t.tree) j["ends"] = {{"depth", t.depth}, {"branches", t.ends}, {"genus_branches", t.ends_hom}};
  j["problems"] = json::array();
  for (const auto& v : check_triple(t)) j["problems"].push_back(v.what);
  return j;
}

json leaf_report_to_json(const LeafReport& r) {
  json floors = json::array();
  for (const auto& f : r.floors)
    floors.push_back({{"floor", f.floor},
                      {"vertices", f.g.num_vertices()},
                      {"edges", f.g.num_edges()},
                      {"betti", f.betti},
                      {"branches", f.branches},
                      {"nested", f.nested},
                      {"graph_hash", graph_hash(f.g)},
                      {"ends", ends_tree_to_json(f.ends)}});
  json j = {{"ray", r.ray}, {"floors", floors}, {"genus", r.genus}, {"ends_hom", r.ends_hom}};
  if (!r.floors.empty()) j["triple"] = triple_to_json(surface_triple_of_graph(r));
  return j;
}

LeafReport leaf_report_from_json(const json& j) {
  LeafReport r;
  r.ray = j.value("ray", std::string());
  for (const auto& f : j.at("floors")) {
    LeafFloor fl;
    fl.floor = f.at("floor").get<int>();
    fl.betti = f.at("betti").get<int>();
    fl.ends = ends_tree_from_json(f.at("ends"));
    fl.branches = fl.ends.branches();
    fl.nested = f.value("nested", true);
    r.floors.push_back(std::move(fl));
  }
  r.genus = j.value("genus", r.floors.empty() ? 0 : r.floors.back().betti);
  r.ends_hom = j.value("ends_hom", false);
  return r;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = d[h & 15];
  return s;
}

std::string graph_hash(const CGraph& g) { return hash_hex(fnv1a(graph_to_json(g).dump())); }

std::string emit_dot(const CGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n  node [label=\"\", width=0.15, height=0.15];\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    Kind k = g.kind(v);
    os << "  v" << v << " [";
    if (is_boundary(k)) os << "shape=circle, style=solid, fillcolor=white";
    else if (k == Kind::S4) os << "shape=circle, style=filled, fillcolor=black";
    else os << "shape=square, style=filled, fillcolor=gray";
    os << ", xlabel=\"" << kind_name(k) << "\"";
    if (g.pointing && *g.pointing == v) os << ", penwidth=3";
    os << "];\n";
  }
  for (int e = 0; e < g.num_edges(); ++e) os << "  v" << g.edge(e).a << " -- v" << g.edge(e).b << ";\n";
  os << "}\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << bytes;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

json manifest_to_json(const Manifest& m) {
  json files = json::array();
  for (auto& [n, h] : m.files) files.push_back({{"name", n}, {"fnv1a64", h}});
  return {{"version", m.version}, {"seed", m.seed}, {"files", files}, {"ops", m.ops}, {"notes", m.notes}};
}

Manifest manifest_from_json(const json& j) {
  Manifest m;
  m.version = j.at("version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& f : j.at("files")) m.files.push_back({f.at("name"), f.at("fnv1a64")});
  m.ops = j.at("ops").get<std::vector<std::string>>();
  m.notes = j.value("notes", json::object());
  return m;
}

namespace {

json decomposed_to_json(const Decomposed& d) {
  json steps = json::array();
  for (const auto& s : d.steps) {
    json x = {{"elementary", s.elementary}, {"edge", s.edge}};
    if (s.elementary) x["kind"] = piece_name(s.step.kind), x["attach"] = s.step.attach;
    steps.push_back(x);
  }
  return {{"forest", forest_to_json(d.forest)}, {"sigma", d.sigma}, {"vertex_of", d.vertex_of},
          {"steps", steps}, {"truncated", d.truncated}};
}

Decomposed decomposed_from_json(const json& j) {
  Decomposed d;
  d.forest = forest_from_json(j.at("forest"));
  d.sigma = j.at("sigma").get<std::vector<int>>();
  d.vertex_of = j.at("vertex_of").get<std::vector<int>>();
  for (const auto& x : j.at("steps")) {
    FloorStep s;
    s.elementary = x.at("elementary").get<bool>();
    s.edge = x.at("edge").get<int>();
    if (s.elementary) s.step = {piece_from_name(x.at("kind").get<std::string>()), x.at("attach").get<std::vector<int>>()};
    d.steps.push_back(s);
  }
  d.truncated = j.at("truncated").get<bool>();
  return d;
}

// compact cover between two floor files
json floor_cover_to_json(const CoveringMap& q, int n) {
  return {{"base", "floor_" + std::to_string(n) + ".json"},
          {"total", "floor_" + std::to_string(n + 1) + ".json"},
          {"vmap", q.vmap},
          {"emap", q.emap}};
}

void put(const std::string& dir, Manifest& m, const std::string& name, const json& j) {
  std::string bytes = j.dump();
  write_file((fs::path(dir) / name).string(), bytes);
  m.files.push_back({name, hash_hex(fnv1a(bytes))});
}

}  // namespace

void write_tower(const std::string& dir, const ExtendedTower& t, Manifest m) {
  fs::create_directories(dir);
  const RealizedForest& rf = t.rf;
  m.files.clear();
  for (size_t n = 0; n < rf.gamma.size(); ++n) put(dir, m, "floor_" + std::to_string(n) + ".json", graph_to_json(*rf.gamma[n]));
  json base = {{"total", "floor_0.json"}, {"vmap", rf.base.vmap}, {"emap", rf.base.emap},
               {"base_graph", graph_to_json(*rf.base.base)}};
  put(dir, m, "base_cover.json", base);
  for (size_t n = 0; n < rf.q.size(); ++n) put(dir, m, "cover_" + std::to_string(n) + ".json", floor_cover_to_json(rf.q[n], (int)n));
  put(dir, m, "forest.json", decomposed_to_json(rf.dec));
  json subs = json::array();
  for (size_t v = 0; v < rf.host.size(); ++v) subs.push_back({{"vertex", v}, {"floor", rf.dec.forest.floor[v]}, {"host", rf.host[v]}});
  json lifts = json::array();
  for (const auto& j : rf.j) lifts.push_back(j);
  put(dir, m, "subgraphs.json", {{"depth", rf.depth}, {"hosts", subs}, {"lifts", lifts}, {"a0", rf.a0}});
  json cols = json::array();
  for (size_t v = 0; v < rf.f.size(); ++v)
    cols.push_back(rf.host[v].empty() ? json(nullptr) : collapse_to_json(rf.f[v]));
  put(dir, m, "collapses.json", cols);
  put(dir, m, "families.json", t.fam);
  write_file((fs::path(dir) / "manifest.json").string(), manifest_to_json(m).dump(2) + "\n");
}

void write_tower(const std::string& dir, const RealizedForest& rf, Manifest m) {
  ExtendedTower t;
  t.rf = rf;
  t.fam.assign(rf.gamma.size(), {});
  write_tower(dir, t, std::move(m));
}

Report verify_manifest(const std::string& dir) {
  Report r;
  Manifest m = manifest_from_json(read_json((fs::path(dir) / "manifest.json").string()));
  for (auto& [name, h] : m.files) {
    fs::path p = fs::path(dir) / name;
    if (!fs::exists(p)) {
      r.push_back({"missing file", name});
      continue;
    }
    if (hash_hex(fnv1a(read_file(p.string()))) != h) r.push_back({"hash mismatch", name});
  }
  return r;
}

ExtendedTower read_tower(const std::string& dir) {
  Report bad = verify_manifest(dir);
  if (!bad.empty()) throw Error("tower manifest check failed: " + report_text(bad));
  auto path = [&](const std::string& n) { return (fs::path(dir) / n).string(); };
  ExtendedTower t;
  RealizedForest& rf = t.rf;
  rf.dec = decomposed_from_json(read_json(path("forest.json")));
  json subs = read_json(path("subgraphs.json"));
  rf.depth = subs.at("depth").get<int>();
  int floors = 0;
  while (fs::exists(path("floor_" + std::to_string(floors) + ".json"))) ++floors;
  for (int n = 0; n < floors; ++n)
    rf.gamma.push_back(std::make_shared<CGraph>(graph_from_json(read_json(path("floor_" + std::to_string(n) + ".json")))));
  json base = read_json(path("base_cover.json"));
  rf.base.base = std::make_shared<CGraph>(graph_from_json(base.at("base_graph")));
  rf.base.total = rf.gamma.at(0);
  rf.base.vmap = base.at("vmap").get<std::vector<int>>();
  rf.base.emap = base.at("emap").get<std::vector<int>>();
  rf.base.copy.assign(rf.gamma[0]->num_vertices(), -1);
  for (int n = 0; n + 1 < floors; ++n) {
    json c = read_json(path("cover_" + std::to_string(n) + ".json"));
    CoveringMap q;
    q.base = rf.gamma[n];
    q.total = rf.gamma[n + 1];
    q.vmap = c.at("vmap").get<std::vector<int>>();
    q.emap = c.at("emap").get<std::vector<int>>();
    q.copy.assign(q.total->num_vertices(), -1);
    rf.q.push_back(q);
  }
  rf.host.resize(rf.dec.forest.num_vertices());
  for (const auto& s : subs.at("hosts")) rf.host.at(s.at("vertex").get<size_t>()) = s.at("host").get<VertexList>();
  for (const auto& j : subs.at("lifts")) rf.j.push_back(j.get<std::vector<int>>());
  rf.a0 = subs.at("a0").get<std::vector<int>>();
  json cols = read_json(path("collapses.json"));
  rf.f.resize(rf.dec.forest.num_vertices());
  for (size_t v = 0; v < cols.size(); ++v)
    if (!cols[v].is_null()) rf.f[v] = collapse_from_json(cols[v]);
  t.fam = read_json(path("families.json")).get<std::vector<std::vector<VertexList>>>();
  return t;
}

}  // namespace forge

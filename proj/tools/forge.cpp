#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "forge/pipeline.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kInvalid = 1, kPrecondition = 2, kResource = 3;

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) {
      try {
        out.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw Error("not an integer list: " + s);
      }
    }
  return out;
}

void emit(const json& j, const std::string& out) {
  std::string bytes = j.dump(2) + "\n";
  if (out.empty() || out == "-") std::cout << bytes;
  else write_file(out, bytes);
}

void emit_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else write_file(out, text);
}

json report_json(const Report& r) {
  json a = json::array();
  for (const auto& v : r) a.push_back({{"what", v.what}, {"where", v.where}});
  return a;
}

// Guess the schema of a file from its top-level keys.
std::string schema_of(const json& j) {
  if (!j.is_object()) return "unknown";
  if (j.contains("states")) return "pair";
  if (j.contains("source") && j.contains("target")) return "collapse";
  if (j.contains("graphs") && j.contains("top")) return "forest";
  if (j.contains("base") && j.contains("vmap")) return "covering";
  if (j.contains("floors") && j.contains("ray")) return "leaf_report";
  if (j.contains("vertices")) return "graph";
  return "unknown";
}

struct Ctx {
  std::function<int()> run;
};

// Each subcommand installs ctx.run; failures in the validators return kInvalid.
int finish_report(const Report& r, const std::string& out, json extra = json::object()) {
  extra["ok"] = r.empty();
  extra["violations"] = report_json(r);
  emit(extra, out);
  return r.empty() ? kOk : kInvalid;
}

CGraph load_graph(const std::string& path) {
  json j = read_json(path);
  std::string k = schema_of(j);
  if (k == "covering") return *covering_from_json(j).total;
  if (k != "graph") throw Error(path + ": expected a graph");
  return graph_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: C-graphs, coverings, towers and ends of leaves"};
  app.require_subcommand(1);
  Ctx ctx;
  std::string in, out, dir;

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Validate any artifact file or tower directory");
  validate_cmd->add_option("input", in, "file or tower directory")->required();
  validate_cmd->add_option("--out", out, "write the report here");
  validate_cmd->callback([&] {
    ctx.run = [&] {
      if (fs::is_directory(in)) {
        Report r = verify_manifest(in);
        if (r.empty()) {
          ExtendedTower t = read_tower(in);
          for (auto& v : validate_realization(t.rf)) r.push_back(v);
          bool has_fam = false;
          for (auto& f : t.fam) has_fam = has_fam || !f.empty();
          if (has_fam)
            for (auto& v : validate_extended(t)) r.push_back(v);
        }
        return finish_report(r, out, {{"schema", "tower"}});
      }
      json j = read_json(in);
      std::string k = schema_of(j);
      Report r;
      if (k == "graph") r = validate(graph_from_json(j));
      else if (k == "covering") r = validate_covering(covering_from_json(j));
      else if (k == "collapse") r = validate_collapse(collapse_from_json(j));
      else if (k == "forest") r = validate_cgraph_forest(forest_from_json(j));
      else if (k == "pair") pair_from_json(j);  // throws on bad input
      else throw Error(in + ": unrecognized schema");
      return finish_report(r, out, {{"schema", k}});
    };
  });

  // betti
  auto* betti_cmd = app.add_subcommand("betti", "First Betti number and component count of a graph");
  betti_cmd->add_option("input", in)->required();
  betti_cmd->callback([&] {
    ctx.run = [&] {
      CGraph g = load_graph(in);
      emit({{"betti", betti(g)}, {"components", num_components(g)}, {"vertices", g.num_vertices()},
            {"edges", g.num_edges()}},
           out);
      return kOk;
    };
  });

  // cover
  auto* cover_cmd = app.add_subcommand("cover", "Covering maps");
  cover_cmd->require_subcommand(1);
  std::string cut_set;
  int vertex = -1, copies = 2;
  auto* cv = cover_cmd->add_subcommand("validate", "Check a covering map");
  cv->add_option("--in", in)->required();
  cv->callback([&] {
    ctx.run = [&] {
      CoveringMap p = covering_from_json(read_json(in));
      return finish_report(validate_covering(p), out,
                           {{"degree", p.degree()}, {"connected", connected(*p.total)}});
    };
  });
  auto* cs = cover_cmd->add_subcommand("surgery", "Cut at pairs of b2 vertices over one base vertex and reglue");
  cs->add_option("--in", in)->required();
  cs->add_option("--cut-set", cut_set, "comma separated b2 vertices of the total space, two per fiber")->required();
  cs->add_option("--out", out);
  cs->callback([&] {
    ctx.run = [&] {
      CoveringMap q = surgery(covering_from_json(read_json(in)), parse_ints(cut_set));
      Report r = validate_covering(q);
      if (!r.empty()) throw Error("surgery produced an invalid covering: " + report_text(r));
      emit(covering_to_json(q), out);
      return kOk;
    };
  });
  auto* cc = cover_cmd->add_subcommand("cyclic", "Cyclic surgery of N copies of a graph at a b2 vertex");
  cc->add_option("--in", in, "graph file")->required();
  cc->add_option("--vertex", vertex)->required();
  cc->add_option("--copies", copies)->check(CLI::Range(2, 1 << 20));
  cc->add_option("--out", out);
  cc->callback([&] {
    ctx.run = [&] {
      auto g = std::make_shared<CGraph>(load_graph(in));
      emit(covering_to_json(cyclic_surgery(g, vertex, copies)), out);
      return kOk;
    };
  });

  // collapse
  auto* col_cmd = app.add_subcommand("collapse", "Collapses and ends trees");
  col_cmd->require_subcommand(1);
  std::string family, roots;
  int depth = 3;
  auto* ck = col_cmd->add_subcommand("check", "Check a collapse file");
  ck->add_option("--in", in)->required();
  ck->callback([&] { ctx.run = [&] { return finish_report(validate_collapse(collapse_from_json(read_json(in))), out); }; });
  auto* cq = col_cmd->add_subcommand("quotient", "Crush a family of subgraphs to h-vertices");
  cq->add_option("--in", in, "graph file")->required();
  cq->add_option("--family", family, "JSON list of vertex lists, e.g. [[1,2],[5]]")->required();
  cq->add_option("--out", out);
  cq->callback([&] {
    ctx.run = [&] {
      json fam;
      try {
        fam = json::parse(family);
      } catch (const json::exception& e) {
        throw Error(std::string("bad --family: ") + e.what());
      }
      Collapse c = quotient_by_family(load_graph(in), fam.get<std::vector<std::vector<int>>>());
      emit(collapse_to_json(c), out);
      return kOk;
    };
  });
  auto* ce = col_cmd->add_subcommand("ends-tree", "Finite ends tree around root vertices");
  ce->add_option("--in", in, "graph file")->required();
  ce->add_option("--roots", roots, "comma separated; default is the pointing");
  ce->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  ce->add_option("--out", out);
  ce->callback([&] {
    ctx.run = [&] {
      CGraph g = load_graph(in);
      std::vector<int> r = parse_ints(roots);
      if (r.empty()) {
        if (!g.pointing) throw Error("graph has no pointing; pass --roots");
        r = {*g.pointing};
      }
      for (int v : r)
        if (v < 0 || v >= g.num_vertices()) throw Error("root out of range");
      emit(ends_tree_to_json(ends_tree(g, r, depth)), out);
      return kOk;
    };
  });

  // forest
  auto* fo_cmd = app.add_subcommand("forest", "Forests of C-graphs");
  fo_cmd->require_subcommand(1);
  std::string ray;
  int max_floor = 64;
  long long max_vertices = 3'000'000;
  auto* fd = fo_cmd->add_subcommand("decompose", "Refine into elementary floors");
  fd->add_option("--in", in)->required();
  fd->add_option("--max-floor", max_floor);
  fd->add_option("--out", out);
  fd->callback([&] {
    ctx.run = [&] {
      Decomposed d = elementary_decomposition(forest_from_json(read_json(in)), max_floor);
      emit({{"forest", forest_to_json(d.forest)}, {"sigma", d.sigma}, {"vertex_of", d.vertex_of},
            {"truncated", d.truncated}},
           out);
      return kOk;
    };
  });
  auto* fl = fo_cmd->add_subcommand("limit", "Truncation of the limit graph along a ray");
  fl->add_option("--in", in)->required();
  fl->add_option("--ray", ray, "comma separated forest vertices")->required();
  fl->add_option("--depth", depth);
  fl->add_option("--out", out);
  fl->callback([&] {
    ctx.run = [&] {
      Truncation t = limit_truncation(forest_from_json(read_json(in)), parse_ints(ray), depth);
      emit(graph_to_json(t.g), out);
      return kOk;
    };
  });
  auto* fu = fo_cmd->add_subcommand("universal", "Forest of all pointed balls up to depth N");
  fu->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  fu->add_option("--max-vertices", max_vertices);
  fu->add_option("--out", out);
  fu->callback([&] {
    ctx.run = [&] {
      emit(forest_to_json(universal_forest(depth, max_vertices)), out);
      return kOk;
    };
  });

  // pair
  auto* pa_cmd = app.add_subcommand("pair", "Ends pairs given by automata");
  pa_cmd->require_subcommand(1);
  int horizon = 2;
  std::string dot_out;
  auto* ps = pa_cmd->add_subcommand("check-star", "Every isolated point of K1 lies in K0");
  ps->add_option("--in", in)->required();
  ps->callback([&] {
    ctx.run = [&] {
      SpecPtr s = pair_from_json(read_json(in));
      bool ok = condition_star(*s);
      emit({{"condition_star", ok}, {"k1_infinite", k1_infinite(*s)}}, out);
      return ok ? kOk : kInvalid;
    };
  });
  auto* pd = pa_cmd->add_subcommand("adapt", "Adapted partition sequence");
  pd->add_option("--in", in)->required();
  pd->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);
  pd->add_option("--max-floor", max_floor);
  pd->add_option("--out", out);
  pd->callback([&] {
    ctx.run = [&] {
      SpecPtr s = pair_from_json(read_json(in));
      PartitionSeq seq = adapted_sequence(s, horizon, {.max_floor = max_floor});
      auto problems = audit_adapted(seq);
      json j = partition_seq_to_json(seq);
      j["problems"] = problems;
      emit(j, out);
      return problems.empty() ? kOk : kInvalid;
    };
  });
  auto* pg = pa_cmd->add_subcommand("gxi", "Dual graph of an adapted sequence");
  pg->add_option("--in", in)->required();
  pg->add_option("--depth", depth)->check(CLI::PositiveNumber);
  pg->add_option("--dot", dot_out, "also write DOT here");
  pg->add_option("--out", out);
  pg->callback([&] {
    ctx.run = [&] {
      SpecPtr s = pair_from_json(read_json(in));
      PartitionSeq seq = adapted_sequence(s, depth, {.min_floors = depth + 1, .max_floor = depth});
      Gxi gx = build_Gxi(seq, depth);
      auto problems = ends_match_audit(seq, depth);
      if (!dot_out.empty()) write_file(dot_out, emit_dot(gx.g, "Gxi"));
      emit({{"graph", graph_to_json(gx.g)}, {"tips", gx.tips}, {"problems", problems}}, out);
      return problems.empty() ? kOk : kInvalid;
    };
  });

  // tower
  auto* to_cmd = app.add_subcommand("tower", "Towers of coverings realizing forests");
  to_cmd->require_subcommand(1);
  std::string forest_in;
  int family_i = 0;
  std::uint64_t seed = 0;
  auto* tb = to_cmd->add_subcommand("build", "Realize a forest in a tower");
  tb->add_option("--forest", forest_in)->required();
  tb->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  tb->add_option("--max-vertices", max_vertices);
  tb->add_option("--seed", seed);
  tb->add_option("--out", dir)->required();
  tb->callback([&] {
    ctx.run = [&] {
      RealizedForest rf = realize_forest(forest_from_json(read_json(forest_in)), seed_base(), depth,
                                         {.max_vertices = max_vertices});
      Report r = validate_realization(rf);
      Manifest m;
      m.seed = seed;
      m.ops = {"realize_forest"};
      m.notes = {{"depth", depth}, {"max_vertices", max_vertices}};
      write_tower(dir, rf, m);
      return finish_report(r, out, {{"dir", dir}, {"realized_depth", rf.depth}, {"vertices", rf.vertices()}});
    };
  });
  auto* te = to_cmd->add_subcommand("extend-finite", "Tower with finite-homology families at every floor");
  te->add_option("--forest", forest_in)->required();
  te->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  te->add_option("--max-vertices", max_vertices);
  te->add_option("--seed", seed);
  te->add_option("--out", dir)->required();
  te->callback([&] {
    ctx.run = [&] {
      ExtendedTower t = extended_tower(forest_from_json(read_json(forest_in)), seed_base(), depth,
                                       {.max_vertices = max_vertices});
      Report r = validate_extended(t);
      Manifest m;
      m.seed = seed;
      m.ops = {"extended_tower"};
      m.notes = {{"depth", depth}, {"max_vertices", max_vertices}};
      write_tower(dir, t, m);
      return finish_report(r, out, {{"dir", dir}, {"realized_depth", t.rf.depth}, {"vertices", t.rf.vertices()}});
    };
  });
  auto* tl = to_cmd->add_subcommand("leaf", "Leaf report along a ray or for a finite-homology family");
  tl->add_option("--dir", dir)->required();
  auto* ray_opt = tl->add_option("--ray", ray, "comma separated decomposed forest vertices");
  tl->add_option("--family", family_i, "family index i >= 1")->excludes(ray_opt);
  tl->add_option("--report", out);
  tl->callback([&] {
    ctx.run = [&] {
      if (family_i <= 0 && ray.empty()) throw Error("pass --ray or --family");
      ExtendedTower t = read_tower(dir);
      LeafReport rep = family_i > 0 ? family_leaf_report(t, family_i) : leaf_report(t.rf, parse_ints(ray));
      emit(leaf_report_to_json(rep), out);
      return kOk;
    };
  });

  // classify
  auto* cl_cmd = app.add_subcommand("classify", "Classifying triple of a leaf report or a pair");
  std::string report_in;
  cl_cmd->add_option("--report", report_in, "leaf report or pair file")->required();
  cl_cmd->add_option("--out", out);
  cl_cmd->callback([&] {
    ctx.run = [&] {
      json j = read_json(report_in);
      if (j.contains("leaf")) j = j["leaf"];  // a pipeline report
      std::string k = schema_of(j);
      ClassifyingTriple t;
      if (k == "pair") t = triple_of_pair(pair_from_json(j));
      else if (k == "leaf_report") t = surface_triple_of_graph(leaf_report_from_json(j));
      else throw Error(report_in + ": expected a leaf report or a pair");
      Report r = check_triple(t);
      return finish_report(r, out, {{"triple", triple_to_json(t)}});
    };
  });

  // pipeline
  auto* pp_cmd = app.add_subcommand("pipeline", "Pair to tower to leaf report in one run");
  PipelineOptions popt;
  int finite_k = 0;
  pp_cmd->add_option("--pair", in, "pair file");
  pp_cmd->add_option("--finite-ends", finite_k, "use the k-ended model graph instead of a pair")->check(CLI::PositiveNumber);
  pp_cmd->add_option("--depth", popt.depth, "partition floors")->check(CLI::PositiveNumber);
  pp_cmd->add_option("--tower-floors", popt.tower_floors)->check(CLI::NonNegativeNumber);
  pp_cmd->add_option("--max-vertices", popt.max_vertices);
  pp_cmd->add_option("--seed", popt.seed);
  pp_cmd->add_option("--out", dir)->required();
  pp_cmd->callback([&] {
    ctx.run = [&] {
      SpecPtr s;
      if (finite_k > 0) popt.finite_ends = finite_k;
      else if (in.empty()) throw Error("pipeline needs --pair or --finite-ends");
      else s = pair_from_json(read_json(in));
      PipelineResult r = run_pipeline(s, popt);
      write_pipeline(dir, r, popt);
      json summary = {{"dir", dir},
                      {"realized_depth", r.tower.rf.depth},
                      {"leaf", r.report["leaf"]["triple"]["text"]},
                      {"model_ends", r.report["model"]["ends"]["branches"]},
                      {"audit", r.audit}};
      emit(summary, "");
      return r.audit.empty() ? kOk : kInvalid;
    };
  });

  // dot
  auto* dot_cmd = app.add_subcommand("dot", "Graphviz output for a graph, covering total space or forest vertex");
  std::string name = "G";
  int forest_vertex = -1;
  dot_cmd->add_option("input", in)->required();
  dot_cmd->add_option("--name", name);
  dot_cmd->add_option("--vertex", forest_vertex, "forest vertex to draw");
  dot_cmd->add_option("--out", out);
  dot_cmd->callback([&] {
    ctx.run = [&] {
      json j = read_json(in);
      std::string k = schema_of(j);
      if (k == "forest") {
        CGraphForest h = forest_from_json(j);
        int v = forest_vertex < 0 ? 0 : forest_vertex;
        if (v >= h.num_vertices()) throw Error("forest vertex out of range");
        emit_text(emit_dot(*h.graphs[v], name), out);
      } else if (k == "collapse") {
        emit_text(emit_dot(collapse_from_json(j).source, name), out);
      } else {
        emit_text(emit_dot(load_graph(in), name), out);
      }
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kPrecondition;
  }
  try {
    return ctx.run ? ctx.run() : kPrecondition;
  } catch (const ResourceError& e) {
    std::cerr << "forge: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kPrecondition;
  } catch (const json::exception& e) {
    std::cerr << "forge: malformed input: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kPrecondition;
  }
}

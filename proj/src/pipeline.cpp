#include "forge/pipeline.hpp"

#include <algorithm>
#include <filesystem>

namespace forge {

namespace {

template <class F>
auto stage(int k, const char* name, F&& f) {
  std::string tag = "stage " + std::to_string(k) + " (" + name + "): ";
  try {
    return f();
  } catch (const ResourceError& e) {
    throw ResourceError(tag + e.what());
  } catch (const Error& e) {
    throw Error(tag + e.what());
  }
}

std::vector<int> first_ray(const RealizedForest& rf) {
  std::vector<int> ray{0};
  const CGraphForest& F = rf.dec.forest;
  while ((int)ray.size() <= rf.depth) {
    auto out = F.out_edges(ray.back());
    if (out.empty()) break;
    ray.push_back(F.edges[out[0]].t);
  }
  return ray;
}

}  // namespace

PipelineResult run_pipeline(SpecPtr spec, const PipelineOptions& opt) {
  if (opt.depth < 1) throw Error("pipeline depth must be at least 1");
  if (opt.tower_floors < 0) throw Error("tower floors must be nonnegative");
  PipelineResult r;
  r.spec = spec;
  int chain_len = opt.depth - 1;
  int model_depth = std::max(1, 2 * opt.depth - 2);
  if (opt.finite_ends) {
    // radius large enough that every end has split off
    model_depth = std::max(opt.depth, *opt.finite_ends + 4);
    r.leaf_model = stage(2, "finite ends graph", [&] { return finite_ends_graph(*opt.finite_ends, model_depth); });
    chain_len = opt.depth;
  } else {
    if (!spec) throw Error("pipeline needs a pair");
    stage(0, "condition star", [&] {
      if (!condition_star(*spec)) throw Error("an isolated point of K1 lies outside K0");
      if (!k1_infinite(*spec)) throw Error("K1 is finite");
      return 0;
    });
    r.seq = stage(1, "adapted sequence", [&] {
      return adapted_sequence(spec, opt.depth, {.min_floors = opt.depth + 1, .max_floor = opt.depth});
    });
    for (auto& p : audit_adapted(r.seq)) r.audit.push_back("adapted: " + p);
    r.leaf_model = stage(2, "G_xi", [&] {
      for (auto& p : ends_match_audit(r.seq, opt.depth)) r.audit.push_back("ends: " + p);
      return build_Gxi(r.seq, opt.depth).g;
    });
  }
  r.chain = stage(3, "ball chain", [&] { return ball_chain(r.leaf_model, chain_len); });
  r.tower = stage(4, "extended tower", [&] {
    return extended_tower(r.chain, seed_base(), opt.tower_floors, {.max_vertices = opt.max_vertices});
  });
  r.leaf = stage(5, "leaf report", [&] {
    auto bad = validate_extended(r.tower);
    if (!bad.empty()) throw Error("tower failed validation: " + report_text(bad));
    return leaf_report(r.tower.rf, first_ray(r.tower.rf));
  });

  FiniteEndsTree model_ends = ends_tree(r.leaf_model, {*r.leaf_model.pointing}, model_depth);
  json fam = json::array();
  for (int i = 1; i < (int)r.tower.fam.size(); ++i) fam.push_back(leaf_report_to_json(family_leaf_report(r.tower, i)));
  json sizes = json::array();
  for (auto& f : r.seq.floors) sizes.push_back(f.size());
  r.report = {{"depth", opt.depth},
              {"tower_floors", opt.tower_floors},
              {"realized_depth", r.tower.rf.depth},
              {"degree", r.tower.rf.gamma.back()->num_vertices() / seed_base().cover.base->num_vertices()},
              {"model", {{"vertices", r.leaf_model.num_vertices()},
                         {"betti", betti(r.leaf_model)},
                         {"hash", graph_hash(r.leaf_model)},
                         {"ends", ends_tree_to_json(model_ends)}}},
              {"partition_sizes", sizes},
              {"audit", r.audit},
              {"leaf", leaf_report_to_json(r.leaf)},
              {"families", fam}};
  if (spec) r.report["pair"] = pair_to_json(*spec);
  if (opt.finite_ends) r.report["finite_ends"] = *opt.finite_ends;
  return r;
}

void write_pipeline(const std::string& dir, const PipelineResult& r, const PipelineOptions& opt) {
  Manifest m;
  m.seed = opt.seed;
  m.ops = {"condition_star", "adapted_sequence", "build_Gxi", "ball_chain", "extended_tower", "leaf_report"};
  if (opt.finite_ends) m.ops = {"finite_ends_graph", "ball_chain", "extended_tower", "leaf_report"};
  m.notes = {{"depth", opt.depth}, {"tower_floors", opt.tower_floors}, {"max_vertices", opt.max_vertices}};
  write_tower(dir, r.tower, m);
  // the report sits beside the tower and is listed in the manifest too
  std::string bytes = r.report.dump(2) + "\n";
  namespace fs = std::filesystem;
  write_file((fs::path(dir) / "report.json").string(), bytes);
  Manifest full = manifest_from_json(read_json((fs::path(dir) / "manifest.json").string()));
  full.files.push_back({"report.json", hash_hex(fnv1a(bytes))});
  write_file((fs::path(dir) / "manifest.json").string(), manifest_to_json(full).dump(2) + "\n");
}

}  // namespace forge

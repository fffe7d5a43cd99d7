// Copyright 2026 The Coarselab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coarselab/json_io.hpp"
#include "coarselab/laws.hpp"

namespace {

using namespace coarselab;

constexpr int kExitOk = 0;
constexpr int kExitNotRecovered = 1;
constexpr int kExitInputError = 2;

std::vector<std::pair<Scale, Scale>> parse_schedule(const std::string& text) {
  std::vector<std::pair<Scale, Scale>> sched;
  if (text.empty()) return sched;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = text.find(';', pos);
    const std::string step =
        text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
    const std::size_t comma = step.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("schedule step needs two scales: " + step);
    sched.emplace_back(Scale(std::stoull(step.substr(0, comma))),
                       Scale(std::stoull(step.substr(comma + 1))));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return sched;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct CommonOpts {
  std::uint64_t seed = 0;
  double delta = 0.1;
  std::string schedule;
  std::string mode = "blocks";
  std::string out;
};

RelMode mode_from(const std::string& name) {
  if (name == "blocks") return RelMode::Blocks;
  if (name == "windows") return RelMode::Windows;
  throw std::invalid_argument("mode must be blocks or windows");
}

Module module_for_space(const LFCMPtr& sp, const std::string& dims_path) {
  if (dims_path.empty()) return uniform_module(sp);
  const Json j = load_json_file(dims_path);
  return make_module(sp, j.at("dims").get<DimensionVector>());
}

int cmd_gen_space(const std::string& kind, int size, int components,
                  std::uint64_t seed, const std::string& out) {
  const LFCMPtr sp = gen_space(space_kind_from_name(kind), size, components, seed);
  save_json_file(out, lfcm_to_json(*sp));
  std::cout << "wrote " << out << " (" << sp->base()->size() << " points, "
            << sp->block_count() << " blocks)\n";
  return kExitOk;
}

int cmd_gen_map(const std::string& space_path, int distortion,
                std::uint64_t seed, const std::string& out) {
  const LFCMPtr sp = lfcm_from_json(load_json_file(space_path));
  const PointMap f = gen_equivalence(sp, distortion, seed);
  save_json_file(out, point_map_to_json(f, sp));
  std::cout << "wrote " << out << " (distortion bound " << distortion << ")\n";
  return kExitOk;
}

int cmd_build_unitary(const std::string& space_path, const std::string& map_path,
                      int prop, std::uint64_t seed, const std::string& dims_path,
                      const std::string& out) {
  const LFCMPtr sp = lfcm_from_json(load_json_file(space_path));
  auto [map_space, f] = point_map_from_json(load_json_file(map_path));
  if (!same_lfcm(sp, map_space))
    throw std::invalid_argument("map was generated over a different space");
  const Module c_x = module_for_space(sp, dims_path);
  const Module c_y = transport_module(f, c_x, sp);
  const Operator u = build_scrambled_unitary(
      f, c_x, c_y, Scale(static_cast<std::uint64_t>(prop)), seed);
  if (ends_with(out, ".crlb"))
    write_matrix_crlb(out, u.mat);
  else
    save_json_file(out, operator_to_json(u));
  std::cout << "wrote " << out << " (" << u.mat.rows() << "x" << u.mat.cols()
            << " unitary)\n";
  return kExitOk;
}

int cmd_extract(const std::string& unitary_path, const std::string& space_path,
                const std::string& map_path, const std::string& dims_path,
                const CommonOpts& opts) {
  Operator u = [&]() {
    if (ends_with(unitary_path, ".crlb")) {
      if (space_path.empty() || map_path.empty())
        throw std::invalid_argument(
            "a .crlb unitary needs --space and --map to rebuild the modules");
      const LFCMPtr sp = lfcm_from_json(load_json_file(space_path));
      auto [map_space, f] = point_map_from_json(load_json_file(map_path));
      const Module c_x = module_for_space(sp, dims_path);
      const Module c_y = transport_module(f, c_x, sp);
      return Operator(c_x, c_y, read_matrix_crlb(unitary_path));
    }
    return operator_from_json(load_json_file(unitary_path));
  }();

  ExtractOptions eopts;
  eopts.delta = opts.delta;
  eopts.mode = mode_from(opts.mode);
  eopts.schedule = parse_schedule(opts.schedule);
  const ExtractionResult result = extract_embedding(u, eopts);

  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const ExtractStep& s = result.steps[i];
    std::cout << "step " << i << ": F=" << s.params.f_scale
              << " E=" << s.params.e_scale << " pairs=" << s.relation_size
              << " dense=" << s.report.densely_defined_scale
              << " surj=" << s.report.coarsely_surjective_scale
              << " inverse_defect=" << s.inverse_defect << " -> "
              << (s.success ? "ok" : "failed") << "\n";
    for (const std::string& r : s.failures) std::cout << "    " << r << "\n";
  }
  std::cout << (result.success ? "coarse equivalence extracted"
                               : "extraction did not converge")
            << " (step " << result.step_index << ")\n";
  if (!opts.out.empty()) save_json_file(opts.out, extraction_to_json(result));
  return result.success ? kExitOk : kExitNotRecovered;
}

int cmd_verify_laws(int samples, std::uint64_t seed, const std::string& which,
                    const std::string& out) {
  std::vector<laws::LawResult> results;
  const auto want = [&](const std::string& name) {
    return which == "all" || which.find(name) != std::string::npos;
  };
  if (want("support")) results.push_back(laws::support_calculus(samples, seed));
  if (want("approx")) results.push_back(laws::approx_relation_laws(samples, seed));
  if (want("category"))
    results.push_back(laws::categorical_laws(std::max(1, samples / 2), seed));
  if (want("bracket")) results.push_back(laws::bracket_laws(samples, seed));
  if (want("norms")) results.push_back(laws::norm_agreement(2 * samples, seed));
  if (want("domain"))
    results.push_back(laws::domain_invariance_laws(samples, seed));
  if (want("pushforward"))
    results.push_back(laws::pushforward_naturality(
        std::max(1, samples / 5), std::max(1, samples / 25), seed));
  if (results.empty()) throw std::invalid_argument("no laws selected");

  bool all_ok = true;
  Json report = Json::array();
  for (const laws::LawResult& r : results) {
    all_ok = all_ok && r.ok();
    std::printf("[%s] %-28s checked=%-6lld violations=%lld (%.2f s)\n",
                r.ok() ? "PASS" : "FAIL", r.name.c_str(), r.checked,
                r.violations, r.seconds);
    for (const std::string& n : r.notes) std::printf("       %s\n", n.c_str());
    Json jr;
    jr["name"] = r.name;
    jr["checked"] = r.checked;
    jr["violations"] = r.violations;
    jr["notes"] = r.notes;
    report.push_back(std::move(jr));
  }
  if (!out.empty()) save_json_file(out, report);
  return all_ok ? kExitOk : kExitNotRecovered;
}

int cmd_sweep(const std::string& kind, int size, int components, int count,
              int distortion, int prop, const CommonOpts& opts,
              const std::string& csv_path, const std::string& json_path,
              bool timings) {
  ExperimentConfig cfg;
  cfg.kind = space_kind_from_name(kind);
  cfg.size = size;
  cfg.components = components;
  cfg.distortion = distortion;
  cfg.scramble_prop = prop;
  cfg.delta = opts.delta;
  cfg.mode = mode_from(opts.mode);
  cfg.schedule = parse_schedule(opts.schedule);
  cfg.seed = opts.seed;
  const std::vector<ExperimentResult> results = sweep(cfg, count);

  int recovered = 0, within = 0;
  for (const ExperimentResult& r : results) {
    recovered += r.recovered ? 1 : 0;
    within += r.within_bound ? 1 : 0;
  }
  std::cout << "recovered " << recovered << "/" << count << ", within bound "
            << within << "/" << count << "\n";
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    f << sweep_csv(results);
  }
  if (!json_path.empty()) {
    Json arr = Json::array();
    for (const ExperimentResult& r : results)
      arr.push_back(experiment_to_json(r, timings));
    save_json_file(json_path, arr);
  }
  return recovered == count ? kExitOk : kExitNotRecovered;
}

int cmd_heatmap(const std::string& operator_path, const std::string& out) {
  const Operator t = operator_from_json(load_json_file(operator_path));
  render_heatmap(t, out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarselab: coarse geometry and approximable-operator laboratory"};
  app.require_subcommand(1);

  // gen-space
  std::string kind = "interval", out, space_path, map_path, dims_path,
              unitary_path, csv_path, json_path, which_laws = "all";
  int size = 10, components = 2, distortion = 1, prop = 0, count = 20,
      samples = 100;
  bool timings = false;
  CommonOpts common;

  auto* gen_space_cmd = app.add_subcommand("gen-space", "generate a space");
  gen_space_cmd->add_option("--kind", kind,
                            "interval|grid2d|random_geometric|multi_component");
  gen_space_cmd->add_option("--size", size, "points (per component)")->required();
  gen_space_cmd->add_option("--components", components, "component count");
  gen_space_cmd->add_option("--seed", common.seed, "rng seed");
  gen_space_cmd->add_option("--out", out, "output file")->required();

  auto* gen_map_cmd =
      app.add_subcommand("gen-map", "generate a ground-truth equivalence");
  gen_map_cmd->add_option("--space", space_path, "space json")->required();
  gen_map_cmd->add_option("--distortion", distortion, "distortion bound D");
  gen_map_cmd->add_option("--seed", common.seed, "rng seed");
  gen_map_cmd->add_option("--out", out, "output file")->required();

  auto* build_cmd =
      app.add_subcommand("build-unitary", "scrambled unitary over a map");
  build_cmd->add_option("--space", space_path, "space json")->required();
  build_cmd->add_option("--map", map_path, "map json")->required();
  build_cmd->add_option("--prop", prop, "scramble propagation");
  build_cmd->add_option("--seed", common.seed, "rng seed");
  build_cmd->add_option("--module", dims_path, "module dims json");
  build_cmd->add_option("--out", out, "output (.json or .crlb)")->required();

  auto* extract_cmd =
      app.add_subcommand("extract", "extract a coarse equivalence");
  extract_cmd->add_option("--unitary", unitary_path, "operator json or .crlb")
      ->required();
  extract_cmd->add_option("--space", space_path, "space json (with .crlb)");
  extract_cmd->add_option("--map", map_path, "map json (with .crlb)");
  extract_cmd->add_option("--module", dims_path, "module dims json");
  extract_cmd->add_option("--delta", common.delta, "norm threshold");
  extract_cmd->add_option("--schedule", common.schedule, "steps a,b;c,d");
  extract_cmd->add_option("--mode", common.mode, "blocks|windows");
  extract_cmd->add_option("--out", common.out, "report json");

  auto* verify_cmd = app.add_subcommand("verify-laws", "run law suites");
  verify_cmd->add_option("--samples", samples, "samples per law");
  verify_cmd->add_option("--seed", common.seed, "rng seed");
  verify_cmd->add_option("--laws", which_laws,
                         "all or comma list: support,approx,category,bracket,"
                         "norms,domain,pushforward");
  verify_cmd->add_option("--out", out, "report json");

  auto* sweep_cmd = app.add_subcommand("sweep", "seeded experiment sweep");
  sweep_cmd->add_option("--kind", kind, "space kind");
  sweep_cmd->add_option("--size", size, "points (per component)");
  sweep_cmd->add_option("--components", components, "component count");
  sweep_cmd->add_option("--count", count, "number of seeds");
  sweep_cmd->add_option("--distortion", distortion, "distortion bound D");
  sweep_cmd->add_option("--prop", prop, "scramble propagation");
  sweep_cmd->add_option("--delta", common.delta, "norm threshold");
  sweep_cmd->add_option("--schedule", common.schedule, "steps a,b;c,d");
  sweep_cmd->add_option("--mode", common.mode, "blocks|windows");
  sweep_cmd->add_option("--seed", common.seed, "base seed");
  sweep_cmd->add_option("--csv", csv_path, "csv output");
  sweep_cmd->add_option("--out", json_path, "json output");
  sweep_cmd->add_flag("--timings", timings, "include wall times in json");

  auto* heatmap_cmd = app.add_subcommand("heatmap", "blockwise norm image");
  heatmap_cmd->add_option("--operator", unitary_path, "operator json")->required();
  heatmap_cmd->add_option("--out", out, "output pgm")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen_space_cmd->parsed())
      return cmd_gen_space(kind, size, components, common.seed, out);
    if (gen_map_cmd->parsed())
      return cmd_gen_map(space_path, distortion, common.seed, out);
    if (build_cmd->parsed())
      return cmd_build_unitary(space_path, map_path, prop, common.seed,
                               dims_path, out);
    if (extract_cmd->parsed())
      return cmd_extract(unitary_path, space_path, map_path, dims_path, common);
    if (verify_cmd->parsed())
      return cmd_verify_laws(samples, common.seed, which_laws, out);
    if (sweep_cmd->parsed())
      return cmd_sweep(kind, size, components, count, distortion, prop, common,
                       csv_path, json_path, timings);
    if (heatmap_cmd->parsed()) return cmd_heatmap(unitary_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

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

#include "coarselab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coarselab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarselab {

SpaceKind space_kind_from_name(const std::string& name) {
  if (name == "interval") return SpaceKind::Interval;
  if (name == "grid2d") return SpaceKind::Grid2d;
  if (name == "random_geometric") return SpaceKind::RandomGeometric;
  if (name == "multi_component") return SpaceKind::MultiComponent;
  throw std::invalid_argument("unknown space kind: " + name);
}

std::string space_kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Grid2d: return "grid2d";
    case SpaceKind::RandomGeometric: return "random_geometric";
    case SpaceKind::MultiComponent: return "multi_component";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (size < 1) throw std::invalid_argument("config: size must be >= 1");
  if (components < 1)
    throw std::invalid_argument("config: components must be >= 1");
  if (distortion < 1)
    throw std::invalid_argument("config: distortion must be >= 1");
  if (scramble_prop < 0)
    throw std::invalid_argument("config: scramble propagation must be >= 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("config: delta must be in (0,1)");
}

namespace {

SpacePtr interval_base(int n, PointId offset = 0, bool separate = false,
                       int copies = 1) {
  const int total = n * copies;
  std::vector<PointId> pts(total);
  std::vector<std::vector<Scale>> d(total, std::vector<Scale>(total));
  for (int i = 0; i < total; ++i) {
    pts[i] = offset + i;
    for (int j = 0; j < total; ++j) {
      if (separate && (i / n != j / n))
        d[i][j] = Scale::inf();
      else
        d[i][j] = Scale(static_cast<std::uint64_t>(std::abs(i - j)));
    }
  }
  return std::make_shared<const Space>(pts, d);
}

SpacePtr grid_base(int n) {
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(n))));
  std::vector<PointId> pts(n);
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n));
  for (int i = 0; i < n; ++i) {
    pts[i] = i;
    for (int j = 0; j < n; ++j) {
      const int dx = std::abs(i % side - j % side);
      const int dy = std::abs(i / side - j / side);
      d[i][j] = Scale(static_cast<std::uint64_t>(dx + dy));
    }
  }
  return std::make_shared<const Space>(pts, d);
}

SpacePtr geometric_base(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }
  const double r = 1.1 * std::sqrt(std::log(std::max(n, 2)) /
                                   static_cast<double>(std::max(n, 2)));
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      if (std::sqrt(dx * dx + dy * dy) <= r) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n, Scale::inf()));
  for (int s = 0; s < n; ++s) {
    d[s][s] = Scale(0);
    std::deque<int> queue = {s};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v])
        if (d[s][w].is_inf()) {
          d[s][w] = d[s][v] + Scale(1);
          queue.push_back(w);
        }
    }
  }
  std::vector<PointId> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = i;
  return std::make_shared<const Space>(pts, d);
}

}  // namespace

LFCMPtr gen_space(SpaceKind kind, int size, int components,
                  std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("gen_space: size must be >= 1");
  switch (kind) {
    case SpaceKind::Interval:
      return lfcm_singletons(interval_base(size));
    case SpaceKind::Grid2d:
      return lfcm_singletons(grid_base(size));
    case SpaceKind::RandomGeometric:
      return lfcm_singletons(geometric_base(size, seed));
    case SpaceKind::MultiComponent:
      return lfcm_singletons(interval_base(size, 0, true, components));
  }
  throw std::invalid_argument("gen_space: bad kind");
}

namespace {

bool expansion_within(const PointMap& f, int d_bound) {
  const Profile rho = map_expansion(f);
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const Scale cap(static_cast<std::uint64_t>(d_bound) * n +
                    static_cast<std::uint64_t>(d_bound));
    if (rho.at(n) > cap) return false;
  }
  return true;
}

}  // namespace

PointMap gen_equivalence(const LFCMPtr& space, int distortion,
                         std::uint64_t seed) {
  if (distortion < 1)
    throw std::invalid_argument("gen_equivalence: distortion must be >= 1");
  const SpacePtr base = space->base();
  const std::size_t n = base->size();
  Rng rng(seed);

  if (distortion == 1) {
    // Try the per-component reversal; keep it only when it is an isometry.
    const std::vector<PointId> comp = component_labels(*base);
    std::map<PointId, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[comp[i]].push_back(i);
    std::vector<PointId> img(n);
    for (const auto& [label, idxs] : groups)
      for (std::size_t k = 0; k < idxs.size(); ++k)
        img[idxs[k]] = base->point(idxs[idxs.size() - 1 - k]);
    PointMap candidate(base, base, img);
    if (rng.uniform() < 0.5 && expansion_within(candidate, 1)) return candidate;
    return PointMap::identity(base);
  }

  // Involution from a disjoint matching of points within radius D/2;
  // then d(f(x), f(y)) <= d(x,y) + 2*(D/2) <= D*n + D for all n >= 0.
  const std::uint64_t radius = static_cast<std::uint64_t>(distortion) / 2;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1],
              order[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
  std::vector<PointId> img = base->points();
  std::vector<bool> used(n, false);
  for (std::size_t i : order) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> cands;
    for (std::size_t j : order)
      if (!used[j] && base->dist(i, j) <= Scale(radius)) cands.push_back(j);
    if (cands.empty() || rng.uniform() < 0.25) continue;
    const std::size_t j = cands[static_cast<std::size_t>(
        rng.uniform_int(0, cands.size() - 1))];
    used[j] = true;
    img[i] = base->point(j);
    img[j] = base->point(i);
  }
  PointMap f(base, base, img);
  if (!expansion_within(f, distortion))
    throw std::logic_error("gen_equivalence: expansion bound violated");
  return f;
}

Module transport_module(const PointMap& f, const Module& c_x,
                        const LFCMPtr& target) {
  DimensionVector dims_y(target->block_count(), 0);
  const DimensionVector dims_x = c_x.dims();
  for (std::size_t b = 0; b < c_x.space()->block_count(); ++b) {
    const int tb =
        target->block_of_point(f.apply(c_x.space()->block_points(b).front()));
    dims_y[static_cast<std::size_t>(tb)] += dims_x[b];
  }
  return make_module(target, dims_y);
}

Operator build_scrambled_unitary(const PointMap& f, const Module& c_x,
                                 const Module& c_y, Scale p,
                                 std::uint64_t seed) {
  if (!same_space(f.source(), c_x.space()->base()) ||
      !same_space(f.target(), c_y.space()->base()))
    throw std::invalid_argument("build_scrambled_unitary: map/module mismatch");

  // Permutation part: k-th coordinate of block b to the k-th coordinate
  // of the block containing f(b).
  const LFCMSpace& xs = *c_x.space();
  const LFCMSpace& ys = *c_y.space();
  Matrix perm(c_y.dim(), c_x.dim());
  for (std::size_t b = 0; b < xs.block_count(); ++b) {
    const int tb0 = ys.block_of_point(f.apply(xs.block_points(b).front()));
    for (PointId q : xs.block_points(b))
      if (ys.block_of_point(f.apply(q)) != tb0)
        throw std::invalid_argument(
            "build_scrambled_unitary: map splits a block");
    const auto& from = c_x.coords_of_block(b);
    const auto& to = c_y.coords_of_block(static_cast<std::size_t>(tb0));
    if (from.size() != to.size())
      throw std::invalid_argument(
          "build_scrambled_unitary: dimensions not transported by the map");
    for (std::size_t k = 0; k < from.size(); ++k)
      perm(static_cast<std::size_t>(to[k]), static_cast<std::size_t>(from[k])) =
          Complex(1.0, 0.0);
  }
  const Operator wx = random_controlled_unitary(c_x, p, subseed(seed, 1));
  const Operator wy = random_controlled_unitary(c_y, p, subseed(seed, 2));
  Matrix u = kernels::matmul(wy.mat, kernels::matmul(perm, wx.mat));
  return Operator(c_x, c_y, std::move(u));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentResult res;
  res.config = cfg;

  const LFCMPtr space = gen_space(cfg.kind, cfg.size, cfg.components, cfg.seed);
  const PointMap f = gen_equivalence(space, cfg.distortion, subseed(cfg.seed, 10));

  Module c_x = cfg.module_dims ? make_module(space, *cfg.module_dims)
                               : uniform_module(space);
  Module c_y = transport_module(f, c_x, space);

  const Operator u = build_scrambled_unitary(
      f, c_x, c_y, Scale(static_cast<std::uint64_t>(cfg.scramble_prop)),
      subseed(cfg.seed, 20));

  ExtractOptions opts;
  opts.delta = cfg.delta;
  opts.mode = cfg.mode;
  opts.schedule = cfg.schedule;
  ExtractionResult extraction = extract_embedding(u, opts);

  res.extraction_success = extraction.success;
  res.steps_used = extraction.step_index + 1;
  res.steps = extraction.steps;

  if (extraction.relation) {
    const Relation& got = *extraction.relation;
    res.relation_size = got.size();
    // Ground truth restricted to the extracted relation's spaces.
    const Relation graph = f.graph();
    std::vector<std::pair<PointId, PointId>> pairs;
    for (const auto& [y, x] : graph.pairs())
      if (got.target()->has_point(y) && got.source()->has_point(x))
        pairs.emplace_back(y, x);
    const Relation truth(got.source(), got.target(), std::move(pairs));
    res.closeness_to_truth = relation_asymptotic_witness(got, truth);
  }
  res.recovered = res.closeness_to_truth.is_finite();
  const Scale bound = cfg.recovery_bound.value_or(
      Scale(static_cast<std::uint64_t>(cfg.distortion) +
            2 * static_cast<std::uint64_t>(cfg.scramble_prop) + 2));
  res.within_bound = res.closeness_to_truth <= bound;
  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

std::vector<ExperimentResult> sweep(const ExperimentConfig& base, int count) {
  std::vector<ExperimentResult> results(static_cast<std::size_t>(count));
#ifdef _OPENMP
#pragma omp parallel for num_threads(kernels::thread_cap()) schedule(dynamic)
#endif
  for (int i = 0; i < count; ++i) {
    ExperimentConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(i);
    results[static_cast<std::size_t>(i)] = run_experiment(cfg);
  }
  return results;
}

std::string sweep_csv(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "seed,kind,size,components,distortion,prop,delta,mode,"
         "extraction_success,steps_used,relation_size,closeness,recovered,"
         "within_bound\n";
  for (const ExperimentResult& r : results) {
    out << r.config.seed << ',' << space_kind_name(r.config.kind) << ','
        << r.config.size << ',' << r.config.components << ','
        << r.config.distortion << ',' << r.config.scramble_prop << ','
        << r.config.delta << ',' << rel_mode_name(r.config.mode) << ','
        << (r.extraction_success ? 1 : 0) << ',' << r.steps_used << ','
        << r.relation_size << ',' << r.closeness_to_truth.str() << ','
        << (r.recovered ? 1 : 0) << ',' << (r.within_bound ? 1 : 0) << '\n';
  }
  return out.str();
}

void render_heatmap(const Operator& t, const std::string& path) {
  const std::size_t rows = t.target.space()->block_count();
  const std::size_t cols = t.source.space()->block_count();
  const std::vector<double> norms = block_norms(t);
  double peak = 0.0;
  for (double v : norms) peak = std::max(peak, v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("render_heatmap: cannot open " + path);
  out << "P5\n" << cols << " " << rows << "\n255\n";
  for (std::size_t b = 0; b < rows; ++b)
    for (std::size_t a = 0; a < cols; ++a) {
      const double v = peak > 0.0 ? norms[b * cols + a] / peak : 0.0;
      const unsigned char px =
          static_cast<unsigned char>(std::lround(255.0 * v));
      out.put(static_cast<char>(px));
    }
  if (!out) throw std::runtime_error("render_heatmap: write failed for " + path);
}

}  // namespace coarselab

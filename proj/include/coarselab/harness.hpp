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

#ifndef COARSELAB_HARNESS_HPP
#define COARSELAB_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "coarselab/rigidity.hpp"

namespace coarselab {

enum class SpaceKind { Interval, Grid2d, RandomGeometric, MultiComponent };

SpaceKind space_kind_from_name(const std::string& name);
std::string space_kind_name(SpaceKind kind);

struct ExperimentConfig {
  SpaceKind kind = SpaceKind::Interval;
  int size = 10;        // points (per component for multi_component)
  int components = 2;   // multi_component only
  int distortion = 1;   // bound D on the ground-truth equivalence
  int scramble_prop = 0;
  double delta = 0.1;
  std::vector<std::pair<Scale, Scale>> schedule;  // empty -> default doubling
  RelMode mode = RelMode::Blocks;
  std::uint64_t seed = 0;
  std::optional<DimensionVector> module_dims;  // default: uniform modules
  std::optional<Scale> recovery_bound;         // default: D + 2p + 2

  void validate() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  bool extraction_success = false;
  std::size_t steps_used = 0;
  std::size_t relation_size = 0;
  Scale closeness_to_truth = Scale::inf();
  bool recovered = false;     // closeness finite
  bool within_bound = false;  // closeness <= recovery bound
  std::vector<ExtractStep> steps;
  double wall_ms = 0.0;  // excluded from deterministic serialisations
};

/// Deterministic space generator; singleton blocks.
LFCMPtr gen_space(SpaceKind kind, int size, int components, std::uint64_t seed);

/// Bijective self-equivalence with expansion at most D*n + D for the
/// map and its inverse (an involution), component-preserving.
PointMap gen_equivalence(const LFCMPtr& space, int distortion,
                         std::uint64_t seed);

/// Module over the same space whose dimension vector is transported
/// along f (so the coordinate permutation along f exists).
Module transport_module(const PointMap& f, const Module& c_x,
                        const LFCMPtr& target);

/// U = W_Y P_f W_X: the permutation operator of f conjugated by random
/// controlled unitaries of propagation <= p on each side.  Ad_U then
/// maps band operators to bounded bands, which is the rigidity
/// hypothesis realised constructively.
Operator build_scrambled_unitary(const PointMap& f, const Module& c_x,
                                 const Module& c_y, Scale p,
                                 std::uint64_t seed);

/// gen -> build -> extract -> compare against graph(f).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Experiments for seeds base_seed .. base_seed+count-1, evaluated in
/// parallel and merged in seed order.
std::vector<ExperimentResult> sweep(const ExperimentConfig& base, int count);

std::string sweep_csv(const std::vector<ExperimentResult>& results);

/// Grayscale PGM (P5) of blockwise norms, rows = target blocks,
/// normalised to max 255.
void render_heatmap(const Operator& t, const std::string& path);

}  // namespace coarselab

#endif  // COARSELAB_HARNESS_HPP

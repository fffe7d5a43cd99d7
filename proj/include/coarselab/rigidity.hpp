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

#ifndef COARSELAB_RIGIDITY_HPP
#define COARSELAB_RIGIDITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/operators.hpp"

namespace coarselab {

enum class RelMode { Blocks, Windows };

std::string rel_mode_name(RelMode mode);

/// Parameters (delta, F, E) of an approximate relation.  Blocks mode
/// ranges over single partition blocks; windows mode over unions of
/// blocks within radius F (resp. E) balls, which can only enlarge the
/// relation.
struct ApproxParams {
  double delta = 0.1;
  Scale f_scale;  // target-side bound
  Scale e_scale;  // source-side bound
  RelMode mode = RelMode::Blocks;
};

/// Block pairs (B, A) with ||1_B T 1_A|| > delta, expanded to point
/// pairs; in windows mode B and A range over block unions within the
/// given radii.
Relation approximate_relation(const Operator& t, const ApproxParams& p);

/// delta = min, scales = max (entourages are nested, so the union of
/// E_a and E_b is E_max(a,b)).  The join's relation contains both
/// inputs' relations.
ApproxParams parameter_join(const ApproxParams& p1, const ApproxParams& p2);

/// Unitary acting as a unimodular scalar on every coarsely connected
/// component; these are exactly the central unitaries of the algebra of
/// approximable operators.
struct CentralUnitary {
  LFCMPtr space;
  std::map<PointId, Complex> phase_by_component;  // keyed by component label
};

/// Phases given as angles per component label; every component of the
/// space must be covered.
CentralUnitary make_central_unitary(const LFCMPtr& space,
                                    const std::map<PointId, double>& angles);

CentralUnitary identity_central_unitary(const LFCMPtr& space);

/// The diagonal operator on a module multiplying the coordinates of
/// component k by its phase; commutes with every projection 1_A.
Operator central_unitary_operator(const CentralUnitary& u, const Module& c);

/// Whether f^{vTu} equals f^T as a set, for central unitaries u on the
/// source and v on the target.
bool central_invariance_check(const Operator& t, const CentralUnitary& u,
                              const CentralUnitary& v, const ApproxParams& p);

struct ExtractStep {
  ApproxParams params;
  std::size_t relation_size = 0;
  RelationReport report;
  Scale inverse_defect = Scale::inf();  // f^{U*} into (f^U)^T witness
  bool success = false;
  std::vector<std::string> failures;
};

struct ExtractOptions {
  double delta = 0.1;
  RelMode mode = RelMode::Blocks;
  /// Steps (F_scale, E_scale), nondecreasing.  Empty selects the
  /// default doubling schedule up to the space diameter.
  std::vector<std::pair<Scale, Scale>> schedule;
  /// Largest admissible witness for density/surjectivity and for the
  /// inverse-compatibility thickening.  Unset: F + E + both gauges + 2
  /// per step.
  std::optional<Scale> max_witness;
  std::optional<Scale> max_inverse_defect;
};

struct ExtractionResult {
  bool success = false;
  std::size_t step_index = 0;       // successful step, or best attempt
  std::optional<Relation> relation; // f^U restricted to the faithfulness domains
  RelationReport report;            // classified over the restricted subspaces
  std::vector<ExtractStep> steps;
};

/// Walks the schedule computing f^U and f^{U*} restricted to the
/// faithfulness domains of the modules; succeeds at the first step
/// whose relation is a coarse equivalence within the witness caps and
/// whose adjoint relation sits inside a bounded thickening of the
/// transpose.  On failure returns the best attempt with reasons.
ExtractionResult extract_embedding(const Operator& u, const ExtractOptions& opts);

struct DomainInvariance {
  double condition = 0.0;
  Scale bound;  // max(prop t, prop t^-1) + 2 * disc gauge
  std::vector<std::pair<int, Scale>> witnesses;  // per kappa
};

/// Asymptotic witnesses between the kappa-domains of the source and
/// target of an invertible endogenous operator; each witness is checked
/// against the propagation bound.  Throws on numerically singular input
/// (condition above 1e12).
DomainInvariance domain_invariance_check(const Operator& t,
                                         const std::vector<int>& kappas);

}  // namespace coarselab

#endif  // COARSELAB_RIGIDITY_HPP

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

#ifndef COARSELAB_LAWS_HPP
#define COARSELAB_LAWS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "coarselab/category.hpp"
#include "coarselab/rng.hpp"

// Seeded law suites over random instances.  Shared by the verify-laws
// CLI subcommand and the acceptance runner.

namespace coarselab::laws {

struct LawResult {
  std::string name;
  long long checked = 0;
  long long violations = 0;
  double seconds = 0.0;
  std::vector<std::string> notes;  // first few violation descriptions

  bool ok() const { return violations == 0; }
};

// ---- random instance generators ----

/// Random space (interval / grid / geometric graph metric, one or two
/// components), at most max_points points.
SpacePtr random_space(Rng& rng, int max_points);

/// Random LFCM structure: blocks of size 1..3 within components.
LFCMPtr random_lfcm(Rng& rng, int max_points, bool multi_point_blocks = true);

/// Random module with 0..max_dim coordinates per block (at least one
/// coordinate overall).
Module random_module(Rng& rng, const LFCMPtr& sp, int max_dim);

/// Random operator whose blocks are kept with probability keep_prob or
/// when within the given band; dropped blocks are exact zeros.
Operator random_block_sparse_operator(Rng& rng, const Module& source,
                                      const Module& target, double keep_prob,
                                      Scale band);

// ---- law bundles ----

/// Adjoint/sum/composition support laws at tol 1e-10 * norm.
LawResult support_calculus(int samples, std::uint64_t seed);

/// Approximate-relation monotonicity under parameter joins, blocks-mode
/// adjoint transpose symmetry, and central-unitary invariance.
LawResult approx_relation_laws(int samples, std::uint64_t seed);

/// Functor laws, biproduct laws, additivity naturality, congruence
/// equivalence/composition laws.
LawResult categorical_laws(int samples, std::uint64_t seed);

/// Approximability bracket: lower <= upper, upper(n)=0 iff prop <= n,
/// monotonicity, Banach/C*-closure estimates, norm inequalities, and
/// the controlled-conjugation support bound.
LawResult bracket_laws(int samples, std::uint64_t seed);

/// Power iteration against the small closed forms, 1e-9 agreement.
LawResult norm_agreement(int samples, std::uint64_t seed);

/// Domain invariance witnesses within the propagation bound for
/// kappa in {1,2,3} on invertible band operators.
LawResult domain_invariance_laws(int samples, std::uint64_t seed);

/// Pushforward naturality squares (exact) and support of eta_C against
/// scale((f x g)(E_disc)); non-close pairs must report inf.
LawResult pushforward_naturality(int close_pairs, int nonclose_pairs,
                                 std::uint64_t seed);

std::vector<LawResult> run_all(int samples, std::uint64_t seed);

}  // namespace coarselab::laws

#endif  // COARSELAB_LAWS_HPP

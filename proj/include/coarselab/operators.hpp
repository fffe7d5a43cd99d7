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

#ifndef COARSELAB_OPERATORS_HPP
#define COARSELAB_OPERATORS_HPP

#include <cstdint>
#include <vector>

#include "coarselab/kernels.hpp"
#include "coarselab/matrix.hpp"
#include "coarselab/modules.hpp"

namespace coarselab {

/// Bounded operator between coarse modules: a dense complex matrix of
/// shape target.dim x source.dim.
struct Operator {
  Module source;
  Module target;
  Matrix mat;

  Operator(Module src, Module tgt, Matrix m);

  bool endogenous() const { return same_lfcm(source.space(), target.space()); }
};

Operator identity_operator(const Module& c);
Operator zero_operator(const Module& source, const Module& target);

// Arithmetic.  Support contracts: Supp(t*) = Supp(t)^T exactly;
// Supp(t1+t2) within Supp(t1) u Supp(t2); Supp(s o t) within
// Supp(s) o E_disc o Supp(t).
Operator op_compose(const Operator& s, const Operator& t);
Operator op_add(const Operator& a, const Operator& b);
Operator op_adjoint(const Operator& t);
Operator op_scale(Complex c, const Operator& t);

/// ||1_B t 1_A|| for every (target block, source block) pair, flattened
/// as [B * source_blocks + A].
std::vector<double> block_norms(const Operator& t,
                                kernels::Exec exec = kernels::Exec::Parallel);

/// Union of block rectangles B x A with ||1_B t 1_A|| > tol, as a
/// point-pair relation between the base spaces.  tol < 0 selects the
/// default 1e-12 * ||t||.
Relation op_support(const Operator& t, double tol = -1.0);

/// Scale of the support; requires an endogenous operator.
Scale propagation(const Operator& t, double tol = -1.0);

/// Largest singular value, deterministic across runs.
double operator_norm(const Operator& t, double tol = 1e-9);

/// Zeroes every block rectangle not contained in E_n; the result has
/// propagation at most max(n, disc gauge scale).
Operator truncate(const Operator& t, Scale n);

/// Distance-to-band bracket for n = 0..diam.
///   upper(n) = ||t - truncate(t, n)||   (truncation witness)
///   lower(n) = max block norm strictly outside E_n; any s of
///              propagation <= n satisfies ||t - s|| >= lower(n).
struct ApproxProfile {
  std::vector<double> upper;
  std::vector<double> lower;

  double upper_at(std::uint64_t n) const {
    return upper.empty() ? 0.0 : upper[std::min<std::uint64_t>(n, upper.size() - 1)];
  }
  double lower_at(std::uint64_t n) const {
    return lower.empty() ? 0.0 : lower[std::min<std::uint64_t>(n, lower.size() - 1)];
  }
};

ApproxProfile approx_profile(const Operator& t, double norm_tol = 1e-12);

struct CoarselyFull {
  bool full;
  Scale witness;  // asymptotic witness between pi_1(Supp t) and dom_1(target)
};

CoarselyFull is_coarsely_full(const Operator& t, double tol = -1.0);

/// Deterministic random unitary on C whose support stays within
/// coordinate groups of pairwise block distance <= n (propagation at
/// most max(n, disc gauge scale)).
Operator random_controlled_unitary(const Module& c, Scale n,
                                   std::uint64_t seed);

/// Empirical conjugation profile of a unitary U: for each n <= n_max,
/// the least m such that Ad_U of every sampled propagation-<=n
/// contraction is within eps of a propagation-<=m operator (inf if even
/// m = diam fails).  Sampled, deterministic per seed; samples are
/// seeded independently so parallel evaluation is reproducible.
std::vector<Scale> coarse_like_profile(const Operator& u, std::uint64_t n_max,
                                       int samples, double eps,
                                       std::uint64_t seed);

struct DirectSum {
  Module sum;
  Operator inc0, inc1;    // isometric inclusions, block-diagonal support
  Operator proj0, proj1;  // adjoints of the inclusions
};

/// Blockwise direct sum of two modules over the same space.
DirectSum direct_sum(const Module& c0, const Module& c1);

struct RestrictedModule {
  Module module;       // dims zeroed outside the kappa-domain
  Operator inclusion;  // isometry into the original module
};

/// Restriction of a module to its kappa-domain; dom_1 of the result is
/// dom_kappa of the input.  Throws when the domain is empty.
RestrictedModule restrict_to_domain(const Module& c, int kappa);

/// The identity matrix viewed as the canonical controlled unitary
/// C -> f_*C.
Operator pushforward_unitary(const PointMap& f, const Module& c,
                             const LFCMPtr& target);

}  // namespace coarselab

#endif  // COARSELAB_OPERATORS_HPP

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

#include "coarselab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coarselab/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarselab {

Operator::Operator(Module src, Module tgt, Matrix m)
    : source(std::move(src)), target(std::move(tgt)), mat(std::move(m)) {
  if (mat.rows() != target.dim() || mat.cols() != source.dim())
    throw std::invalid_argument("operator: matrix shape differs from module dims");
}

Operator identity_operator(const Module& c) {
  return Operator(c, c, Matrix::identity(c.dim()));
}

Operator zero_operator(const Module& source, const Module& target) {
  return Operator(source, target, Matrix(target.dim(), source.dim()));
}

Operator op_compose(const Operator& s, const Operator& t) {
  if (s.source != t.target)
    throw std::invalid_argument("op_compose: inner modules differ");
  return Operator(t.source, s.target, kernels::matmul(s.mat, t.mat));
}

Operator op_add(const Operator& a, const Operator& b) {
  if (a.source != b.source || a.target != b.target)
    throw std::invalid_argument("op_add: module mismatch");
  return Operator(a.source, a.target, a.mat + b.mat);
}

Operator op_adjoint(const Operator& t) {
  return Operator(t.target, t.source, t.mat.adjoint());
}

Operator op_scale(Complex c, const Operator& t) {
  return Operator(t.source, t.target, c * t.mat);
}

std::vector<double> block_norms(const Operator& t, kernels::Exec exec) {
  return kernels::block_norm_table(t.mat, t.target.coords_by_block(),
                                   t.source.coords_by_block(), exec);
}

namespace {

double resolve_tol(const Operator& t, double tol) {
  if (tol >= 0.0) return tol;
  return 1e-12 * kernels::sigma_max(t.mat, 1e-9);
}

}  // namespace

Relation op_support(const Operator& t, double tol) {
  const double cut = resolve_tol(t, tol);
  const std::vector<double> norms = block_norms(t);
  const LFCMSpace& xs = *t.source.space();
  const LFCMSpace& ys = *t.target.space();
  std::vector<std::pair<PointId, PointId>> pairs;
  for (std::size_t b = 0; b < ys.block_count(); ++b)
    for (std::size_t a = 0; a < xs.block_count(); ++a)
      if (norms[b * xs.block_count() + a] > cut)
        for (PointId y : ys.block_points(b))
          for (PointId x : xs.block_points(a)) pairs.emplace_back(y, x);
  return Relation(xs.base(), ys.base(), std::move(pairs));
}

Scale propagation(const Operator& t, double tol) {
  if (!t.endogenous())
    throw std::invalid_argument(
        "propagation: modules live over different spaces; classify the "
        "support instead");
  return entourage_scale(op_support(t, tol));
}

double operator_norm(const Operator& t, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be > 0");
  return kernels::sigma_max(t.mat, tol);
}

Operator truncate(const Operator& t, Scale n) {
  if (!t.endogenous())
    throw std::invalid_argument("truncate: operator is not endogenous");
  const LFCMSpace& sp = *t.source.space();
  Matrix m = t.mat;
  for (std::size_t b = 0; b < sp.block_count(); ++b)
    for (std::size_t a = 0; a < sp.block_count(); ++a) {
      if (sp.block_max_dist(b, a) <= n) continue;
      for (int i : t.target.coords_of_block(b))
        for (int j : t.source.coords_of_block(a))
          m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
              Complex(0.0, 0.0);
    }
  return Operator(t.source, t.target, std::move(m));
}

ApproxProfile approx_profile(const Operator& t, double norm_tol) {
  if (!t.endogenous())
    throw std::invalid_argument("approx_profile: operator is not endogenous");
  const LFCMSpace& sp = *t.source.space();
  const Scale diam = sp.base()->diameter();
  const std::uint64_t horizon = diam.is_finite() ? diam.value() : 0;

  ApproxProfile prof;
  prof.upper.resize(horizon + 1, 0.0);
  prof.lower.resize(horizon + 1, 0.0);

  const std::vector<double> norms = block_norms(t);
  const std::size_t nb = sp.block_count();
  // lower(n) = max block norm at block distance > n.
  double inf_part = 0.0;
  std::vector<double> at_dist(horizon + 2, 0.0);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t a = 0; a < nb; ++a) {
      const Scale d = sp.block_max_dist(b, a);
      const double v = norms[b * nb + a];
      if (d.is_inf())
        inf_part = std::max(inf_part, v);
      else
        at_dist[d.value()] = std::max(at_dist[d.value()], v);
    }
  double suffix = inf_part;
  for (std::uint64_t n = horizon + 1; n-- > 0;) {
    if (n + 1 <= horizon) suffix = std::max(suffix, at_dist[n + 1]);
    prof.lower[n] = suffix;
  }

  // Running minimum of truncation residuals: truncate(t, m) for m <= n
  // already has propagation <= n, and zeroing a shell can raise the
  // remainder's norm, so the raw residual norms need not be monotone.
  double best = 0.0;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    const Operator resid =
        Operator(t.source, t.target, t.mat - truncate(t, Scale(n)).mat);
    bool zero = true;
    for (const Complex& z : resid.mat.data())
      if (z != Complex(0.0, 0.0)) {
        zero = false;
        break;
      }
    const double raw = zero ? 0.0 : kernels::sigma_max(resid.mat, norm_tol);
    best = (n == 0) ? raw : std::min(best, raw);
    prof.upper[n] = best;
  }
  return prof;
}

CoarselyFull is_coarsely_full(const Operator& t, double tol) {
  const Relation supp = op_support(t, tol);
  const DomainResult dom = domain(t.target, 1);
  const auto [a, b] = subordination(supp.project_target(), dom.points(),
                                    *t.target.space()->base());
  const Scale witness = max(a, b);
  return CoarselyFull{witness.is_finite(), witness};
}

namespace {

// Partition blocks into clusters of pairwise block distance <= n,
// greedily in a seeded random order.
std::vector<std::vector<std::size_t>> cluster_blocks(const LFCMSpace& sp,
                                                     Scale n, Rng& rng) {
  const std::size_t nb = sp.block_count();
  std::vector<std::size_t> order(nb);
  for (std::size_t i = 0; i < nb; ++i) order[i] = i;
  for (std::size_t i = nb; i > 1; --i)
    std::swap(order[i - 1],
              order[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
  std::vector<bool> used(nb, false);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t b : order) {
    if (used[b]) continue;
    std::vector<std::size_t> g = {b};
    used[b] = true;
    for (std::size_t c : order) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t m : g)
        if (sp.block_max_dist(m, c) > n || sp.block_max_dist(c, m) > n) {
          ok = false;
          break;
        }
      if (ok) {
        g.push_back(c);
        used[c] = true;
      }
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace

Operator random_controlled_unitary(const Module& c, Scale n,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const LFCMSpace& sp = *c.space();
  Matrix u = Matrix::identity(c.dim());

  for (const auto& group : cluster_blocks(sp, n, rng)) {
    std::vector<int> coords;
    for (std::size_t b : group)
      for (int k : c.coords_of_block(b)) coords.push_back(k);
    std::sort(coords.begin(), coords.end());
    const std::size_t m = coords.size();
    if (m == 0) continue;
    // Random phases, then a full sweep of Givens rotations in the group.
    for (int k : coords) {
      const Complex phase = rng.unit_phase();
      for (std::size_t col = 0; col < u.cols(); ++col)
        u(static_cast<std::size_t>(k), col) *= phase;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double theta = 2.0 * M_PI * rng.uniform();
        const Complex phase = rng.unit_phase();
        const double cs = std::cos(theta), sn = std::sin(theta);
        const std::size_t r1 = static_cast<std::size_t>(coords[i]);
        const std::size_t r2 = static_cast<std::size_t>(coords[j]);
        for (std::size_t col = 0; col < u.cols(); ++col) {
          const Complex a = u(r1, col), b = u(r2, col);
          u(r1, col) = cs * a + sn * phase * b;
          u(r2, col) = -sn * std::conj(phase) * a + cs * b;
        }
      }
  }
  return Operator(c, c, std::move(u));
}

std::vector<Scale> coarse_like_profile(const Operator& u, std::uint64_t n_max,
                                       int samples, double eps,
                                       std::uint64_t seed) {
  const Matrix uu = kernels::matmul(u.mat, u.mat.adjoint());
  const Matrix defect = uu - Matrix::identity(uu.rows());
  if (kernels::frobenius(defect) > 1e-8)
    throw std::invalid_argument("coarse_like_profile: operator is not unitary");

  const LFCMSpace& xs = *u.source.space();
  const Scale target_diam = u.target.space()->base()->diameter();
  const std::uint64_t m_horizon = target_diam.is_finite() ? target_diam.value() : 0;

  std::vector<Scale> profile(n_max + 1, Scale(0));
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    std::vector<Scale> per_sample(samples, Scale(0));
#ifdef _OPENMP
#pragma omp parallel for num_threads(kernels::thread_cap()) schedule(static)
#endif
    for (int k = 0; k < samples; ++k) {
      Rng rng(subseed(seed, n * static_cast<std::uint64_t>(samples) +
                                static_cast<std::uint64_t>(k)));
      // Random band matrix scaled to a contraction.
      Matrix t(u.source.dim(), u.source.dim());
      for (std::size_t b = 0; b < xs.block_count(); ++b)
        for (std::size_t a = 0; a < xs.block_count(); ++a) {
          if (xs.block_max_dist(b, a) > Scale(n)) continue;
          for (int i : u.source.coords_of_block(b))
            for (int j : u.source.coords_of_block(a))
              t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                  rng.complex_gaussian();
        }
      const double nrm = kernels::sigma_max(t);
      if (nrm > 0.0) t = Complex(1.0 / (nrm * (1.0 + 1e-12)), 0.0) * t;
      const Matrix conj =
          kernels::matmul(kernels::matmul(u.mat, t, kernels::Exec::Serial),
                          u.mat.adjoint(), kernels::Exec::Serial);
      const Operator image(u.target, u.target, conj);
      const ApproxProfile prof = approx_profile(image);
      Scale needed = Scale::inf();
      for (std::uint64_t m = 0; m <= m_horizon; ++m)
        if (prof.upper_at(m) <= eps) {
          needed = Scale(m);
          break;
        }
      per_sample[k] = needed;
    }
    Scale worst(0);
    for (const Scale s : per_sample) worst = max(worst, s);
    profile[n] = worst;
  }
  return profile;
}

DirectSum direct_sum(const Module& c0, const Module& c1) {
  if (!same_lfcm(c0.space(), c1.space()))
    throw std::invalid_argument("direct_sum: modules over different spaces");
  const LFCMPtr& sp = c0.space();
  const DimensionVector d0 = c0.dims(), d1 = c1.dims();
  DimensionVector dsum(sp->block_count());
  for (std::size_t b = 0; b < sp->block_count(); ++b) dsum[b] = d0[b] + d1[b];
  Module sum = make_module(sp, dsum);

  Matrix m0(sum.dim(), c0.dim()), m1(sum.dim(), c1.dim());
  for (std::size_t b = 0; b < sp->block_count(); ++b) {
    const auto& sum_coords = sum.coords_of_block(b);
    const auto& a0 = c0.coords_of_block(b);
    const auto& a1 = c1.coords_of_block(b);
    for (std::size_t k = 0; k < a0.size(); ++k)
      m0(static_cast<std::size_t>(sum_coords[k]),
         static_cast<std::size_t>(a0[k])) = Complex(1.0, 0.0);
    for (std::size_t k = 0; k < a1.size(); ++k)
      m1(static_cast<std::size_t>(sum_coords[a0.size() + k]),
         static_cast<std::size_t>(a1[k])) = Complex(1.0, 0.0);
  }
  Operator inc0(c0, sum, m0), inc1(c1, sum, m1);
  Operator proj0 = op_adjoint(inc0), proj1 = op_adjoint(inc1);
  return DirectSum{std::move(sum), std::move(inc0), std::move(inc1),
                   std::move(proj0), std::move(proj1)};
}

RestrictedModule restrict_to_domain(const Module& c, int kappa) {
  const DomainResult dom = domain(c, kappa);
  if (dom.blocks.empty())
    throw std::invalid_argument("restrict_to_domain: empty kappa-domain");
  std::vector<bool> keep(c.space()->block_count(), false);
  for (int b : dom.blocks) keep[static_cast<std::size_t>(b)] = true;
  std::vector<int> kept_coords;
  for (std::size_t k = 0; k < c.dim(); ++k)
    if (keep[static_cast<std::size_t>(c.block_of(k))])
      kept_coords.push_back(static_cast<int>(k));
  std::vector<int> block_of;
  block_of.reserve(kept_coords.size());
  for (int k : kept_coords) block_of.push_back(c.block_of(k));
  Module restricted(c.space(), std::move(block_of));
  Matrix inc(c.dim(), restricted.dim());
  for (std::size_t j = 0; j < kept_coords.size(); ++j)
    inc(static_cast<std::size_t>(kept_coords[j]), j) = Complex(1.0, 0.0);
  Operator inclusion(restricted, c, std::move(inc));
  return RestrictedModule{std::move(restricted), std::move(inclusion)};
}

Operator pushforward_unitary(const PointMap& f, const Module& c,
                             const LFCMPtr& target) {
  Module image = pushforward(f, c, target);
  return Operator(c, std::move(image), Matrix::identity(c.dim()));
}

}  // namespace coarselab

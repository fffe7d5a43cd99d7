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

#include "coarselab/laws.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace coarselab::laws {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void note_violation(LawResult& res, const std::string& what) {
  ++res.violations;
  if (res.notes.size() < 8) res.notes.push_back(what);
}

std::uint64_t module_key(const Module& m) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(m.dim());
  mix(m.space()->block_count());
  for (std::size_t k = 0; k < m.dim(); ++k)
    mix(static_cast<std::uint64_t>(m.block_of(k)) + 0x9e37ULL);
  return h;
}

SpacePtr interval_space(int n) {
  std::vector<PointId> pts(n);
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n));
  for (int i = 0; i < n; ++i) {
    pts[i] = i;
    for (int j = 0; j < n; ++j)
      d[i][j] = Scale(static_cast<std::uint64_t>(std::abs(i - j)));
  }
  return std::make_shared<const Space>(pts, d);
}

SpacePtr geometric_space(Rng& rng, int n) {
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }
  const double r = 1.5 * std::sqrt(std::log(std::max(n, 2)) /
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

SpacePtr two_component_space(int n1, int n2) {
  const int n = n1 + n2;
  std::vector<PointId> pts(n);
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n, Scale::inf()));
  for (int i = 0; i < n; ++i) {
    pts[i] = i;
    for (int j = 0; j < n; ++j) {
      const bool same = (i < n1) == (j < n1);
      if (same) d[i][j] = Scale(static_cast<std::uint64_t>(std::abs(i - j)));
    }
  }
  return std::make_shared<const Space>(pts, d);
}

}  // namespace

SpacePtr random_space(Rng& rng, int max_points) {
  const int n = static_cast<int>(rng.uniform_int(2, std::max(2, max_points)));
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return interval_space(n);
    case 1:
      return geometric_space(rng, n);
    default: {
      const int n1 = static_cast<int>(rng.uniform_int(1, n - 1));
      return two_component_space(n1, n - n1);
    }
  }
}

LFCMPtr random_lfcm(Rng& rng, int max_points, bool multi_point_blocks) {
  const SpacePtr base = random_space(rng, max_points);
  if (!multi_point_blocks || rng.uniform() < 0.5) return lfcm_singletons(base);
  // Chunk each component's points into blocks of size 1..3.
  const std::vector<PointId> labels = component_labels(*base);
  std::map<PointId, std::vector<PointId>> by_comp;
  for (std::size_t i = 0; i < base->size(); ++i)
    by_comp[labels[i]].push_back(base->point(i));
  std::vector<std::vector<PointId>> blocks;
  for (auto& [comp, pts] : by_comp) {
    std::size_t i = 0;
    while (i < pts.size()) {
      const std::size_t take = std::min<std::size_t>(
          pts.size() - i, static_cast<std::size_t>(rng.uniform_int(1, 3)));
      blocks.emplace_back(pts.begin() + i, pts.begin() + i + take);
      i += take;
    }
  }
  return make_lfcm(base, std::move(blocks));
}

Module random_module(Rng& rng, const LFCMPtr& sp, int max_dim) {
  DimensionVector dims(sp->block_count());
  int total = 0;
  for (auto& d : dims) {
    d = static_cast<int>(rng.uniform_int(0, max_dim));
    total += d;
  }
  if (total == 0)
    dims[static_cast<std::size_t>(
        rng.uniform_int(0, sp->block_count() - 1))] = 1;
  return make_module(sp, dims);
}

Operator random_block_sparse_operator(Rng& rng, const Module& source,
                                      const Module& target, double keep_prob,
                                      Scale band) {
  const LFCMSpace& xs = *source.space();
  const LFCMSpace& ys = *target.space();
  Matrix m(target.dim(), source.dim());
  for (std::size_t b = 0; b < ys.block_count(); ++b)
    for (std::size_t a = 0; a < xs.block_count(); ++a) {
      bool keep = rng.uniform() < keep_prob;
      if (!keep && source.space() == target.space())
        keep = ys.block_max_dist(b, a) <= band;
      if (!keep) continue;
      for (int i : target.coords_of_block(b))
        for (int j : source.coords_of_block(a))
          m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
              rng.complex_gaussian();
    }
  return Operator(source, target, std::move(m));
}

LawResult support_calculus(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "support-calculus";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, static_cast<std::uint64_t>(i)));
    const LFCMPtr sp = random_lfcm(rng, 30);
    const Module c0 = random_module(rng, sp, 3);
    const Module c1 = random_module(rng, sp, 3);
    const Module c2 = random_module(rng, sp, 3);
    const double keep = 0.2 + 0.5 * rng.uniform();
    const Scale band(static_cast<std::uint64_t>(rng.uniform_int(0, 2)));
    const Operator t1 = random_block_sparse_operator(rng, c0, c1, keep, band);
    const Operator t2 = random_block_sparse_operator(rng, c0, c1, keep, band);
    const Operator s = random_block_sparse_operator(rng, c1, c2, keep, band);

    const auto tol = [](const Operator& t) {
      return 1e-10 * kernels::sigma_max(t.mat);
    };
    const Relation supp_t1 = op_support(t1, tol(t1));
    if (!(op_support(op_adjoint(t1), tol(t1)) == rel_transpose(supp_t1)))
      note_violation(res, "adjoint support law at sample " + std::to_string(i));

    const Operator sum = op_add(t1, t2);
    if (!rel_subset(op_support(sum, tol(sum)),
                    rel_union(supp_t1, op_support(t2, tol(t2)))))
      note_violation(res, "sum support law at sample " + std::to_string(i));

    const Operator st = op_compose(s, t1);
    const Relation bound = rel_compose(
        op_support(s, tol(s)),
        rel_compose(disc_gauge_relation(sp), supp_t1));
    if (!rel_subset(op_support(st, tol(st)), bound))
      note_violation(res, "composition support law at sample " + std::to_string(i));
    res.checked += 3;
  }
  res.seconds = elapsed(start);
  return res;
}

namespace {

CentralUnitary random_central_unitary(Rng& rng, const LFCMPtr& sp) {
  std::map<PointId, double> angles;
  for (PointId c : component_labels(*sp->base()))
    angles[c] = 2.0 * M_PI * rng.uniform();
  return make_central_unitary(sp, angles);
}

}  // namespace

LawResult approx_relation_laws(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "approx-relation-laws";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, 0x10000 + static_cast<std::uint64_t>(i)));
    const LFCMPtr xs = random_lfcm(rng, 14);
    const LFCMPtr ys = random_lfcm(rng, 14);
    const Module cx = random_module(rng, xs, 2);
    const Module cy = random_module(rng, ys, 2);
    const Operator t = random_block_sparse_operator(rng, cx, cy, 0.85, Scale(0));

    const RelMode mode = rng.uniform() < 0.75 ? RelMode::Blocks : RelMode::Windows;
    const auto rand_params = [&]() {
      const Scale fy = ys->disc_gauge_scale();
      const Scale ex = xs->disc_gauge_scale();
      const std::uint64_t fspan =
          ys->base()->diameter().is_finite() ? ys->base()->diameter().value() : 0;
      const std::uint64_t espan =
          xs->base()->diameter().is_finite() ? xs->base()->diameter().value() : 0;
      return ApproxParams{
          0.05 + 0.85 * rng.uniform(),
          fy + Scale(static_cast<std::uint64_t>(rng.uniform_int(0, fspan))),
          ex + Scale(static_cast<std::uint64_t>(rng.uniform_int(0, espan))),
          mode};
    };
    const ApproxParams p1 = rand_params();
    const ApproxParams p2 = rand_params();
    const ApproxParams pj = parameter_join(p1, p2);
    const Relation r1 = approximate_relation(t, p1);
    const Relation r2 = approximate_relation(t, p2);
    const Relation rj = approximate_relation(t, pj);
    if (!rel_subset(r1, rj) || !rel_subset(r2, rj))
      note_violation(res, "join monotonicity at sample " + std::to_string(i));

    const ApproxParams pid = parameter_join(p1, p1);
    if (pid.delta != p1.delta || pid.f_scale != p1.f_scale ||
        pid.e_scale != p1.e_scale)
      note_violation(res, "join idempotence at sample " + std::to_string(i));

    if (mode == RelMode::Blocks) {
      const ApproxParams swapped{p1.delta, p1.e_scale, p1.f_scale, mode};
      if (!(approximate_relation(op_adjoint(t), swapped) == rel_transpose(r1)))
        note_violation(res, "adjoint relation transpose at sample " +
                                std::to_string(i));
      const ApproxParams widened{p1.delta, p1.f_scale, p1.e_scale,
                                 RelMode::Windows};
      if (!rel_subset(r1, approximate_relation(t, widened)))
        note_violation(res, "blocks within windows at sample " +
                                std::to_string(i));
    }

    const CentralUnitary u = random_central_unitary(rng, xs);
    const CentralUnitary v = random_central_unitary(rng, ys);
    if (!central_invariance_check(t, u, v, p1))
      note_violation(res, "central invariance at sample " + std::to_string(i));
    res.checked += 4;
  }
  res.seconds = elapsed(start);
  return res;
}

namespace {

FunctorSpec conjugation_functor(std::uint64_t fseed, Scale prop) {
  auto object_map = [](const Module& c) { return c; };
  auto unitaries = [fseed, prop](const Module& c) {
    return random_controlled_unitary(c, prop, subseed(fseed, module_key(c)));
  };
  return functor_from_unitaries(object_map, unitaries);
}

double op_norm_of(const Matrix& m) { return kernels::sigma_max(m); }

// Band morphisms have component-preserving support, which the
// congruence laws require.
Operator band_op(Rng& rng, const Module& a, const Module& b) {
  const Scale band(static_cast<std::uint64_t>(rng.uniform_int(0, 2)));
  return random_block_sparse_operator(rng, a, b, 0.0, band);
}

}  // namespace

LawResult categorical_laws(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "categorical-laws";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, 0x20000 + static_cast<std::uint64_t>(i)));
    const LFCMPtr sp = random_lfcm(rng, 12);
    const Module c = random_module(rng, sp, 2);
    const Module d = random_module(rng, sp, 2);
    const Module c2 = random_module(rng, sp, 2);
    const Module d2 = random_module(rng, sp, 2);
    const Scale diam = sp->base()->diameter();
    const Scale prop(static_cast<std::uint64_t>(rng.uniform_int(
        0, diam.is_finite() ? static_cast<std::int64_t>(diam.value()) : 0)));
    const FunctorSpec f = conjugation_functor(rng.u64(), prop);

    const Operator t = band_op(rng, c, d);
    const Operator s = band_op(rng, d, c2);

    const double scale_ts =
        std::max(1.0, op_norm_of(t.mat) * op_norm_of(s.mat));
    if (op_norm_of(f.apply(identity_operator(c)).mat -
                   Matrix::identity(c.dim())) > 1e-10)
      note_violation(res, "functor identity law at sample " + std::to_string(i));
    if (op_norm_of(f.apply(op_compose(s, t)).mat -
                   op_compose(f.apply(s), f.apply(t)).mat) > 1e-10 * scale_ts)
      note_violation(res, "functor composition law at sample " + std::to_string(i));
    if (op_norm_of(f.apply(op_adjoint(t)).mat - op_adjoint(f.apply(t)).mat) >
        1e-10 * std::max(1.0, op_norm_of(t.mat)))
      note_violation(res, "functor adjoint law at sample " + std::to_string(i));

    const DirectSum ds = direct_sum(c, d);
    if (!(op_compose(ds.proj0, ds.inc0).mat == Matrix::identity(c.dim())) ||
        !(op_compose(ds.proj1, ds.inc1).mat == Matrix::identity(d.dim())))
      note_violation(res, "biproduct retraction law at sample " + std::to_string(i));
    if (!(op_add(op_compose(ds.inc0, ds.proj0), op_compose(ds.inc1, ds.proj1))
              .mat == Matrix::identity(ds.sum.dim())))
      note_violation(res, "biproduct resolution law at sample " + std::to_string(i));
    if (c.dim() > 0 &&
        propagation(ds.inc0) > sp->disc_gauge_scale())
      note_violation(res, "inclusion propagation at sample " + std::to_string(i));

    // Additivity isomorphism: unitary + naturality square.
    const Operator alpha = additivity_iso(f, c, d);
    const Matrix gram = kernels::matmul(alpha.mat, alpha.mat.adjoint());
    if (kernels::frobenius(gram - Matrix::identity(gram.rows())) > 1e-9)
      note_violation(res, "additivity iso not unitary at sample " + std::to_string(i));
    const Operator h = band_op(rng, d, d2);
    const Operator tc = band_op(rng, c, c2);
    const DirectSum ds2 = direct_sum(c2, d2);
    const Operator t_oplus_h =
        op_add(op_compose(ds2.inc0, op_compose(tc, ds.proj0)),
               op_compose(ds2.inc1, op_compose(h, ds.proj1)));
    const Operator alpha2 = additivity_iso(f, c2, d2);
    const Operator lhs = op_compose(f.apply(t_oplus_h), alpha);
    const Operator f_sum =
        op_add(op_compose(ds2.inc0, op_compose(f.apply(tc), ds.proj0)),
               op_compose(ds2.inc1, op_compose(f.apply(h), ds.proj1)));
    const Operator rhs = op_compose(alpha2, f_sum);
    if (op_norm_of(lhs.mat - rhs.mat) >
        1e-9 * std::max(1.0, op_norm_of(t_oplus_h.mat)))
      note_violation(res, "additivity naturality at sample " + std::to_string(i));

    // Congruence mod central unitaries: reflexivity on a twisted copy,
    // transitivity, and compatibility with composition.
    const CentralUnitary u1 = random_central_unitary(rng, sp);
    const CentralUnitary v1 = random_central_unitary(rng, sp);
    const Operator t_twisted =
        op_compose(central_unitary_operator(v1, d),
                   op_compose(t, central_unitary_operator(u1, c)));
    if (!cong_mod_central(t_twisted, t))
      note_violation(res, "congruence witness at sample " + std::to_string(i));
    if (!cong_mod_central(t, t_twisted))
      note_violation(res, "congruence symmetry at sample " + std::to_string(i));
    const CentralUnitary u2 = random_central_unitary(rng, sp);
    const CentralUnitary v2 = random_central_unitary(rng, sp);
    const Operator t_twice =
        op_compose(central_unitary_operator(v2, d),
                   op_compose(t_twisted, central_unitary_operator(u2, c)));
    if (!cong_mod_central(t_twice, t))
      note_violation(res, "congruence transitivity at sample " + std::to_string(i));
    const Operator s_twisted =
        op_compose(central_unitary_operator(v2, c2),
                   op_compose(s, central_unitary_operator(u2, d)));
    if (!cong_mod_central(op_compose(s_twisted, t_twisted), op_compose(s, t)))
      note_violation(res, "congruence composition at sample " + std::to_string(i));

    res.checked += 10;
  }
  res.seconds = elapsed(start);
  return res;
}

LawResult bracket_laws(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "approximability-bracket";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, 0x30000 + static_cast<std::uint64_t>(i)));
    const LFCMPtr sp = random_lfcm(rng, 30);
    const Module c = random_module(rng, sp, 3);
    const Module d = random_module(rng, sp, 3);
    const double keep = 0.15 + 0.6 * rng.uniform();
    const Scale band(static_cast<std::uint64_t>(rng.uniform_int(0, 3)));
    const Operator t = random_block_sparse_operator(rng, c, d, keep, band);
    const double tnorm = kernels::sigma_max(t.mat);
    const double eps = 1e-9 * (1.0 + tnorm);

    const ApproxProfile prof = approx_profile(t);
    const Scale prop = propagation(t);
    for (std::size_t n = 0; n < prof.upper.size(); ++n) {
      if (prof.lower[n] > prof.upper[n] + eps)
        note_violation(res, "bracket order at sample " + std::to_string(i));
      if (n + 1 < prof.upper.size() && prof.upper[n + 1] > prof.upper[n] + eps)
        note_violation(res, "upper profile not monotone at sample " +
                                std::to_string(i));
      const bool zero = prof.upper[n] == 0.0;
      const bool banded = prop <= Scale(n);
      if (zero != banded)
        note_violation(res, "band certificate mismatch at sample " +
                                std::to_string(i) + " n=" + std::to_string(n));
    }

    // Norm inequalities and closure estimates.
    const Operator t2 = random_block_sparse_operator(rng, c, d, keep, band);
    const double n1 = kernels::sigma_max(t.mat), n2 = kernels::sigma_max(t2.mat);
    if (kernels::sigma_max(op_add(t, t2).mat) > n1 + n2 + eps)
      note_violation(res, "norm triangle inequality at sample " + std::to_string(i));
    const Operator u = random_block_sparse_operator(rng, d, c, keep, band);
    if (kernels::sigma_max(op_compose(u, t).mat) >
        kernels::sigma_max(u.mat) * n1 * (1.0 + 1e-9) + 1e-12)
      note_violation(res, "norm submultiplicative at sample " + std::to_string(i));

    const ApproxProfile prof2 = approx_profile(t2);
    const ApproxProfile prof_sum = approx_profile(op_add(t, t2));
    for (std::size_t n = 0; n < prof_sum.upper.size(); ++n)
      if (prof_sum.upper[n] > prof.upper_at(n) + prof2.upper_at(n) + eps)
        note_violation(res, "sum closure estimate at sample " + std::to_string(i));

    const ApproxProfile prof_u = approx_profile(u);
    const ApproxProfile prof_comp = approx_profile(op_compose(u, t));
    const std::uint64_t disc = sp->disc_gauge_scale().value();
    const std::uint64_t horizon = prof_comp.upper.empty()
                                      ? 0
                                      : prof_comp.upper.size() - 1;
    for (std::uint64_t ns = 0; ns <= horizon; ns += 1 + horizon / 3)
      for (std::uint64_t nt = 0; nt <= horizon; nt += 1 + horizon / 3) {
        const double lhsv = prof_comp.upper_at(ns + nt + disc);
        const double rhsv = kernels::sigma_max(u.mat) * prof.upper_at(nt) +
                            prof_u.upper_at(ns) * n1;
        if (lhsv > rhsv + eps)
          note_violation(res, "composition closure estimate at sample " +
                                  std::to_string(i));
      }

    // Conjugation by a controlled unitary: support bound exact.
    const Scale wprop(static_cast<std::uint64_t>(rng.uniform_int(0, 2)));
    const Operator w = random_controlled_unitary(c, wprop, rng.u64());
    const Operator endo = random_block_sparse_operator(rng, c, c, keep, band);
    const Operator conj = op_compose(w, op_compose(endo, op_adjoint(w)));
    const Relation disc_rel = disc_gauge_relation(sp);
    const Relation wsupp = op_support(w, 1e-10 * kernels::sigma_max(w.mat));
    const Relation bound = rel_compose(
        wsupp,
        rel_compose(disc_rel,
                    rel_compose(op_support(endo, 1e-10 * kernels::sigma_max(
                                                      endo.mat)),
                                rel_compose(disc_rel, rel_transpose(wsupp)))));
    if (!rel_subset(op_support(conj, 1e-10 * kernels::sigma_max(conj.mat)), bound))
      note_violation(res, "controlled conjugation support at sample " +
                              std::to_string(i));
    res.checked += 7;
  }
  res.seconds = elapsed(start);
  return res;
}

LawResult norm_agreement(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "norm-closed-form-agreement";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, 0x40000 + static_cast<std::uint64_t>(i)));
    const int small = static_cast<int>(rng.uniform_int(1, 3));
    const int other = static_cast<int>(rng.uniform_int(1, 6));
    const bool tall = rng.uniform() < 0.5;
    Matrix m(tall ? other : small, tall ? small : other);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t cidx = 0; cidx < m.cols(); ++cidx)
        m(r, cidx) = rng.complex_gaussian();
    const double exact = kernels::sigma_max_small(m);
    const double iter = kernels::sigma_max_power(m, 1e-12, 200000);
    if (std::abs(exact - iter) > 1e-9 * std::max(1.0, exact))
      note_violation(res, "norm disagreement at sample " + std::to_string(i) +
                              " (" + std::to_string(exact) + " vs " +
                              std::to_string(iter) + ")");
    ++res.checked;
  }
  res.seconds = elapsed(start);
  return res;
}

LawResult domain_invariance_laws(int samples, std::uint64_t seed) {
  LawResult res;
  res.name = "domain-invariance";
  const auto start = Clock::now();
  for (int i = 0; i < samples; ++i) {
    Rng rng(subseed(seed, 0x50000 + static_cast<std::uint64_t>(i)));
    const LFCMPtr sp = random_lfcm(rng, 24);
    const std::size_t nb = sp->block_count();

    DimensionVector dims0(nb);
    int total = 0;
    for (auto& v : dims0) {
      v = static_cast<int>(rng.uniform_int(0, 3));
      total += v;
    }
    if (total == 0) dims0[0] = 1;
    const Module c0 = make_module(sp, dims0);

    // Block permutation with displacement <= 2 (disjoint near swaps).
    std::vector<std::size_t> sigma(nb);
    for (std::size_t b = 0; b < nb; ++b) sigma[b] = b;
    if (rng.uniform() < 0.5) {
      std::vector<bool> used(nb, false);
      for (std::size_t b = 0; b < nb; ++b) {
        if (used[b]) continue;
        std::vector<std::size_t> cands;
        for (std::size_t b2 = b + 1; b2 < nb; ++b2)
          if (!used[b2] && sp->block_max_dist(b, b2) <= Scale(2))
            cands.push_back(b2);
        if (!cands.empty() && rng.uniform() < 0.6) {
          const std::size_t pick = cands[static_cast<std::size_t>(
              rng.uniform_int(0, cands.size() - 1))];
          sigma[b] = pick;
          sigma[pick] = b;
          used[pick] = true;
        }
        used[b] = true;
      }
    }
    DimensionVector dims1(nb, 0);
    for (std::size_t b = 0; b < nb; ++b) dims1[sigma[b]] = dims0[b];
    const Module c1 = make_module(sp, dims1);

    // t = P_sigma (I + band/(2||band||)): invertible, band width <= 2.
    Matrix band(c0.dim(), c0.dim());
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t a = 0; a < nb; ++a) {
        if (sp->block_max_dist(b, a) > Scale(2)) continue;
        for (int r : c0.coords_of_block(b))
          for (int cc : c0.coords_of_block(a))
            band(static_cast<std::size_t>(r), static_cast<std::size_t>(cc)) =
                rng.complex_gaussian();
      }
    const double bn = kernels::sigma_max(band);
    Matrix a_mat = Matrix::identity(c0.dim());
    if (bn > 0.0) a_mat = a_mat + Complex(0.5 / bn, 0.0) * band;
    Matrix perm(c1.dim(), c0.dim());
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& from = c0.coords_of_block(b);
      const auto& to = c1.coords_of_block(sigma[b]);
      for (std::size_t k = 0; k < from.size(); ++k)
        perm(static_cast<std::size_t>(to[k]), static_cast<std::size_t>(from[k])) =
            Complex(1.0, 0.0);
    }
    const Operator t(c0, c1, kernels::matmul(perm, a_mat));
    try {
      const DomainInvariance di = domain_invariance_check(t, {1, 2, 3});
      if (di.condition > 1e6)
        note_violation(res, "condition too large at sample " + std::to_string(i));
    } catch (const std::exception& e) {
      note_violation(res, std::string("domain invariance: ") + e.what() +
                              " at sample " + std::to_string(i));
    }
    ++res.checked;
  }
  res.seconds = elapsed(start);
  return res;
}

LawResult pushforward_naturality(int close_pairs, int nonclose_pairs,
                                 std::uint64_t seed) {
  LawResult res;
  res.name = "pushforward-naturality";
  const auto start = Clock::now();
  for (int i = 0; i < close_pairs; ++i) {
    Rng rng(subseed(seed, 0x60000 + static_cast<std::uint64_t>(i)));
    const SpacePtr base =
        rng.uniform() < 0.5
            ? interval_space(static_cast<int>(rng.uniform_int(4, 20)))
            : geometric_space(rng, static_cast<int>(rng.uniform_int(6, 20)));
    const LFCMPtr sp = lfcm_singletons(base);

    const auto random_displaced = [&](const std::vector<PointId>* near,
                                      std::uint64_t radius) {
      std::vector<PointId> img(base->size());
      for (std::size_t k = 0; k < base->size(); ++k) {
        const PointId from = near ? (*near)[k] : base->point(k);
        std::vector<PointId> ball;
        for (std::size_t j = 0; j < base->size(); ++j)
          if (base->dist(base->index_of(from), j) <= Scale(radius))
            ball.push_back(base->point(j));
        img[k] = ball[static_cast<std::size_t>(
            rng.uniform_int(0, ball.size() - 1))];
      }
      return img;
    };
    const PointMap f(base, base, random_displaced(nullptr, 2));
    const PointMap g(base, base, random_displaced(&f.image(), 2));

    DimensionVector dims(sp->block_count());
    for (auto& v : dims) v = static_cast<int>(rng.uniform_int(1, 2));
    const Module c = make_module(sp, dims);
    const Module d = random_module(rng, sp, 2);
    const Operator t = random_block_sparse_operator(rng, c, d, 0.7, Scale(1));

    const FunctorSpec ff = pushforward_functor(f, sp, sp);
    const FunctorSpec gf = pushforward_functor(g, sp, sp);
    const Operator eta_c(ff.apply_object(c), gf.apply_object(c),
                         Matrix::identity(c.dim()));
    const Operator eta_d(ff.apply_object(d), gf.apply_object(d),
                         Matrix::identity(d.dim()));
    const Operator lhs = op_compose(gf.apply(t), eta_c);
    const Operator rhs = op_compose(eta_d, ff.apply(t));
    if (!(lhs.mat == rhs.mat))
      note_violation(res, "eta naturality square at pair " + std::to_string(i));

    try {
      const Scale w = closeness_from_functor_congruence(f, g, sp, sp, {c});
      if (w != closeness(f, g))
        note_violation(res, "closeness witness mismatch at pair " +
                                std::to_string(i));
    } catch (const std::exception& e) {
      note_violation(res, std::string("support scale assert: ") + e.what());
    }
    res.checked += 2;
  }

  for (int i = 0; i < nonclose_pairs; ++i) {
    Rng rng(subseed(seed, 0x70000 + static_cast<std::uint64_t>(i)));
    const int n1 = static_cast<int>(rng.uniform_int(2, 8));
    const int n2 = static_cast<int>(rng.uniform_int(2, 8));
    const SpacePtr base = two_component_space(n1, n2);
    const LFCMPtr sp = lfcm_singletons(base);
    const PointMap f = PointMap::identity(base);
    std::vector<PointId> gimg = base->points();
    // Send one point of the first component into the second.
    gimg[static_cast<std::size_t>(rng.uniform_int(0, n1 - 1))] =
        base->point(static_cast<std::size_t>(n1));
    const PointMap g(base, base, gimg);
    const Module c = uniform_module(sp);
    try {
      const Scale w = closeness_from_functor_congruence(f, g, sp, sp, {c});
      if (!w.is_inf())
        note_violation(res, "non-close pair reported finite at " +
                                std::to_string(i));
    } catch (const std::exception& e) {
      note_violation(res, std::string("non-close support assert: ") + e.what());
    }
    ++res.checked;
  }
  res.seconds = elapsed(start);
  return res;
}

std::vector<LawResult> run_all(int samples, std::uint64_t seed) {
  std::vector<LawResult> out;
  out.push_back(support_calculus(samples, seed));
  out.push_back(approx_relation_laws(samples, seed));
  out.push_back(categorical_laws(std::max(1, samples / 2), seed));
  out.push_back(bracket_laws(samples, seed));
  out.push_back(norm_agreement(2 * samples, seed));
  out.push_back(domain_invariance_laws(samples, seed));
  out.push_back(pushforward_naturality(std::max(1, samples / 5),
                                       std::max(1, samples / 25), seed));
  return out;
}

}  // namespace coarselab::laws

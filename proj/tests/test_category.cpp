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

#include <doctest.h>

#include "coarselab/harness.hpp"
#include "coarselab/laws.hpp"
#include "helpers.hpp"

using namespace coarselab;
using namespace coarselab::testing;

TEST_CASE("pushforward functor laws") {
  const SpacePtr z6 = zline(6);
  const LFCMPtr sp = lfcm_singletons(z6);
  const Module c = make_module(sp, {1, 2, 1, 0, 1, 1});
  const Module d = uniform_module(sp);

  const FunctorSpec idf = pushforward_functor(PointMap::identity(z6), sp, sp);
  CHECK(idf.apply_object(c) == c);
  Rng rng(12);
  const Operator t = laws::random_block_sparse_operator(rng, c, d, 0.5, Scale(1));
  CHECK(idf.apply(t).mat == t.mat);

  // (g o f)_* = g_* o f_* exactly, and morphism matrices never change.
  const PointMap f(z6, z6, {0, 0, 1, 2, 3, 4});
  const PointMap g(z6, z6, {1, 2, 3, 4, 5, 5});
  std::vector<PointId> comp(6);
  for (std::size_t i = 0; i < 6; ++i) comp[i] = g.apply(f.image()[i]);
  const PointMap gf(z6, z6, comp);
  const FunctorSpec ff = pushforward_functor(f, sp, sp);
  const FunctorSpec gg = pushforward_functor(g, sp, sp);
  const FunctorSpec gff = pushforward_functor(gf, sp, sp);
  CHECK(gff.apply_object(c) == gg.apply_object(ff.apply_object(c)));
  CHECK(gff.apply(t).mat == gg.apply(ff.apply(t)).mat);
  CHECK(ff.apply(t).mat == t.mat);
}

TEST_CASE("functors from unitaries are conjugations") {
  const LFCMPtr sp = lfcm_singletons(zline(8));
  const FunctorSpec f = functor_from_unitaries(
      [](const Module& m) { return m; },
      [](const Module& m) { return random_controlled_unitary(m, Scale(1), 99); });
  const Module u = uniform_module(sp);
  Rng rng(5);
  const Operator t = laws::random_block_sparse_operator(rng, u, u, 0.0, Scale(1));
  // Support grows by at most twice the unitary propagation (+ gauges).
  const Operator ft = f.apply(t);
  CHECK(propagation(ft) <= propagation(t) + Scale(2));
  CHECK(kernels::sigma_max(f.apply(op_adjoint(t)).mat -
                           op_adjoint(ft).mat) < 1e-10);

  // Non-unitary input is rejected.
  const FunctorSpec bad = functor_from_unitaries(
      [](const Module& m) { return m; },
      [](const Module& m) {
        return op_scale(Complex(2.0, 0.0), identity_operator(m));
      });
  CHECK_THROWS_AS(bad.apply(t), std::invalid_argument);
}

TEST_CASE("additivity isomorphism") {
  const LFCMPtr sp = lfcm_singletons(zline(5));
  const Module c = make_module(sp, {1, 0, 2, 1, 1});
  const Module d = uniform_module(sp);
  SUBCASE("identity functor gives the identity") {
    const FunctorSpec idf =
        pushforward_functor(PointMap::identity(sp->base()), sp, sp);
    CHECK(additivity_iso(idf, c, d).mat ==
          Matrix::identity(direct_sum(c, d).sum.dim()));
  }
  SUBCASE("pushforward functor gives the canonical permutation") {
    const PointMap f(sp->base(), sp->base(), {1, 1, 2, 3, 3});
    const FunctorSpec ff = pushforward_functor(f, sp, sp);
    const Operator alpha = additivity_iso(ff, c, d);
    // A 0/1 permutation matrix.
    std::size_t ones = 0;
    for (const Complex& z : alpha.mat.data()) {
      CHECK((z == Complex(0, 0) || z == Complex(1, 0)));
      if (z == Complex(1, 0)) ++ones;
    }
    CHECK(ones == alpha.mat.rows());
    const Matrix gram = kernels::matmul(alpha.mat, alpha.mat.adjoint());
    CHECK(gram == Matrix::identity(alpha.mat.rows()));
  }
}

TEST_CASE("congruence modulo central unitaries") {
  const LFCMPtr z4 = lfcm_singletons(zline(4));
  const Module u = uniform_module(z4);
  Rng rng(7);
  const Operator s = laws::random_block_sparse_operator(rng, u, u, 0.0, Scale(1));

  SUBCASE("a global phase on a connected space") {
    const Complex phase(std::cos(0.7), std::sin(0.7));
    const auto w = cong_mod_central(op_scale(phase, s), s);
    REQUIRE(w.has_value());
    CHECK(w->residual < 1e-12);
    CHECK(std::abs(w->u.phase_by_component.at(0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(w->v.phase_by_component.at(0) - phase) < 1e-12);
  }
  SUBCASE("equality has residual zero") {
    const auto w = cong_mod_central(s, s);
    REQUIRE(w.has_value());
    CHECK(w->residual == 0.0);
  }
  SUBCASE("cross-component mixing is detected, grid oracle agrees") {
    const LFCMPtr tc = lfcm_singletons(two_lines(2, 2));
    const Module m = uniform_module(tc);
    Matrix base(4, 4);
    base(0, 0) = base(1, 1) = base(2, 2) = base(3, 3) = Complex(1, 0);
    const Operator s2(m, m, base);
    // Perturbation of norm 0.5 that mixes the two components.
    Matrix pert = base;
    pert(0, 2) = Complex(0.5, 0.0);
    const Operator t2(m, m, pert);
    CHECK_FALSE(cong_mod_central(t2, s2, 1e-6).has_value());

    // Exhaustive phase-grid oracle over (alpha_k, beta_l) at 1e-3
    // resolution, via r^2 = |t|_F^2 + |s|_F^2 - 2 Re sum gamma_lk c_lk.
    double t_fro2 = 0.0, s_fro2 = 0.0;
    for (const Complex& z : t2.mat.data()) t_fro2 += std::norm(z);
    for (const Complex& z : s2.mat.data()) s_fro2 += std::norm(z);
    // Component pairs: (0,0),(0,2),(2,0),(2,2); inner products of blocks.
    Complex c00(0, 0), c02(0, 0), c20(0, 0), c22(0, 0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Complex v = std::conj(s2.mat(i, j)) * t2.mat(i, j);
        if (i < 2 && j < 2) c00 += v;
        else if (i < 2) c02 += v;
        else if (j < 2) c20 += v;
        else c22 += v;
      }
    // Gauge alpha_0 = 1; scan alpha_1 on the grid.  For fixed alpha the
    // beta phases maximise independently, in closed form:
    //   r^2 = |t|_F^2 + |s|_F^2
    //         - 2 (|c00 + conj(a1) c02| + |c20 + conj(a1) c22|).
    double best = 1e300;
    const int steps = 6284;  // 2*pi / 1e-3
    for (int a = 0; a < steps; ++a) {
      const Complex a1c = std::polar(1.0, -a * 1e-3);
      const double gain =
          std::abs(c00 + a1c * c02) + std::abs(c20 + a1c * c22);
      best = std::min(best, t_fro2 + s_fro2 - 2.0 * gain);
    }
    const double snorm = kernels::sigma_max(s2.mat);
    CHECK(std::sqrt(std::max(0.0, best)) >= 0.4 * snorm);
  }
}

TEST_CASE("natural isomorphisms modulo central unitaries") {
  const LFCMPtr sp = lfcm_singletons(zline(6));
  const Module c = uniform_module(sp);
  const Module d = make_module(sp, {1, 1, 2, 1, 0, 1});
  Rng rng(21);
  const Operator t = laws::random_block_sparse_operator(rng, c, d, 0.0, Scale(1));

  SUBCASE("identity transformation between equal functors") {
    const FunctorSpec f = pushforward_functor(PointMap::identity(sp->base()), sp, sp);
    const NaturalIsoVerdict v = natural_iso_mod_central_check(
        f, f, [](const Module& m) { return identity_operator(m); }, {t});
    CHECK(v.ok);
  }
  SUBCASE("scrambled functor over a ground truth map against its pushforward") {
    const PointMap f(sp->base(), sp->base(), {1, 0, 2, 4, 3, 5});
    const FunctorSpec push = pushforward_functor(f, sp, sp);
    const std::uint64_t fseed = 2718;
    const auto scramble = [&](const Module& m) {
      // U(C) = W(f_* C) o U_f(C): implements a functor over f.
      const Operator uf = pushforward_unitary(f, m, sp);
      const Operator w = random_controlled_unitary(
          uf.target, Scale(1), subseed(fseed, m.dim() + 31 * m.block_of(0)));
      return op_compose(w, uf);
    };
    const FunctorSpec scrambled = functor_from_unitaries(
        [&](const Module& m) { return pushforward(f, m, sp); }, scramble);
    const NaturalIsoVerdict v = natural_iso_mod_central_check(
        scrambled, push,
        [&](const Module& m) {
          // eta_C = V(C) U(C)^* : F(C) -> G(C).
          const Operator uc = scramble(m);
          const Operator vc = pushforward_unitary(f, m, sp);
          return Operator(uc.target, vc.target,
                          kernels::matmul(vc.mat, uc.mat.adjoint()));
        },
        {t, identity_operator(c)});
    CHECK(v.ok);

    // Extraction applied to the functor's unitary at a full-support
    // module recovers a relation close to the graph of f.
    ExtractOptions opts;
    const ExtractionResult ext = extract_embedding(scramble(c), opts);
    REQUIRE(ext.relation.has_value());
    CHECK(relation_asymptotic_witness(*ext.relation, f.graph()) <= Scale(4));
  }
}

TEST_CASE("assembled functors") {
  const LFCMPtr sp = lfcm_singletons(zline(10));
  const Module c1 = uniform_module(sp);
  const Module c2 = make_module(sp, {2, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  const PointMap id = PointMap::identity(sp->base());

  SUBCASE("no pairs reduces to the pushforward functor") {
    const FunctorSpec f = assemble_functor({}, id, sp, sp);
    CHECK(f.apply_object(c1) == c1);
    CHECK(f.unitary(c1).mat == Matrix::identity(10));
  }
  SUBCASE("listed modules act by their unitaries") {
    const Operator u1 = random_controlled_unitary(c1, Scale(2), 5);
    const FunctorSpec f = assemble_functor({{c1, c1, u1}}, id, sp, sp);
    Rng rng(3);
    const Operator t = laws::random_block_sparse_operator(rng, c1, c1, 0.0, Scale(1));
    const Operator expect =
        op_compose(u1, op_compose(t, op_adjoint(u1)));
    CHECK(kernels::sigma_max(f.apply(t).mat - expect.mat) < 1e-12);
    // Off-list modules fall back to the pushforward.
    CHECK(f.unitary(c2).mat == Matrix::identity(11));
  }
  SUBCASE("conflicting duplicate sources are rejected") {
    const Operator u1 = random_controlled_unitary(c1, Scale(1), 1);
    const Operator u2 = random_controlled_unitary(c1, Scale(1), 2);
    CHECK_THROWS_AS(assemble_functor({{c1, c1, u1}, {c1, c1, u2}}, id, sp, sp),
                    std::invalid_argument);
  }
  SUBCASE("unitaries over different ground truths disagree under extraction") {
    // identity vs reversal on Z10: per-object extractions are far apart.
    const PointMap ident = PointMap::identity(sp->base());
    const PointMap reversal(sp->base(), sp->base(),
                            {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
    const Module cy1 = transport_module(ident, c1, sp);
    const Operator u1 = build_scrambled_unitary(ident, c1, cy1, Scale(0), 7);
    const Module cy2 = transport_module(reversal, c2, sp);
    const Operator u2 = build_scrambled_unitary(reversal, c2, cy2, Scale(0), 8);
    const FunctorSpec f =
        assemble_functor({{c1, cy1, u1}, {c2, cy2, u2}}, id, sp, sp);

    ExtractOptions opts;
    const ExtractionResult r1 = extract_embedding(f.unitary(c1), opts);
    const ExtractionResult r2 = extract_embedding(f.unitary(c2), opts);
    REQUIRE(r1.relation.has_value());
    REQUIRE(r2.relation.has_value());
    const Scale disagreement =
        relation_asymptotic_witness(*r1.relation, *r2.relation);
    CHECK(disagreement >= Scale(5));  // not close at experiment scale
  }
}

TEST_CASE("closeness from functor congruence") {
  const SpacePtr z6 = zline(6);
  const LFCMPtr sp = lfcm_singletons(z6);
  const Module c = uniform_module(sp);
  const PointMap id = PointMap::identity(z6);
  CHECK(closeness_from_functor_congruence(id, id, sp, sp, {c}) == Scale(0));
  const PointMap clamp(z6, z6, {1, 2, 3, 4, 5, 5});
  CHECK(closeness_from_functor_congruence(id, clamp, sp, sp, {c}) == Scale(1));

  const SpacePtr tc = two_lines(3, 3);
  const LFCMPtr tsp = lfcm_singletons(tc);
  const PointMap f = PointMap::identity(tc);
  const PointMap g(tc, tc, {3, 1, 2, 3, 4, 5});
  const Module cu = uniform_module(tsp);
  CHECK(closeness_from_functor_congruence(f, g, tsp, tsp, {cu}).is_inf());
  // The congruence unitary indeed carries a cross-component support pair.
  const Operator nu(pushforward(f, cu, tsp), pushforward(g, cu, tsp),
                    Matrix::identity(6));
  const Relation nu_supp = op_support(nu);
  bool cross = false;
  for (const auto& [y, x] : nu_supp.pairs())
    if (tc->dist_by_id(y, x).is_inf()) cross = true;
  CHECK(cross);
}

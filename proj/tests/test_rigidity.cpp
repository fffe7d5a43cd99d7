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

TEST_CASE("approximate relations in blocks mode") {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  Matrix rev(6, 6);
  for (int i = 0; i < 6; ++i) rev(5 - i, i) = Complex(1.0, 0.0);
  const Operator t(u, u, rev);
  const Relation f = approximate_relation(
      t, ApproxParams{0.5, Scale(0), Scale(0), RelMode::Blocks});
  const PointMap reversal(z6->base(), z6->base(), {5, 4, 3, 2, 1, 0});
  CHECK(f == reversal.graph());

  CHECK(approximate_relation(identity_operator(u),
                             ApproxParams{0.9, Scale(0), Scale(0),
                                          RelMode::Blocks}) ==
        diagonal(z6->base()));

  CHECK_THROWS_AS(approximate_relation(
                      t, ApproxParams{1.5, Scale(0), Scale(0), RelMode::Blocks}),
                  std::invalid_argument);
}

TEST_CASE("windows mode catches unions that blocks mode misses") {
  // Column (1/sqrt2, 1/sqrt2) from a point into Z2.
  const LFCMPtr z1 = lfcm_singletons(zline(1));
  const LFCMPtr z2 = lfcm_singletons(zline(2));
  const Module src = uniform_module(z1);
  const Module dst = uniform_module(z2);
  Matrix col(2, 1);
  col(0, 0) = Complex(M_SQRT1_2, 0.0);
  col(1, 0) = Complex(M_SQRT1_2, 0.0);
  const Operator t(src, dst, col);

  const Relation lo = approximate_relation(
      t, ApproxParams{0.5, Scale(0), Scale(0), RelMode::Blocks});
  CHECK(lo.size() == 2);  // both block pairs pass at delta = 0.5

  const Relation hi_blocks = approximate_relation(
      t, ApproxParams{0.8, Scale(0), Scale(0), RelMode::Blocks});
  CHECK(hi_blocks.empty());

  const Relation hi_windows = approximate_relation(
      t, ApproxParams{0.8, Scale(1), Scale(0), RelMode::Windows});
  CHECK(hi_windows.contains(0, 0));
  CHECK(hi_windows.contains(1, 0));  // the union {0,1} x {0} qualifies
}

TEST_CASE("parameter joins") {
  const ApproxParams p1{0.3, Scale(2), Scale(1), RelMode::Blocks};
  const ApproxParams p2{0.1, Scale(1), Scale(4), RelMode::Blocks};
  const ApproxParams j = parameter_join(p1, p2);
  CHECK(j.delta == 0.1);
  CHECK(j.f_scale == Scale(2));
  CHECK(j.e_scale == Scale(4));
  CHECK_THROWS_AS(parameter_join(
                      p1, ApproxParams{0.1, Scale(1), Scale(1), RelMode::Windows}),
                  std::invalid_argument);
}

TEST_CASE("central unitaries") {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  const CentralUnitary id = make_central_unitary(z6, {{0, 0.0}});
  CHECK(central_unitary_operator(id, u).mat == Matrix::identity(6));

  // Connected space: scalar.
  const CentralUnitary rot = make_central_unitary(z6, {{0, 1.0}});
  const Matrix m = central_unitary_operator(rot, u).mat;
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(m(i, i) - Complex(std::cos(1.0), std::sin(1.0))) < 1e-15);

  const LFCMPtr tc = lfcm_singletons(two_lines(3, 3));
  const CentralUnitary pm = make_central_unitary(tc, {{0, 0.0}, {3, M_PI}});
  const Matrix d = central_unitary_operator(pm, uniform_module(tc)).mat;
  CHECK(std::abs(d(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(d(3, 3) - Complex(-1, 0)) < 1e-12);

  CHECK_THROWS_AS(make_central_unitary(tc, {{0, 0.0}}), std::invalid_argument);
}

TEST_CASE("central invariance of approximate relations") {
  const LFCMPtr tc = lfcm_singletons(two_lines(3, 3));
  const Module u = uniform_module(tc);
  const ApproxParams p{0.2, Scale(1), Scale(1), RelMode::Blocks};
  const CentralUnitary one = identity_central_unitary(tc);
  Rng rng(404);
  for (int k = 0; k < 100; ++k) {
    Matrix m(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if ((i < 3) == (j < 3)) m(i, j) = rng.complex_gaussian();
    const Operator t(u, u, m);
    const CentralUnitary cu = make_central_unitary(
        tc, {{0, 2 * M_PI * rng.uniform()}, {3, 2 * M_PI * rng.uniform()}});
    const CentralUnitary cv = make_central_unitary(
        tc, {{0, 2 * M_PI * rng.uniform()}, {3, 2 * M_PI * rng.uniform()}});
    CHECK(central_invariance_check(t, cu, cv, p));
    CHECK(central_invariance_check(t, one, one, p));
  }
}

TEST_CASE("a cross-block rotation is not relation-invariant") {
  // Negative control: conjugating by a unitary that mixes two blocks of
  // one component changes the approximate relation.  (Unitaries that
  // commute with every projection never do.)
  const LFCMPtr z2 = lfcm_singletons(zline(2));
  const Module u = uniform_module(z2);
  Matrix mix(2, 2);
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  mix(0, 0) = Complex(c, 0);
  mix(0, 1) = Complex(-s, 0);
  mix(1, 0) = Complex(s, 0);
  mix(1, 1) = Complex(c, 0);
  const Operator rot(u, u, mix);
  const Operator t = identity_operator(u);
  const ApproxParams p{0.3, Scale(0), Scale(0), RelMode::Blocks};
  const Relation before = approximate_relation(t, p);
  const Relation after = approximate_relation(op_compose(rot, t), p);
  CHECK_FALSE(before == after);
}

TEST_CASE("extraction from a permutation unitary") {
  const LFCMPtr z10 = lfcm_singletons(zline(10));
  const Module u = uniform_module(z10);
  Matrix rev(10, 10);
  for (int i = 0; i < 10; ++i) rev(9 - i, i) = Complex(1.0, 0.0);
  ExtractOptions opts;
  opts.delta = 0.1;
  opts.schedule = {{Scale(0), Scale(0)}};
  const ExtractionResult r = extract_embedding(Operator(u, u, rev), opts);
  CHECK(r.success);
  REQUIRE(r.relation.has_value());
  const PointMap reversal(z10->base(), z10->base(),
                          {9, 8, 7, 6, 5, 4, 3, 2, 1, 0});
  CHECK(r.relation->pairs() == reversal.graph().pairs());
  CHECK(r.report.coarse_equivalence());
}

TEST_CASE("extraction recovers scrambled ground truths") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const LFCMPtr sp = gen_space(SpaceKind::RandomGeometric, 40, 1, seed);
    const PointMap f = gen_equivalence(sp, 2, seed + 50);
    const Module cx = uniform_module(sp);
    const Module cy = transport_module(f, cx, sp);
    const Operator u = build_scrambled_unitary(f, cx, cy, Scale(1), seed);
    ExtractOptions opts;
    const ExtractionResult r = extract_embedding(u, opts);
    REQUIRE(r.success);
    const Scale witness = relation_asymptotic_witness(*r.relation, f.graph());
    CHECK(witness <= Scale(2 + 2 * 1 + 2));
  }
}

TEST_CASE("extraction restricted to the faithfulness domain") {
  const LFCMPtr z4 = lfcm_singletons(zline(4));
  const Module ambient = make_module(z4, {4, 0, 0, 0});
  const Module full = uniform_module(z4);
  const Operator u = random_controlled_unitary(full, Scale(3), 3);
  const Operator into(full, ambient, u.mat);
  ExtractOptions opts;
  const ExtractionResult r = extract_embedding(into, opts);
  REQUIRE(r.relation.has_value());
  for (const auto& [y, x] : r.relation->pairs()) CHECK(y == 0);
}

TEST_CASE("windows mode rescues extraction when block mass is spread") {
  // Pairwise Hadamard rotations: every matrix entry has modulus
  // 1/sqrt(2), so at delta = 0.8 no single block qualifies, while the
  // radius-1 window unions have norm 1.
  const LFCMPtr z8 = lfcm_singletons(zline(8));
  const Module u = uniform_module(z8);
  Matrix m(8, 8);
  for (int p = 0; p < 4; ++p) {
    m(2 * p, 2 * p) = Complex(M_SQRT1_2, 0);
    m(2 * p, 2 * p + 1) = Complex(M_SQRT1_2, 0);
    m(2 * p + 1, 2 * p) = Complex(M_SQRT1_2, 0);
    m(2 * p + 1, 2 * p + 1) = Complex(-M_SQRT1_2, 0);
  }
  const Operator had(u, u, m);

  ExtractOptions blocks;
  blocks.delta = 0.8;
  blocks.schedule = {{Scale(1), Scale(1)}, {Scale(2), Scale(2)}};
  const ExtractionResult rb = extract_embedding(had, blocks);
  CHECK_FALSE(rb.success);
  CHECK(rb.steps.front().relation_size == 0);

  ExtractOptions windows = blocks;
  windows.mode = RelMode::Windows;
  const ExtractionResult rw = extract_embedding(had, windows);
  REQUIRE(rw.success);
  REQUIRE(rw.relation.has_value());
  // Window rectangles are radius-1 unions on both sides, so the
  // recovered relation thickens the diagonal by at most F + E.
  const Relation diag = diagonal(z8->base());
  CHECK(relation_asymptotic_witness(*rw.relation, diag) <= Scale(2));
}

TEST_CASE("blocks-mode adjoint relation is the exact transpose") {
  Rng rng(3131);
  for (int k = 0; k < 25; ++k) {
    const LFCMPtr sp = laws::random_lfcm(rng, 12);
    const Module a = laws::random_module(rng, sp, 2);
    const Module b = laws::random_module(rng, sp, 2);
    const Operator t = laws::random_block_sparse_operator(rng, a, b, 0.7, Scale(1));
    const Scale fa = sp->disc_gauge_scale();
    const ApproxParams p{0.3, fa, fa, RelMode::Blocks};
    const ApproxParams swapped{0.3, fa, fa, RelMode::Blocks};
    CHECK(approximate_relation(op_adjoint(t), swapped) ==
          rel_transpose(approximate_relation(t, p)));
  }
}

TEST_CASE("domain invariance checks") {
  const LFCMPtr z4 = lfcm_singletons(zline(4));
  SUBCASE("identity has zero witnesses") {
    const Module u = uniform_module(z4);
    const DomainInvariance di =
        domain_invariance_check(identity_operator(u), {1, 2, 3});
    for (const auto& [kappa, w] : di.witnesses) CHECK(w == Scale(0));
  }
  SUBCASE("explicit propagation-1 permutation moves the 1-domain by 1") {
    const Module c0 = uniform_module(z4);
    const Module c1 = make_module(z4, {2, 1, 0, 1});
    // Coordinates of blocks (0,1,2,3) land in blocks (0,0,1,3).
    Matrix perm(4, 4);
    perm(0, 0) = Complex(1, 0);
    perm(1, 1) = Complex(1, 0);
    perm(2, 2) = Complex(1, 0);
    perm(3, 3) = Complex(1, 0);
    const Operator t(c0, c1, perm);
    CHECK(propagation(t) == Scale(1));
    const DomainInvariance di = domain_invariance_check(t, {1});
    CHECK(di.witnesses.at(0).second == Scale(1));
  }
  SUBCASE("singular input is rejected") {
    const Module u = uniform_module(z4);
    CHECK_THROWS_AS(domain_invariance_check(zero_operator(u, u), {1}),
                    std::invalid_argument);
  }
}

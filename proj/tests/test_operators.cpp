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

#include "coarselab/laws.hpp"
#include "helpers.hpp"

using namespace coarselab;
using namespace coarselab::testing;

namespace {

Operator shift_on_z6() {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  Matrix m(6, 6);
  for (int i = 0; i < 5; ++i) m(i + 1, i) = Complex(1.0, 0.0);
  return Operator(u, u, std::move(m));
}

Operator spike_on_z6() {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  Matrix m = Matrix::identity(6);
  m(5, 0) = Complex(0.3, 0.0);
  return Operator(u, u, std::move(m));
}

}  // namespace

TEST_CASE("support patterns") {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  CHECK(op_support(identity_operator(u)) == diagonal(z6->base()));
  std::vector<std::pair<PointId, PointId>> expect;
  for (PointId i = 0; i < 5; ++i) expect.push_back({i + 1, i});
  CHECK(op_support(shift_on_z6()) == rel(z6->base(), z6->base(), expect));
  CHECK(op_support(zero_operator(u, u)).empty());
}

TEST_CASE("propagation") {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  Matrix diag(6, 6);
  for (int i = 0; i < 6; ++i) diag(i, i) = Complex(0.5 + i, 0.0);
  CHECK(propagation(Operator(u, u, diag)) == Scale(0));
  Matrix tri = Matrix::identity(6);
  for (int i = 0; i < 5; ++i) {
    tri(i + 1, i) = Complex(0.2, 0.1);
    tri(i, i + 1) = Complex(-0.1, 0.0);
  }
  CHECK(propagation(Operator(u, u, tri)) == Scale(1));
  CHECK(propagation(spike_on_z6()) == Scale(5));
}

TEST_CASE("operator arithmetic and support contracts") {
  const Operator s = shift_on_z6();
  CHECK(op_support(op_adjoint(s)) == rel_transpose(op_support(s)));
  const Operator s2 = op_compose(s, s);
  std::vector<std::pair<PointId, PointId>> expect;
  for (PointId i = 0; i < 4; ++i) expect.push_back({i + 2, i});
  CHECK(rel_subset(op_support(s2),
                   rel(s.source.space()->base(), s.source.space()->base(), expect)));
  const Operator cancel = op_add(s, op_scale(Complex(-1.0, 0.0), s));
  CHECK(op_support(cancel).empty());
}

TEST_CASE("operator norms") {
  const LFCMPtr z2 = lfcm_singletons(zline(2));
  const Module u2 = uniform_module(z2);
  CHECK(operator_norm(matrix_op(u2, u2, {{Complex(3, 0), Complex(0, 0)},
                                         {Complex(0, 0), Complex(4, 0)}})) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(operator_norm(matrix_op(u2, u2, {{Complex(0, 0), Complex(1, 0)},
                                         {Complex(0, 0), Complex(0, 0)}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(matrix_op(u2, u2, {{Complex(1, 0), Complex(1, 0)},
                                         {Complex(1, 0), Complex(1, 0)}})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(operator_norm(identity_operator(u2), 0.0),
                  std::invalid_argument);
}

TEST_CASE("truncation") {
  const Operator t = spike_on_z6();
  CHECK(truncate(t, Scale(4)).mat == Matrix::identity(6));
  CHECK(truncate(t, Scale::inf()).mat == t.mat);
}

TEST_CASE("truncation to the block diagonal") {
  const LFCMPtr z6 = lfcm_singletons(zline(6));
  const Module u = uniform_module(z6);
  Matrix m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(i, j) = Complex(1.0 + i, -0.5 * j);
  const Matrix cut = truncate(Operator(u, u, m), Scale(0)).mat;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(cut(i, j) == (i == j ? m(i, j) : Complex(0.0, 0.0)));
}

TEST_CASE("approximability profiles") {
  SUBCASE("single far entry") {
    const ApproxProfile p = approx_profile(spike_on_z6());
    for (std::uint64_t n = 0; n < 5; ++n) {
      CHECK(p.upper_at(n) == doctest::Approx(0.3).epsilon(1e-9));
      CHECK(p.lower_at(n) == doctest::Approx(0.3).epsilon(1e-9));
    }
    CHECK(p.upper_at(5) == 0.0);
    CHECK(p.lower_at(5) == 0.0);
  }
  SUBCASE("band of width two is certified at two") {
    const LFCMPtr z6 = lfcm_singletons(zline(6));
    const Module u = uniform_module(z6);
    Matrix m(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (std::abs(i - j) <= 2) m(i, j) = Complex(1.0, 1.0);
    const ApproxProfile p = approx_profile(Operator(u, u, m));
    CHECK(p.upper_at(2) == 0.0);
    CHECK(p.upper_at(1) > 0.0);
  }
  SUBCASE("random operator keeps the bracket ordered") {
    Rng rng(8);
    const LFCMPtr z20 = lfcm_singletons(zline(20));
    const Module u = uniform_module(z20);
    Matrix m(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) m(i, j) = rng.complex_gaussian();
    const ApproxProfile p = approx_profile(Operator(u, u, m));
    for (std::size_t n = 0; n < p.upper.size(); ++n)
      CHECK(p.lower[n] <= p.upper[n] + 1e-9);
  }
}

TEST_CASE("coarsely full operators") {
  const LFCMPtr z5 = lfcm_singletons(zline(5));
  const Module u = uniform_module(z5);
  Rng rng(4);
  Matrix m = Matrix::identity(5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) += 0.2 * rng.complex_gaussian();
  const CoarselyFull inv = is_coarsely_full(Operator(u, u, m));
  CHECK(inv.full);

  CHECK_FALSE(is_coarsely_full(zero_operator(u, u)).full);

  const Module target = bounded_module(z5, 2, 1);
  Matrix rank_one(1, 5);
  rank_one(0, 0) = Complex(1.0, 0.0);
  const CoarselyFull ro = is_coarsely_full(Operator(u, target, rank_one));
  CHECK(ro.full);
  CHECK(ro.witness <= z5->disc_gauge_scale());
}

TEST_CASE("random controlled unitaries") {
  const LFCMPtr z8 = lfcm_singletons(zline(8));
  const Module u = uniform_module(z8);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Operator w = random_controlled_unitary(u, Scale(seed % 4), seed);
    const Matrix defect =
        kernels::matmul(w.mat, w.mat.adjoint()) - Matrix::identity(8);
    CHECK(kernels::frobenius(defect) <= 1e-12);
    CHECK(propagation(w) <= Scale(seed % 4));
  }
  // n = 0 on singleton blocks: diagonal.
  const Operator d = random_controlled_unitary(u, Scale(0), 17);
  CHECK(rel_subset(op_support(d), diagonal(z8->base())));
}

TEST_CASE("coarse-like profiles") {
  const LFCMPtr z8 = lfcm_singletons(zline(8));
  const Module u = uniform_module(z8);
  SUBCASE("identity conjugation is the identity on bands") {
    const std::vector<Scale> prof =
        coarse_like_profile(identity_operator(u), 3, 4, 1e-9, 5);
    for (std::uint64_t n = 0; n <= 3; ++n) CHECK(prof[n] == Scale(n));
  }
  SUBCASE("a permutation isometry conjugates bands to equal bands") {
    Matrix rev(8, 8);
    for (int i = 0; i < 8; ++i) rev(7 - i, i) = Complex(1.0, 0.0);
    const std::vector<Scale> prof =
        coarse_like_profile(Operator(u, u, rev), 3, 4, 1e-9, 5);
    for (std::uint64_t n = 0; n <= 3; ++n) CHECK(prof[n] == Scale(n));
  }
  SUBCASE("a controlled unitary widens bands by at most twice its propagation") {
    const Operator w = random_controlled_unitary(u, Scale(1), 23);
    const std::vector<Scale> prof = coarse_like_profile(w, 2, 4, 1e-9, 5);
    for (std::uint64_t n = 0; n <= 2; ++n) CHECK(prof[n] <= Scale(n + 2));
  }
  CHECK_THROWS_AS(coarse_like_profile(shift_on_z6(), 2, 2, 1e-9, 1),
                  std::invalid_argument);  // the shift is not unitary
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  Rng rng(66);
  for (int k = 0; k < 10; ++k) {
    const LFCMPtr sp = laws::random_lfcm(rng, 16);
    const Module a = laws::random_module(rng, sp, 3);
    const Module b = laws::random_module(rng, sp, 3);
    const Operator t = laws::random_block_sparse_operator(rng, a, b, 0.6, Scale(1));
    CHECK(block_norms(t, kernels::Exec::Serial) ==
          block_norms(t, kernels::Exec::Parallel));
    const Operator s = laws::random_block_sparse_operator(rng, b, a, 0.6, Scale(1));
    CHECK(kernels::matmul(s.mat, t.mat, kernels::Exec::Serial) ==
          kernels::matmul(s.mat, t.mat, kernels::Exec::Parallel));
  }
}

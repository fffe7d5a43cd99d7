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

#ifndef COARSELAB_TESTS_HELPERS_HPP
#define COARSELAB_TESTS_HELPERS_HPP

#include <vector>

#include "coarselab/modules.hpp"
#include "coarselab/operators.hpp"

namespace coarselab::testing {

/// {0..n-1} with d(i,j) = |i-j|.
inline SpacePtr zline(int n) {
  std::vector<PointId> pts(n);
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n));
  for (int i = 0; i < n; ++i) {
    pts[i] = i;
    for (int j = 0; j < n; ++j)
      d[i][j] = Scale(static_cast<std::uint64_t>(std::abs(i - j)));
  }
  return std::make_shared<const Space>(pts, d);
}

/// Two intervals of sizes n1 and n2 at infinite distance.
inline SpacePtr two_lines(int n1, int n2) {
  const int n = n1 + n2;
  std::vector<PointId> pts(n);
  std::vector<std::vector<Scale>> d(n, std::vector<Scale>(n, Scale::inf()));
  for (int i = 0; i < n; ++i) {
    pts[i] = i;
    for (int j = 0; j < n; ++j)
      if ((i < n1) == (j < n1))
        d[i][j] = Scale(static_cast<std::uint64_t>(std::abs(i - j)));
  }
  return std::make_shared<const Space>(pts, d);
}

inline Relation rel(const SpacePtr& src, const SpacePtr& tgt,
                    std::vector<std::pair<PointId, PointId>> pairs) {
  return Relation(src, tgt, std::move(pairs));
}

/// Independent oracle: least n with A inside E_n[B] by direct
/// enumeration of n = 0..diam (inf if none).
inline Scale oracle_subordination(const std::vector<PointId>& a,
                                  const std::vector<PointId>& b,
                                  const SpacePtr& s) {
  if (a.empty()) return Scale(0);
  const std::uint64_t diam = s->diameter().is_finite() ? s->diameter().value() : 0;
  for (std::uint64_t n = 0; n <= diam; ++n) {
    const std::vector<PointId> nb = neighborhood(entourage(s, Scale(n)), b);
    bool all = true;
    for (PointId p : a)
      if (!std::binary_search(nb.begin(), nb.end(), p)) {
        all = false;
        break;
      }
    if (all) return Scale(n);
  }
  return Scale::inf();
}

inline Operator matrix_op(const Module& src, const Module& tgt,
                          const std::vector<std::vector<Complex>>& rows) {
  Matrix m(tgt.dim(), src.dim());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return Operator(src, tgt, std::move(m));
}

}  // namespace coarselab::testing

#endif  // COARSELAB_TESTS_HELPERS_HPP

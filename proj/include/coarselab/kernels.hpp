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

#ifndef COARSELAB_KERNELS_HPP
#define COARSELAB_KERNELS_HPP

#include <cstddef>
#include <vector>

#include "coarselab/matrix.hpp"

// Dense numeric kernels.  Every parallel kernel has a serial reference
// implementation selected by Exec; outputs are bit-identical across the
// two paths and across thread counts, because each output entry is an
// independent computation with a fixed evaluation order.

namespace coarselab::kernels {

enum class Exec { Serial, Parallel };

/// Number of worker threads: min(OpenMP default, COARSE_LAB_THREADS).
int thread_cap();

Matrix matmul(const Matrix& a, const Matrix& b, Exec exec = Exec::Parallel);

/// Frobenius norm with a canonical (sorted) summation order, so that a
/// matrix and its adjoint give bit-identical values.
double frobenius(const Matrix& m);

/// Largest singular value of a matrix with min(rows, cols) <= 3 via
/// closed-form eigenvalues of the Gram matrix.
double sigma_max_small(const Matrix& m);

/// Largest singular value via power iteration on the smaller Gram
/// matrix; deterministic fixed start vector, iteration cap `max_iter`.
double sigma_max_power(const Matrix& m, double tol = 1e-12,
                       int max_iter = 20000);

/// Largest singular value.  Dispatches to the closed form for tiny Gram
/// sides and to power iteration otherwise.  The Gram matrix is chosen
/// canonically so sigma_max(m) and sigma_max(m.adjoint()) are
/// bit-identical, which keeps support patterns exactly adjoint-symmetric.
double sigma_max(const Matrix& m, double tol = 1e-12);

/// Norms ||1_B m 1_A|| for every pair (B, A) of row/column index groups.
/// Returned flattened as entry [B * col_groups.size() + A].
std::vector<double> block_norm_table(
    const Matrix& m, const std::vector<std::vector<int>>& row_groups,
    const std::vector<std::vector<int>>& col_groups,
    Exec exec = Exec::Parallel, double tol = 1e-12);

/// Inverse by LU with partial pivoting; throws std::runtime_error on a
/// numerically singular pivot.
Matrix inverse(const Matrix& m);

}  // namespace coarselab::kernels

#endif  // COARSELAB_KERNELS_HPP

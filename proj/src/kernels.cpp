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

#include "coarselab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coarselab::kernels {

int thread_cap() {
  static const int cap = [] {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("COARSE_LAB_THREADS")) {
      const int requested = std::atoi(env);
      if (requested >= 1 && requested < n) n = requested;
    }
    return n;
  }();
  return cap;
}

Matrix matmul(const Matrix& a, const Matrix& b, Exec exec) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  const auto row = [&](std::size_t i) {
    for (std::size_t l = 0; l < k; ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += ail * b(l, j);
    }
  };
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_cap()) schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i)
      row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < m; ++i) row(i);
  }
  return c;
}

double frobenius(const Matrix& m) {
  std::vector<double> sq;
  sq.reserve(m.rows() * m.cols());
  for (const Complex& z : m.data()) sq.push_back(std::norm(z));
  std::sort(sq.begin(), sq.end());
  double s = 0.0;
  for (double v : sq) s += v;
  return std::sqrt(s);
}

namespace {

// Gram matrix of the smaller side.  For square inputs the choice between
// m*m^H and m^H*m is made by a content comparison that picks the same
// matrix for m and m.adjoint(), making sigma_max exactly adjoint-symmetric.
Matrix canonical_gram(const Matrix& m) {
  const Matrix adj = m.adjoint();
  const Matrix* left = nullptr;
  if (m.cols() < m.rows()) {
    left = &m;  // gram = m^H m, cols x cols
  } else if (m.rows() < m.cols()) {
    left = &adj;
  } else {
    left = &m;
    const auto& x = m.data();
    const auto& y = adj.data();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].real() != y[i].real() || x[i].imag() != y[i].imag()) {
        const bool x_first = x[i].real() < y[i].real() ||
                             (x[i].real() == y[i].real() &&
                              x[i].imag() < y[i].imag());
        left = x_first ? &m : &adj;
        break;
      }
    }
  }
  const std::size_t r = left->rows(), c = left->cols();
  Matrix g(c, c);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i; j < c; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t l = 0; l < r; ++l)
        s += std::conj((*left)(l, i)) * (*left)(l, j);
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
  return g;
}

// Largest eigenvalue of a Hermitian PSD matrix of size <= 3.
double top_eig_small(const Matrix& g) {
  const std::size_t n = g.rows();
  if (n == 0) return 0.0;
  if (n == 1) return std::max(0.0, g(0, 0).real());
  if (n == 2) {
    const double a = g(0, 0).real(), c = g(1, 1).real();
    const double b2 = std::norm(g(0, 1));
    const double tr = a + c;
    const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b2));
    return std::max(0.0, 0.5 * (tr + disc));
  }
  // n == 3: trigonometric closed form for Hermitian eigenvalues.
  const double a11 = g(0, 0).real(), a22 = g(1, 1).real(), a33 = g(2, 2).real();
  const Complex a12 = g(0, 1), a13 = g(0, 2), a23 = g(1, 2);
  const double p1 = std::norm(a12) + std::norm(a13) + std::norm(a23);
  const double q = (a11 + a22 + a33) / 3.0;
  if (p1 == 0.0) return std::max({a11, a22, a33, 0.0});
  const double p2 = (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) +
                    (a33 - q) * (a33 - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return std::max(0.0, q);
  // det((g - q I) / p); real for Hermitian input.
  const Complex b11(a11 - q, 0.0), b22(a22 - q, 0.0), b33(a33 - q, 0.0);
  const Complex det = b11 * (b22 * b33 - a23 * std::conj(a23)) -
                      a12 * (std::conj(a12) * b33 - a23 * std::conj(a13)) +
                      a13 * (std::conj(a12) * std::conj(a23) -
                             b22 * std::conj(a13));
  double r = det.real() / (2.0 * p * p * p);
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return std::max(0.0, q + 2.0 * p * std::cos(phi));
}

double top_eig_power(const Matrix& g, double tol, int max_iter) {
  const std::size_t n = g.rows();
  if (n == 0) return 0.0;
  // Fixed pseudo-random start, seeded only by the dimension.
  std::vector<Complex> v(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL ^ (0x100000001b3ULL * n);
  double nrm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double re = 0.25 + static_cast<double>(state >> 40) * 0x1.0p-24;
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double im = static_cast<double>(state >> 40) * 0x1.0p-24;
    v[i] = Complex(re, im);
    nrm += std::norm(v[i]);
  }
  nrm = std::sqrt(nrm);
  for (auto& z : v) z /= nrm;

  std::vector<Complex> w(n);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) s += g(i, j) * v[j];
      w[i] = s;
    }
    Complex ray(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) ray += std::conj(v[i]) * w[i];
    lambda = ray.real();
    double res = 0.0, wn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res += std::norm(w[i] - lambda * v[i]);
      wn += std::norm(w[i]);
    }
    res = std::sqrt(res);
    wn = std::sqrt(wn);
    if (wn == 0.0) return 0.0;
    if (res <= tol * std::max(lambda, 1e-300)) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  return std::max(0.0, lambda);
}

}  // namespace

double sigma_max_small(const Matrix& m) {
  if (std::min(m.rows(), m.cols()) > 3)
    throw std::invalid_argument("sigma_max_small: min dimension exceeds 3");
  return std::sqrt(top_eig_small(canonical_gram(m)));
}

double sigma_max_power(const Matrix& m, double tol, int max_iter) {
  // Eigenvalue tolerance is squared-scale relative, so halve it.
  return std::sqrt(top_eig_power(canonical_gram(m), 0.5 * tol, max_iter));
}

double sigma_max(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Matrix g = canonical_gram(m);
  if (g.rows() <= 3) return std::sqrt(top_eig_small(g));
  return std::sqrt(top_eig_power(g, 0.5 * tol, 20000));
}

std::vector<double> block_norm_table(
    const Matrix& m, const std::vector<std::vector<int>>& row_groups,
    const std::vector<std::vector<int>>& col_groups, Exec exec, double tol) {
  const std::size_t nb = row_groups.size(), na = col_groups.size();
  std::vector<double> out(nb * na, 0.0);
  const auto entry = [&](std::size_t flat) {
    const std::size_t bi = flat / na, aj = flat % na;
    if (row_groups[bi].empty() || col_groups[aj].empty()) return;
    const Matrix sub = m.gather(row_groups[bi], col_groups[aj]);
    bool all_zero = true;
    for (const Complex& z : sub.data())
      if (z != Complex(0.0, 0.0)) {
        all_zero = false;
        break;
      }
    out[flat] = all_zero ? 0.0 : sigma_max(sub, tol);
  };
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(thread_cap()) schedule(static)
#endif
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(nb * na); ++f)
      entry(static_cast<std::size_t>(f));
  } else {
    for (std::size_t f = 0; f < nb * na; ++f) entry(f);
  }
  return out;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) throw std::runtime_error("inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const Complex d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace coarselab::kernels

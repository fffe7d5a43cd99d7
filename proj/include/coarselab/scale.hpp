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

#ifndef COARSELAB_SCALE_HPP
#define COARSELAB_SCALE_HPP

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace coarselab {

/// Value of an extended metric: a natural number or infinity.
///
/// Infinity is a distinct state, not a sentinel integer; addition and
/// comparisons treat it as absorbing.
class Scale {
 public:
  constexpr Scale() : n_(0), finite_(true) {}
  constexpr explicit Scale(std::uint64_t n) : n_(n), finite_(true) {}

  static constexpr Scale inf() {
    Scale s;
    s.finite_ = false;
    s.n_ = std::numeric_limits<std::uint64_t>::max();
    return s;
  }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_inf() const { return !finite_; }

  /// Finite value; must not be called on infinity.
  constexpr std::uint64_t value() const { return n_; }

  friend constexpr bool operator==(Scale a, Scale b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.n_ == b.n_);
  }
  friend constexpr bool operator!=(Scale a, Scale b) { return !(a == b); }
  friend constexpr bool operator<(Scale a, Scale b) {
    if (a.finite_ && b.finite_) return a.n_ < b.n_;
    return a.finite_ && !b.finite_;
  }
  friend constexpr bool operator<=(Scale a, Scale b) { return a < b || a == b; }
  friend constexpr bool operator>(Scale a, Scale b) { return b < a; }
  friend constexpr bool operator>=(Scale a, Scale b) { return b <= a; }

  friend constexpr Scale operator+(Scale a, Scale b) {
    if (!a.finite_ || !b.finite_) return inf();
    return Scale(a.n_ + b.n_);
  }

  friend constexpr Scale min(Scale a, Scale b) { return a < b ? a : b; }
  friend constexpr Scale max(Scale a, Scale b) { return a < b ? b : a; }

  std::string str() const { return finite_ ? std::to_string(n_) : "inf"; }

  friend std::ostream& operator<<(std::ostream& os, Scale s) {
    return os << s.str();
  }

 private:
  std::uint64_t n_;
  bool finite_;
};

/// Monotone nondecreasing map from finite scales to scales, stored on
/// 0..N and constant beyond N.  An empty profile evaluates to 0.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<Scale> values) : values_(std::move(values)) {}

  Scale at(std::uint64_t n) const {
    if (values_.empty()) return Scale(0);
    if (n >= values_.size()) return values_.back();
    return values_[static_cast<std::size_t>(n)];
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<Scale>& values() const { return values_; }

  bool all_finite() const {
    for (Scale s : values_)
      if (s.is_inf()) return false;
    return true;
  }

  Scale max_value() const {
    Scale m(0);
    for (Scale s : values_) m = max(m, s);
    return m;
  }

 private:
  std::vector<Scale> values_;
};

}  // namespace coarselab

#endif  // COARSELAB_SCALE_HPP

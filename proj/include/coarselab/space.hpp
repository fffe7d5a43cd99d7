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

#ifndef COARSELAB_SPACE_HPP
#define COARSELAB_SPACE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "coarselab/scale.hpp"

namespace coarselab {

using PointId = std::int64_t;

/// Finite set of points with an extended metric (values in N or inf).
/// The metric induces the filtration E_n = {(x,y) | d(x,y) <= n}, which
/// is the whole coarse structure at this scale.
///
/// Construction validates d(x,x)=0, symmetry and the (inf-absorbing)
/// triangle inequality; violating inputs are rejected rather than
/// repaired.
class Space {
 public:
  Space(std::vector<PointId> points, std::vector<std::vector<Scale>> dist);

  std::size_t size() const { return points_.size(); }
  const std::vector<PointId>& points() const { return points_; }
  PointId point(std::size_t i) const { return points_[i]; }

  bool has_point(PointId p) const { return index_.count(p) > 0; }
  std::size_t index_of(PointId p) const;

  Scale dist(std::size_t i, std::size_t j) const {
    return dist_[i * points_.size() + j];
  }
  Scale dist_by_id(PointId x, PointId y) const {
    return dist(index_of(x), index_of(y));
  }

  /// Largest finite distance (0 for empty or fully scattered spaces).
  Scale diameter() const { return diameter_; }

  friend bool operator==(const Space& a, const Space& b) {
    return a.points_ == b.points_ && a.dist_ == b.dist_;
  }

 private:
  std::vector<PointId> points_;
  std::vector<Scale> dist_;  // flattened size() x size()
  std::map<PointId, std::size_t> index_;
  Scale diameter_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// True when the two refs denote the same space (pointer or structural).
bool same_space(const SpacePtr& a, const SpacePtr& b);

/// Relation from X to Y: a subset of Y x X, stored as sorted unique
/// (y, x) pairs of point ids.
class Relation {
 public:
  Relation(SpacePtr source, SpacePtr target,
           std::vector<std::pair<PointId, PointId>> pairs);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const std::vector<std::pair<PointId, PointId>>& pairs() const {
    return pairs_;
  }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool endogenous() const { return same_space(source_, target_); }

  bool contains(PointId y, PointId x) const;

  /// Point ids appearing as the source (second) coordinate.
  std::vector<PointId> project_source() const;
  /// Point ids appearing as the target (first) coordinate.
  std::vector<PointId> project_target() const;

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.pairs_ == b.pairs_ && same_space(a.source_, b.source_) &&
           same_space(a.target_, b.target_);
  }

 private:
  SpacePtr source_, target_;
  std::vector<std::pair<PointId, PointId>> pairs_;
};

/// Total map between spaces, stored by source point position.
class PointMap {
 public:
  PointMap(SpacePtr source, SpacePtr target, std::vector<PointId> image);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const std::vector<PointId>& image() const { return image_; }

  PointId apply(PointId x) const { return image_[source_->index_of(x)]; }

  /// Graph as a relation {(f(x), x)}.
  Relation graph() const;

  static PointMap identity(const SpacePtr& s);

 private:
  SpacePtr source_, target_;
  std::vector<PointId> image_;
};

/// Quantitative classification of a relation: every asymptotic notion
/// of the dictionary (controlled / densely defined / coarsely
/// surjective / embedding) is reported as a witness scale, finite iff
/// the property holds at this truncation.
struct RelationReport {
  Profile expansion;      // n -> scale(R o E_n o R^T)
  Profile co_expansion;   // n -> scale(R^T o F_n o R)
  Scale densely_defined_scale = Scale::inf();
  Scale coarsely_surjective_scale = Scale::inf();

  bool controlled() const { return expansion.all_finite(); }
  bool transpose_controlled() const { return co_expansion.all_finite(); }
  bool densely_defined() const { return densely_defined_scale.is_finite(); }
  bool coarsely_surjective() const {
    return coarsely_surjective_scale.is_finite();
  }
  bool partial_coarse_embedding() const {
    return controlled() && transpose_controlled();
  }
  bool coarse_equivalence() const {
    return partial_coarse_embedding() && densely_defined() &&
           coarsely_surjective();
  }
};

// ---- relation calculus ----

/// E_n of the metric filtration, as a relation on the space.
Relation entourage(const SpacePtr& s, Scale n);

/// Diagonal relation on a space.
Relation diagonal(const SpacePtr& s);

/// s o r = {(z,x) | exists y : (z,y) in s, (y,x) in r}.
Relation rel_compose(const Relation& s, const Relation& r);

Relation rel_transpose(const Relation& r);

Relation rel_union(const Relation& a, const Relation& b);

/// True when every pair of `a` is a pair of `b` (same spaces required).
bool rel_subset(const Relation& a, const Relation& b);

/// E-neighbourhood {x | exists a in A : (x,a) in E} for an endogenous E.
std::vector<PointId> neighborhood(const Relation& e,
                                  const std::vector<PointId>& a);

/// Scale of an endogenous relation: max d(x,y) over its pairs, 0 if empty.
/// E is contained in E_n exactly when this value is <= n.
Scale entourage_scale(const Relation& e);

/// Witness scales (A into B, B into A); first = min n with A inside
/// E_n[B].  Conventions: empty A is subordinate at scale 0; nonempty A
/// against empty B gives inf.  A and B asymptotically equivalent iff
/// both components are finite.
std::pair<Scale, Scale> subordination(const std::vector<PointId>& a,
                                      const std::vector<PointId>& b,
                                      const Space& x);

/// One-sided witness: min n with A inside E_n[B].
Scale subordination_into(const std::vector<PointId>& a,
                         const std::vector<PointId>& b, const Space& x);

/// Coarsely connected components; per point position, the label is the
/// smallest point id in its class.
std::vector<PointId> component_labels(const Space& x);

/// Expansion profile rho(n) = max d(f(x), f(y)) over finite d(x,y) <= n,
/// for n = 0..diam(X).
Profile map_expansion(const PointMap& f);

/// max_x d(f(x), g(x)); finite iff the maps are close.
Scale closeness(const PointMap& f, const PointMap& g);

RelationReport classify_relation(const Relation& r);

/// One-sided subordination witness between relations, measured in the
/// product space Y x X with the max-metric.
Scale relation_subordination(const Relation& r1, const Relation& r2);

/// max of both relation subordination directions.
Scale relation_asymptotic_witness(const Relation& r1, const Relation& r2);

/// Finite witness for R1 asymptotic to R2, given that R1 is subordinate
/// to R2, the source projection of R2 is subordinate to that of R1, and
/// both relations are controlled.  Throws std::invalid_argument naming
/// the failing side when a precondition does not hold.
Scale asymptotic_from_inclusion(const Relation& r1, const Relation& r2);

}  // namespace coarselab

#endif  // COARSELAB_SPACE_HPP

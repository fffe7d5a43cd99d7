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

#ifndef COARSELAB_MODULES_HPP
#define COARSELAB_MODULES_HPP

#include <memory>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

/// A space together with a partition into nonempty blocks of finite
/// diameter.  Measurable sets are exactly unions of blocks; the
/// discreteness gauge is the block-diagonal relation, and its scale is
/// the largest block diameter.
class LFCMSpace {
 public:
  LFCMSpace(SpacePtr base, std::vector<std::vector<PointId>> blocks);

  const SpacePtr& base() const { return base_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<PointId>>& blocks() const { return blocks_; }
  const std::vector<PointId>& block_points(std::size_t b) const {
    return blocks_[b];
  }
  int block_of_point(PointId p) const {
    return block_of_[base_->index_of(p)];
  }

  Scale disc_gauge_scale() const { return disc_gauge_; }

  /// max_{p in A_i, q in A_j} d(p, q): the smallest n with the whole
  /// rectangle A_i x A_j inside E_n.  Diagonal entries are block
  /// diameters.
  Scale block_max_dist(std::size_t i, std::size_t j) const {
    return max_dist_[i * blocks_.size() + j];
  }
  /// min_{p in A_i, q in A_j} d(p, q); 0 on the diagonal.
  Scale block_min_dist(std::size_t i, std::size_t j) const {
    return min_dist_[i * blocks_.size() + j];
  }

  friend bool operator==(const LFCMSpace& a, const LFCMSpace& b) {
    return *a.base_ == *b.base_ && a.blocks_ == b.blocks_;
  }

 private:
  SpacePtr base_;
  std::vector<std::vector<PointId>> blocks_;
  std::vector<int> block_of_;  // by point index
  Scale disc_gauge_;
  std::vector<Scale> max_dist_, min_dist_;  // block_count^2 tables
};

using LFCMPtr = std::shared_ptr<const LFCMSpace>;

bool same_lfcm(const LFCMPtr& a, const LFCMPtr& b);

/// Space with singleton blocks (the locally finite power-set structure).
LFCMPtr lfcm_singletons(const SpacePtr& base);

LFCMPtr make_lfcm(const SpacePtr& base,
                  std::vector<std::vector<PointId>> blocks);

/// The discreteness gauge as a relation: the union of A_i x A_i.
Relation disc_gauge_relation(const LFCMPtr& s);

/// Per-block nonnegative dimensions.
using DimensionVector = std::vector<int>;

/// Finite-dimensional coarse module: each coordinate of the underlying
/// space C^dim is labelled by a block; 1_A is the coordinate projection
/// onto the coordinates whose block lies in A.
class Module {
 public:
  Module(LFCMPtr space, std::vector<int> block_of);

  const LFCMPtr& space() const { return space_; }
  std::size_t dim() const { return block_of_.size(); }
  int block_of(std::size_t coord) const { return block_of_[coord]; }
  const std::vector<int>& block_labels() const { return block_of_; }

  const std::vector<int>& coords_of_block(std::size_t b) const {
    return coords_by_block_[b];
  }
  const std::vector<std::vector<int>>& coords_by_block() const {
    return coords_by_block_;
  }
  int rank_of_block(std::size_t b) const {
    return static_cast<int>(coords_by_block_[b].size());
  }
  DimensionVector dims() const;

  friend bool operator==(const Module& a, const Module& b) {
    return a.block_of_ == b.block_of_ && same_lfcm(a.space_, b.space_);
  }
  friend bool operator!=(const Module& a, const Module& b) { return !(a == b); }

 private:
  LFCMPtr space_;
  std::vector<int> block_of_;
  std::vector<std::vector<int>> coords_by_block_;
};

/// Module with contiguous coordinate layout in block-id order and
/// rank(1_{A_i}) = dims[i].
Module make_module(const LFCMPtr& space, const DimensionVector& dims);

/// All block dimensions 1; always faithful.
Module uniform_module(const LFCMPtr& space);

/// Dimension d at one block, zero elsewhere.
Module bounded_module(const LFCMPtr& space, std::size_t block, int d);

struct DomainResult {
  std::vector<int> blocks;            // blocks with rank >= kappa, ascending
  std::vector<PointId> points_cache;  // union of those blocks, sorted
  Scale faithful_scale;               // witness for X subordinate to the domain

  const std::vector<PointId>& points() const { return points_cache; }
  bool asymptotic_to_space() const { return faithful_scale.is_finite(); }
};

/// kappa-domain: blocks whose projection has rank at least kappa.
DomainResult domain(const Module& c, int kappa);

bool is_faithful(const Module& c);
bool is_ample(const Module& c, int kappa_ample = 2);

/// Pushforward of a module along a measurable point map into the given
/// target LFCM space.  Coordinates stay in place; only block labels are
/// recomputed, so the identity matrix is the canonical controlled
/// unitary C -> f_*C.  Throws if f splits a source block across target
/// blocks.
Module pushforward(const PointMap& f, const Module& c, const LFCMPtr& target);

struct Discretization {
  SpacePtr block_space;  // one point per block, ids = block indices
  PointMap projection;   // collapses each block to its point
  PointMap section;      // block -> representative point
};

/// Collapses each block to a point.  Block distances are min point
/// distances, closed under shortest paths so the result is again an
/// extended metric; the projection/section pair is a coarse equivalence
/// with round-trip closeness at most the discreteness gauge scale.
Discretization discretize(const LFCMPtr& s);

}  // namespace coarselab

#endif  // COARSELAB_MODULES_HPP

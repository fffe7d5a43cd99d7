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

#include "coarselab/modules.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace coarselab {

LFCMSpace::LFCMSpace(SpacePtr base, std::vector<std::vector<PointId>> blocks)
    : base_(std::move(base)), blocks_(std::move(blocks)) {
  if (!base_) throw std::invalid_argument("lfcm: null base space");
  block_of_.assign(base_->size(), -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty())
      throw std::invalid_argument("lfcm: empty block " + std::to_string(b));
    for (PointId p : blocks_[b]) {
      const std::size_t i = base_->index_of(p);
      if (block_of_[i] != -1)
        throw std::invalid_argument("lfcm: point " + std::to_string(p) +
                                    " appears in two blocks");
      block_of_[i] = static_cast<int>(b);
    }
  }
  for (std::size_t i = 0; i < base_->size(); ++i)
    if (block_of_[i] == -1)
      throw std::invalid_argument("lfcm: point " +
                                  std::to_string(base_->point(i)) +
                                  " not covered by any block");
  const std::size_t nb = blocks_.size();
  max_dist_.assign(nb * nb, Scale(0));
  min_dist_.assign(nb * nb, Scale(0));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Scale mx(0);
      Scale mn = Scale::inf();
      for (PointId p : blocks_[i])
        for (PointId q : blocks_[j]) {
          const Scale d = base_->dist_by_id(p, q);
          mx = max(mx, d);
          mn = min(mn, d);
        }
      max_dist_[i * nb + j] = mx;
      min_dist_[i * nb + j] = mn;
    }
  disc_gauge_ = Scale(0);
  for (std::size_t b = 0; b < nb; ++b) {
    const Scale diam = max_dist_[b * nb + b];
    if (diam.is_inf())
      throw std::invalid_argument("lfcm: block " + std::to_string(b) +
                                  " has infinite diameter");
    disc_gauge_ = max(disc_gauge_, diam);
  }
}

bool same_lfcm(const LFCMPtr& a, const LFCMPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

LFCMPtr lfcm_singletons(const SpacePtr& base) {
  std::vector<std::vector<PointId>> blocks;
  blocks.reserve(base->size());
  for (PointId p : base->points()) blocks.push_back({p});
  return std::make_shared<const LFCMSpace>(base, std::move(blocks));
}

LFCMPtr make_lfcm(const SpacePtr& base,
                  std::vector<std::vector<PointId>> blocks) {
  return std::make_shared<const LFCMSpace>(base, std::move(blocks));
}

Relation disc_gauge_relation(const LFCMPtr& s) {
  std::vector<std::pair<PointId, PointId>> pairs;
  for (const auto& block : s->blocks())
    for (PointId p : block)
      for (PointId q : block) pairs.emplace_back(p, q);
  return Relation(s->base(), s->base(), std::move(pairs));
}

Module::Module(LFCMPtr space, std::vector<int> block_of)
    : space_(std::move(space)), block_of_(std::move(block_of)) {
  if (!space_) throw std::invalid_argument("module: null space");
  coords_by_block_.assign(space_->block_count(), {});
  for (std::size_t k = 0; k < block_of_.size(); ++k) {
    const int b = block_of_[k];
    if (b < 0 || static_cast<std::size_t>(b) >= space_->block_count())
      throw std::invalid_argument("module: coordinate " + std::to_string(k) +
                                  " labelled with unknown block");
    coords_by_block_[static_cast<std::size_t>(b)].push_back(
        static_cast<int>(k));
  }
}

DimensionVector Module::dims() const {
  DimensionVector d(space_->block_count(), 0);
  for (std::size_t b = 0; b < space_->block_count(); ++b)
    d[b] = rank_of_block(b);
  return d;
}

Module make_module(const LFCMPtr& space, const DimensionVector& dims) {
  if (dims.size() != space->block_count())
    throw std::invalid_argument("make_module: one dimension per block required");
  std::vector<int> block_of;
  for (std::size_t b = 0; b < dims.size(); ++b) {
    if (dims[b] < 0)
      throw std::invalid_argument("make_module: negative dimension at block " +
                                  std::to_string(b));
    for (int k = 0; k < dims[b]; ++k) block_of.push_back(static_cast<int>(b));
  }
  return Module(space, std::move(block_of));
}

Module uniform_module(const LFCMPtr& space) {
  return make_module(space, DimensionVector(space->block_count(), 1));
}

Module bounded_module(const LFCMPtr& space, std::size_t block, int d) {
  if (block >= space->block_count())
    throw std::invalid_argument("bounded_module: unknown block " +
                                std::to_string(block));
  if (d < 1) throw std::invalid_argument("bounded_module: dimension must be >= 1");
  DimensionVector dims(space->block_count(), 0);
  dims[block] = d;
  return make_module(space, dims);
}

DomainResult domain(const Module& c, int kappa) {
  if (kappa < 1) throw std::invalid_argument("domain: kappa must be >= 1");
  DomainResult res;
  for (std::size_t b = 0; b < c.space()->block_count(); ++b)
    if (c.rank_of_block(b) >= kappa) res.blocks.push_back(static_cast<int>(b));
  for (int b : res.blocks)
    for (PointId p : c.space()->block_points(static_cast<std::size_t>(b)))
      res.points_cache.push_back(p);
  std::sort(res.points_cache.begin(), res.points_cache.end());
  res.faithful_scale = subordination_into(c.space()->base()->points(),
                                          res.points_cache, *c.space()->base());
  return res;
}

bool is_faithful(const Module& c) { return domain(c, 1).asymptotic_to_space(); }

bool is_ample(const Module& c, int kappa_ample) {
  return domain(c, kappa_ample).asymptotic_to_space();
}

Module pushforward(const PointMap& f, const Module& c, const LFCMPtr& target) {
  if (!same_space(f.source(), c.space()->base()))
    throw std::invalid_argument("pushforward: map domain differs from module space");
  if (!same_space(f.target(), target->base()))
    throw std::invalid_argument("pushforward: map codomain differs from target space");
  // Measurability: each source block must land inside one target block.
  std::vector<int> image_block(c.space()->block_count(), -1);
  for (std::size_t b = 0; b < c.space()->block_count(); ++b) {
    for (PointId p : c.space()->block_points(b)) {
      const int tb = target->block_of_point(f.apply(p));
      if (image_block[b] == -1) {
        image_block[b] = tb;
      } else if (image_block[b] != tb) {
        throw std::invalid_argument(
            "pushforward: map splits source block " + std::to_string(b) +
            " across target blocks (not measurable)");
      }
    }
  }
  std::vector<int> block_of(c.dim());
  for (std::size_t k = 0; k < c.dim(); ++k)
    block_of[k] = image_block[static_cast<std::size_t>(c.block_of(k))];
  return Module(target, std::move(block_of));
}

Discretization discretize(const LFCMPtr& s) {
  const std::size_t nb = s->block_count();
  // Min block distances, closed under shortest paths so the triangle
  // inequality holds for blocks of positive diameter.
  std::vector<Scale> d(nb * nb, Scale(0));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      d[i * nb + j] = (i == j) ? Scale(0) : s->block_min_dist(i, j);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        d[i * nb + j] = min(d[i * nb + j], d[i * nb + k] + d[k * nb + j]);

  std::vector<PointId> ids(nb);
  std::vector<std::vector<Scale>> rows(nb, std::vector<Scale>(nb));
  for (std::size_t i = 0; i < nb; ++i) {
    ids[i] = static_cast<PointId>(i);
    for (std::size_t j = 0; j < nb; ++j) rows[i][j] = d[i * nb + j];
  }
  auto block_space = std::make_shared<const Space>(ids, rows);

  std::vector<PointId> proj(s->base()->size());
  for (std::size_t i = 0; i < s->base()->size(); ++i)
    proj[i] = static_cast<PointId>(s->block_of_point(s->base()->point(i)));
  std::vector<PointId> sect(nb);
  for (std::size_t b = 0; b < nb; ++b)
    sect[b] = *std::min_element(s->block_points(b).begin(),
                                s->block_points(b).end());
  return Discretization{block_space,
                        PointMap(s->base(), block_space, std::move(proj)),
                        PointMap(block_space, s->base(), std::move(sect))};
}

}  // namespace coarselab

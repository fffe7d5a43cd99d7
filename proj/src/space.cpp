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

#include "coarselab/space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace coarselab {

Space::Space(std::vector<PointId> points, std::vector<std::vector<Scale>> dist)
    : points_(std::move(points)) {
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw std::invalid_argument("space: duplicate point id " +
                                  std::to_string(points_[i]));
  }
  if (dist.size() != n)
    throw std::invalid_argument("space: dist matrix has wrong row count");
  dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n)
      throw std::invalid_argument("space: dist matrix has wrong column count");
    for (std::size_t j = 0; j < n; ++j) dist_[i * n + j] = dist[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i * n + i] != Scale(0))
      throw std::invalid_argument("space: d(x,x) must be 0");
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist_[i * n + j] != dist_[j * n + i])
        throw std::invalid_argument("space: dist matrix not symmetric");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Scale dik = dist_[i * n + k];
      if (dik.is_finite() && dik.value() == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (dik > dist_[i * n + j] + dist_[j * n + k])
          throw std::invalid_argument(
              "space: triangle inequality violated at points " +
              std::to_string(points_[i]) + "," + std::to_string(points_[j]) +
              "," + std::to_string(points_[k]));
    }
  diameter_ = Scale(0);
  for (const Scale s : dist_)
    if (s.is_finite()) diameter_ = max(diameter_, s);
}

std::size_t Space::index_of(PointId p) const {
  auto it = index_.find(p);
  if (it == index_.end())
    throw std::invalid_argument("space: unknown point id " + std::to_string(p));
  return it->second;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Relation::Relation(SpacePtr source, SpacePtr target,
                   std::vector<std::pair<PointId, PointId>> pairs)
    : source_(std::move(source)), target_(std::move(target)),
      pairs_(std::move(pairs)) {
  if (!source_ || !target_) throw std::invalid_argument("relation: null space");
  for (const auto& [y, x] : pairs_) {
    (void)target_->index_of(y);
    (void)source_->index_of(x);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool Relation::contains(PointId y, PointId x) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), std::pair{y, x});
}

std::vector<PointId> Relation::project_source() const {
  std::set<PointId> s;
  for (const auto& [y, x] : pairs_) s.insert(x);
  return {s.begin(), s.end()};
}

std::vector<PointId> Relation::project_target() const {
  std::set<PointId> s;
  for (const auto& [y, x] : pairs_) s.insert(y);
  return {s.begin(), s.end()};
}

PointMap::PointMap(SpacePtr source, SpacePtr target, std::vector<PointId> image)
    : source_(std::move(source)), target_(std::move(target)),
      image_(std::move(image)) {
  if (!source_ || !target_) throw std::invalid_argument("map: null space");
  if (image_.size() != source_->size())
    throw std::invalid_argument("map: image size differs from domain size");
  for (PointId y : image_) (void)target_->index_of(y);
}

Relation PointMap::graph() const {
  std::vector<std::pair<PointId, PointId>> pairs;
  pairs.reserve(source_->size());
  for (std::size_t i = 0; i < source_->size(); ++i)
    pairs.emplace_back(image_[i], source_->point(i));
  return Relation(source_, target_, std::move(pairs));
}

PointMap PointMap::identity(const SpacePtr& s) {
  return PointMap(s, s, s->points());
}

Relation entourage(const SpacePtr& s, Scale n) {
  std::vector<std::pair<PointId, PointId>> pairs;
  for (std::size_t i = 0; i < s->size(); ++i)
    for (std::size_t j = 0; j < s->size(); ++j)
      if (s->dist(i, j) <= n) pairs.emplace_back(s->point(i), s->point(j));
  return Relation(s, s, std::move(pairs));
}

Relation diagonal(const SpacePtr& s) {
  std::vector<std::pair<PointId, PointId>> pairs;
  for (PointId p : s->points()) pairs.emplace_back(p, p);
  return Relation(s, s, std::move(pairs));
}

namespace {

// Column-indexed bitsets: for each source index x, the set of target
// indices y with (y, x) in the relation.
struct ColSets {
  std::size_t n_target = 0, n_source = 0, words = 0;
  std::vector<std::uint64_t> bits;

  ColSets(std::size_t nt, std::size_t ns)
      : n_target(nt), n_source(ns), words((nt + 63) / 64),
        bits(words * ns, 0) {}

  std::uint64_t* col(std::size_t x) { return bits.data() + x * words; }
  const std::uint64_t* col(std::size_t x) const {
    return bits.data() + x * words;
  }
  void set(std::size_t y, std::size_t x) {
    col(x)[y >> 6] |= (1ULL << (y & 63));
  }
  void or_into(std::size_t x, const std::uint64_t* other) {
    std::uint64_t* c = col(x);
    for (std::size_t w = 0; w < words; ++w) c[w] |= other[w];
  }
};

ColSets to_colsets(const Relation& r) {
  ColSets cs(r.target()->size(), r.source()->size());
  for (const auto& [y, x] : r.pairs())
    cs.set(r.target()->index_of(y), r.source()->index_of(x));
  return cs;
}

Relation from_colsets(const ColSets& cs, const SpacePtr& source,
                      const SpacePtr& target) {
  std::vector<std::pair<PointId, PointId>> pairs;
  for (std::size_t x = 0; x < cs.n_source; ++x) {
    const std::uint64_t* c = cs.col(x);
    for (std::size_t w = 0; w < cs.words; ++w) {
      std::uint64_t bitsw = c[w];
      while (bitsw) {
        const int b = __builtin_ctzll(bitsw);
        bitsw &= bitsw - 1;
        pairs.emplace_back(target->point(w * 64 + b), source->point(x));
      }
    }
  }
  return Relation(source, target, std::move(pairs));
}

ColSets compose_colsets(const ColSets& s, const ColSets& r) {
  // s: Z x Y, r: Y x X  ->  out: Z x X
  ColSets out(s.n_target, r.n_source);
  for (std::size_t x = 0; x < r.n_source; ++x) {
    const std::uint64_t* rc = r.col(x);
    for (std::size_t w = 0; w < r.words; ++w) {
      std::uint64_t bitsw = rc[w];
      while (bitsw) {
        const int b = __builtin_ctzll(bitsw);
        bitsw &= bitsw - 1;
        out.or_into(x, s.col(w * 64 + b));
      }
    }
  }
  return out;
}

Scale colsets_scale(const ColSets& cs, const Space& sp) {
  // Valid for endogenous results only.
  Scale m(0);
  for (std::size_t x = 0; x < cs.n_source; ++x) {
    const std::uint64_t* c = cs.col(x);
    for (std::size_t w = 0; w < cs.words; ++w) {
      std::uint64_t bitsw = c[w];
      while (bitsw) {
        const int b = __builtin_ctzll(bitsw);
        bitsw &= bitsw - 1;
        m = max(m, sp.dist(w * 64 + b, x));
      }
    }
  }
  return m;
}

// Profile n -> scale(R o E_n o R^T) computed over n = 0..diam(source).
Profile expansion_profile(const Relation& r) {
  const SpacePtr& src = r.source();
  const SpacePtr& tgt = r.target();
  const std::size_t horizon =
      src->diameter().is_finite() ? src->diameter().value() : 0;
  std::vector<Scale> vals;
  vals.reserve(horizon + 1);
  const ColSets rc = to_colsets(r);
  ColSets rt(src->size(), tgt->size());
  for (const auto& [y, x] : r.pairs())
    rt.set(src->index_of(x), tgt->index_of(y));
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    ColSets en(src->size(), src->size());
    for (std::size_t i = 0; i < src->size(); ++i)
      for (std::size_t j = 0; j < src->size(); ++j)
        if (src->dist(i, j) <= Scale(n)) en.set(i, j);
    const ColSets ren = compose_colsets(rc, en);
    const ColSets full = compose_colsets(ren, rt);
    vals.push_back(colsets_scale(full, *tgt));
  }
  return Profile(std::move(vals));
}

}  // namespace

Relation rel_compose(const Relation& s, const Relation& r) {
  if (!same_space(r.target(), s.source()))
    throw std::invalid_argument(
        "rel_compose: target of inner relation differs from source of outer");
  const ColSets out = compose_colsets(to_colsets(s), to_colsets(r));
  return from_colsets(out, r.source(), s.target());
}

Relation rel_transpose(const Relation& r) {
  std::vector<std::pair<PointId, PointId>> pairs;
  pairs.reserve(r.size());
  for (const auto& [y, x] : r.pairs()) pairs.emplace_back(x, y);
  return Relation(r.target(), r.source(), std::move(pairs));
}

Relation rel_union(const Relation& a, const Relation& b) {
  if (!same_space(a.source(), b.source()) || !same_space(a.target(), b.target()))
    throw std::invalid_argument("rel_union: space mismatch");
  std::vector<std::pair<PointId, PointId>> pairs = a.pairs();
  pairs.insert(pairs.end(), b.pairs().begin(), b.pairs().end());
  return Relation(a.source(), a.target(), std::move(pairs));
}

bool rel_subset(const Relation& a, const Relation& b) {
  if (!same_space(a.source(), b.source()) || !same_space(a.target(), b.target()))
    throw std::invalid_argument("rel_subset: space mismatch");
  return std::includes(b.pairs().begin(), b.pairs().end(), a.pairs().begin(),
                       a.pairs().end());
}

std::vector<PointId> neighborhood(const Relation& e,
                                  const std::vector<PointId>& a) {
  if (!e.endogenous())
    throw std::invalid_argument("neighborhood: relation is not endogenous");
  std::set<PointId> in(a.begin(), a.end());
  for (PointId p : a) (void)e.source()->index_of(p);
  std::set<PointId> out;
  for (const auto& [y, x] : e.pairs())
    if (in.count(x)) out.insert(y);
  return {out.begin(), out.end()};
}

Scale entourage_scale(const Relation& e) {
  if (!e.endogenous())
    throw std::invalid_argument("entourage_scale: relation is not endogenous");
  Scale m(0);
  for (const auto& [y, x] : e.pairs())
    m = max(m, e.source()->dist_by_id(y, x));
  return m;
}

Scale subordination_into(const std::vector<PointId>& a,
                         const std::vector<PointId>& b, const Space& x) {
  if (a.empty()) return Scale(0);
  if (b.empty()) return Scale::inf();
  Scale worst(0);
  for (PointId pa : a) {
    const std::size_t ia = x.index_of(pa);
    Scale best = Scale::inf();
    for (PointId pb : b) best = min(best, x.dist(ia, x.index_of(pb)));
    worst = max(worst, best);
  }
  return worst;
}

std::pair<Scale, Scale> subordination(const std::vector<PointId>& a,
                                      const std::vector<PointId>& b,
                                      const Space& x) {
  return {subordination_into(a, b, x), subordination_into(b, a, x)};
}

std::vector<PointId> component_labels(const Space& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (x.dist(i, j).is_finite()) parent[find(i)] = find(j);
  std::vector<PointId> label(n);
  std::vector<PointId> rep(n, std::numeric_limits<PointId>::max());
  for (std::size_t i = 0; i < n; ++i)
    rep[find(i)] = std::min(rep[find(i)], x.point(i));
  for (std::size_t i = 0; i < n; ++i) label[i] = rep[find(i)];
  return label;
}

Profile map_expansion(const PointMap& f) {
  const Space& x = *f.source();
  const Space& y = *f.target();
  const std::size_t horizon =
      x.diameter().is_finite() ? x.diameter().value() : 0;
  std::vector<Scale> vals(horizon + 1, Scale(0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Scale d = x.dist(i, j);
      if (d.is_inf()) continue;
      const Scale dy = y.dist(y.index_of(f.image()[i]), y.index_of(f.image()[j]));
      vals[d.value()] = max(vals[d.value()], dy);
    }
  for (std::size_t n = 1; n <= horizon; ++n) vals[n] = max(vals[n], vals[n - 1]);
  return Profile(std::move(vals));
}

Scale closeness(const PointMap& f, const PointMap& g) {
  if (!same_space(f.source(), g.source()) || !same_space(f.target(), g.target()))
    throw std::invalid_argument("closeness: maps between different spaces");
  const Space& y = *f.target();
  Scale m(0);
  for (std::size_t i = 0; i < f.source()->size(); ++i)
    m = max(m, y.dist(y.index_of(f.image()[i]), y.index_of(g.image()[i])));
  return m;
}

RelationReport classify_relation(const Relation& r) {
  RelationReport report;
  report.expansion = expansion_profile(r);
  report.co_expansion = expansion_profile(rel_transpose(r));
  report.densely_defined_scale =
      subordination_into(r.source()->points(), r.project_source(), *r.source());
  report.coarsely_surjective_scale =
      subordination_into(r.target()->points(), r.project_target(), *r.target());
  return report;
}

Scale relation_subordination(const Relation& r1, const Relation& r2) {
  if (!same_space(r1.source(), r2.source()) ||
      !same_space(r1.target(), r2.target()))
    throw std::invalid_argument("relation_subordination: space mismatch");
  if (r1.empty()) return Scale(0);
  if (r2.empty()) return Scale::inf();
  const Space& x = *r1.source();
  const Space& y = *r1.target();
  Scale worst(0);
  for (const auto& [y1, x1] : r1.pairs()) {
    const std::size_t iy1 = y.index_of(y1), ix1 = x.index_of(x1);
    Scale best = Scale::inf();
    for (const auto& [y2, x2] : r2.pairs()) {
      const Scale d = max(y.dist(iy1, y.index_of(y2)), x.dist(ix1, x.index_of(x2)));
      best = min(best, d);
      if (best == Scale(0)) break;
    }
    worst = max(worst, best);
  }
  return worst;
}

Scale relation_asymptotic_witness(const Relation& r1, const Relation& r2) {
  return max(relation_subordination(r1, r2), relation_subordination(r2, r1));
}

Scale asymptotic_from_inclusion(const Relation& r1, const Relation& r2) {
  const Scale a = relation_subordination(r1, r2);
  if (a.is_inf())
    throw std::invalid_argument(
        "asymptotic_from_inclusion: R1 is not subordinate to R2");
  const Scale b = subordination_into(r2.project_source(), r1.project_source(),
                                     *r1.source());
  if (b.is_inf())
    throw std::invalid_argument(
        "asymptotic_from_inclusion: source projection of R2 is not "
        "subordinate to that of R1");
  if (!classify_relation(r1).controlled())
    throw std::invalid_argument("asymptotic_from_inclusion: R1 not controlled");
  if (!classify_relation(r2).controlled())
    throw std::invalid_argument("asymptotic_from_inclusion: R2 not controlled");
  const Scale witness = max(a, relation_subordination(r2, r1));
  if (witness.is_inf())
    throw std::logic_error(
        "asymptotic_from_inclusion: witness unexpectedly infinite");
  return witness;
}

}  // namespace coarselab

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

#include <set>

#include <doctest.h>

#include "coarselab/laws.hpp"
#include "helpers.hpp"

using namespace coarselab;
using namespace coarselab::testing;

TEST_CASE("scale arithmetic absorbs infinity") {
  CHECK(Scale(2) + Scale(3) == Scale(5));
  CHECK((Scale(2) + Scale::inf()).is_inf());
  CHECK(max(Scale(4), Scale::inf()) == Scale::inf());
  CHECK(min(Scale(4), Scale::inf()) == Scale(4));
  CHECK(Scale(7) < Scale::inf());
  CHECK(Scale::inf() == Scale::inf());
}

TEST_CASE("space construction validates the metric") {
  CHECK_THROWS_AS(Space({0, 1}, {{Scale(0), Scale(1)}, {Scale(2), Scale(0)}}),
                  std::invalid_argument);  // asymmetric
  CHECK_THROWS_AS(Space({0, 1}, {{Scale(1), Scale(1)}, {Scale(1), Scale(0)}}),
                  std::invalid_argument);  // nonzero diagonal
  // Triangle violation: d(0,2)=5 > 1+1.
  CHECK_THROWS_AS(Space({0, 1, 2}, {{Scale(0), Scale(1), Scale(5)},
                                    {Scale(1), Scale(0), Scale(1)},
                                    {Scale(5), Scale(1), Scale(0)}}),
                  std::invalid_argument);
  CHECK(zline(6)->diameter() == Scale(5));
  CHECK(two_lines(3, 3)->diameter() == Scale(2));
}

TEST_CASE("relation composition") {
  const SpacePtr z6 = zline(6);
  CHECK(rel_compose(rel(z6, z6, {{3, 2}}), rel(z6, z6, {{2, 1}})) ==
        rel(z6, z6, {{3, 1}}));
  // Identity case.
  const Relation r = rel(z6, z6, {{0, 4}, {2, 2}, {5, 1}});
  CHECK(rel_compose(diagonal(z6), r) == r);
  // Shift composed with itself.
  std::vector<std::pair<PointId, PointId>> shift, shift2;
  for (PointId i = 0; i <= 4; ++i) shift.push_back({i + 1, i});
  for (PointId i = 0; i <= 3; ++i) shift2.push_back({i + 2, i});
  CHECK(rel_compose(rel(z6, z6, shift), rel(z6, z6, shift)) ==
        rel(z6, z6, shift2));
  CHECK_THROWS_AS(rel_compose(rel(zline(3), zline(3), {}), r),
                  std::invalid_argument);
}

TEST_CASE("relation transpose") {
  const SpacePtr z6 = zline(6);
  CHECK(rel_transpose(rel(z6, z6, {{3, 1}})) == rel(z6, z6, {{1, 3}}));
  CHECK(rel_transpose(diagonal(z6)) == diagonal(z6));
  Rng rng(99);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::pair<PointId, PointId>> pairs;
    for (int i = 0; i < 8; ++i)
      pairs.push_back({rng.uniform_int(0, 5), rng.uniform_int(0, 5)});
    const Relation r = rel(z6, z6, pairs);
    CHECK(rel_transpose(rel_transpose(r)) == r);
  }
}

TEST_CASE("neighborhood") {
  const SpacePtr z6 = zline(6);
  CHECK(neighborhood(entourage(z6, Scale(1)), {2}) ==
        std::vector<PointId>{1, 2, 3});
  CHECK(neighborhood(diagonal(z6), {0, 4}) == std::vector<PointId>{0, 4});
  CHECK(neighborhood(rel(z6, z6, {}), {0, 4}).empty());
  CHECK_THROWS_AS(neighborhood(diagonal(z6), {11}), std::invalid_argument);
}

TEST_CASE("entourage scale") {
  const SpacePtr z6 = zline(6);
  CHECK(entourage_scale(rel(z6, z6, {{0, 3}, {3, 0}})) == Scale(3));
  CHECK(entourage_scale(diagonal(z6)) == Scale(0));
  CHECK(entourage_scale(rel(z6, z6, {})) == Scale(0));
  const SpacePtr tc = two_lines(3, 3);
  CHECK(entourage_scale(rel(tc, tc, {{4, 0}})).is_inf());
}

TEST_CASE("subordination witnesses") {
  const SpacePtr z6 = zline(6);
  const auto [a, b] = subordination({0, 5}, {2}, *z6);
  CHECK(a == Scale(3));
  CHECK(b == Scale(2));
  CHECK(a == oracle_subordination({0, 5}, {2}, z6));
  CHECK(b == oracle_subordination({2}, {0, 5}, z6));
  CHECK(subordination({1, 3}, {1, 3}, *z6) == std::pair{Scale(0), Scale(0)});
  const SpacePtr tc = two_lines(3, 3);
  const auto [c, d] = subordination({0}, {4}, *tc);
  CHECK(c.is_inf());
  CHECK(d.is_inf());
  // Empty-set conventions.
  CHECK(subordination({}, {2}, *z6).first == Scale(0));
  CHECK(subordination({2}, {}, *z6).first.is_inf());
}

TEST_CASE("components") {
  CHECK(component_labels(*zline(6)) == std::vector<PointId>(6, 0));
  const std::vector<PointId> two = component_labels(*two_lines(3, 3));
  CHECK(two == std::vector<PointId>{0, 0, 0, 3, 3, 3});
  CHECK(component_labels(*zline(1)) == std::vector<PointId>{0});
}

TEST_CASE("map expansion profiles") {
  const SpacePtr z4 = zline(4), z8 = zline(8);
  const PointMap stretch(z4, z8, {0, 2, 4, 6});
  const Profile rho = map_expansion(stretch);
  for (std::uint64_t n = 0; n <= 3; ++n) CHECK(rho.at(n) == Scale(2 * n));
  const Profile id_rho = map_expansion(PointMap::identity(z8));
  for (std::uint64_t n = 0; n <= 7; ++n) CHECK(id_rho.at(n) == Scale(n));
  const PointMap constant(z4, z8, {3, 3, 3, 3});
  CHECK(map_expansion(constant).max_value() == Scale(0));
}

TEST_CASE("closeness of maps") {
  const SpacePtr z6 = zline(6);
  const PointMap id = PointMap::identity(z6);
  CHECK(closeness(id, id) == Scale(0));
  const PointMap clamp(z6, z6, {1, 2, 3, 4, 5, 5});
  CHECK(closeness(id, clamp) == Scale(1));
  const SpacePtr tc = two_lines(3, 3);
  const PointMap f(tc, tc, {0, 1, 2, 3, 4, 5});
  const PointMap g(tc, tc, {3, 1, 2, 3, 4, 5});
  CHECK(closeness(f, g).is_inf());
}

TEST_CASE("classify_relation reproduces the dictionary") {
  const SpacePtr z6 = zline(6);
  SUBCASE("graph of the reversal isometry is a coarse equivalence") {
    const PointMap r(z6, z6, {5, 4, 3, 2, 1, 0});
    const RelationReport rep = classify_relation(r.graph());
    for (std::uint64_t n = 0; n <= 5; ++n) {
      CHECK(rep.expansion.at(n) == Scale(n));
      CHECK(rep.co_expansion.at(n) == Scale(n));
    }
    CHECK(rep.densely_defined_scale == Scale(0));
    CHECK(rep.coarsely_surjective_scale == Scale(0));
    CHECK(rep.coarse_equivalence());
  }
  SUBCASE("inclusion of the even points is a partial embedding") {
    std::vector<PointId> evens = {0, 2, 4};
    std::vector<std::vector<Scale>> d(3, std::vector<Scale>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        d[i][j] = Scale(static_cast<std::uint64_t>(2 * std::abs(i - j)));
    const SpacePtr sub = std::make_shared<const Space>(evens, d);
    const Relation incl = rel(sub, z6, {{0, 0}, {2, 2}, {4, 4}});
    const RelationReport rep = classify_relation(incl);
    CHECK(rep.coarsely_surjective_scale == Scale(1));
    CHECK(rep.coarsely_surjective_scale ==
          oracle_subordination(z6->points(), {0, 2, 4}, z6));
    CHECK(rep.partial_coarse_embedding());
    CHECK(rep.densely_defined_scale == Scale(0));
  }
  SUBCASE("the full relation expands to the diameter") {
    std::vector<std::pair<PointId, PointId>> all;
    for (PointId y = 0; y < 6; ++y)
      for (PointId x = 0; x < 6; ++x) all.push_back({y, x});
    const RelationReport rep = classify_relation(rel(z6, z6, all));
    CHECK(rep.expansion.at(0) == Scale(5));
    CHECK(rep.coarse_equivalence());  // everything is bounded at this size
  }
}

TEST_CASE("classify_relation on a graph matches map_expansion pointwise") {
  Rng rng(2024);
  for (int k = 0; k < 25; ++k) {
    const SpacePtr s = laws::random_space(rng, 14);
    std::vector<PointId> img(s->size());
    for (auto& v : img)
      v = s->point(static_cast<std::size_t>(rng.uniform_int(0, s->size() - 1)));
    const PointMap f(s, s, img);
    const Profile rho = map_expansion(f);
    const RelationReport rep = classify_relation(f.graph());
    for (std::uint64_t n = 0; n < rho.size(); ++n)
      CHECK(rep.expansion.at(n) == rho.at(n));
  }
}

TEST_CASE("asymptotic_from_inclusion") {
  const SpacePtr z6 = zline(6);
  const PointMap r(z6, z6, {5, 4, 3, 2, 1, 0});
  const Relation r1 = r.graph();
  std::vector<std::pair<PointId, PointId>> extra = r1.pairs();
  for (PointId i = 0; i < 6; ++i)
    extra.push_back({std::min<PointId>(5 - i + 1, 5), i});
  const Relation r2 = rel(z6, z6, extra);
  const Scale witness = asymptotic_from_inclusion(r1, r2);
  CHECK(witness <= Scale(1));
  CHECK(witness == relation_asymptotic_witness(r1, r2));  // oracle route

  CHECK(asymptotic_from_inclusion(r1, r1) == Scale(0));

  const Relation point_diag = rel(z6, z6, {{0, 0}});
  CHECK(asymptotic_from_inclusion(point_diag, diagonal(z6)) == Scale(5));

  // Failing preconditions are reported with the failing side.
  const SpacePtr tc = two_lines(2, 2);
  const Relation small = rel(tc, tc, {{0, 0}});
  const Relation cross = rel(tc, tc, {{0, 0}, {2, 2}});
  CHECK_THROWS_WITH_AS(asymptotic_from_inclusion(cross, small),
                       doctest::Contains("not subordinate to R2"),
                       std::invalid_argument);
  // R2 with a cross-component pair is not controlled.
  const Relation uncontrolled = rel(tc, tc, {{0, 0}, {2, 0}});
  CHECK_THROWS_WITH_AS(asymptotic_from_inclusion(small, uncontrolled),
                       doctest::Contains("R2 not controlled"),
                       std::invalid_argument);
}

TEST_CASE("inclusion with matching projections yields a finite witness") {
  // Controlled R1 inside controlled R2 with subordinate source
  // projections: the witness must come back finite.
  Rng rng(909);
  for (int k = 0; k < 40; ++k) {
    const SpacePtr s = laws::random_space(rng, 12);
    // R2: a union of graphs of displacement-bounded maps (controlled).
    std::vector<std::pair<PointId, PointId>> pairs;
    for (std::size_t i = 0; i < s->size(); ++i) {
      std::vector<PointId> ball;
      for (std::size_t j = 0; j < s->size(); ++j)
        if (s->dist(i, j) <= Scale(2)) ball.push_back(s->point(j));
      const int picks = static_cast<int>(rng.uniform_int(1, 2));
      for (int c = 0; c < picks; ++c)
        pairs.push_back({ball[static_cast<std::size_t>(
                             rng.uniform_int(0, ball.size() - 1))],
                         s->point(i)});
    }
    const Relation r2 = rel(s, s, pairs);
    // R1: a sub-relation that still touches every source point.
    std::vector<std::pair<PointId, PointId>> sub;
    std::set<PointId> covered;
    for (const auto& pr : r2.pairs())
      if (rng.uniform() < 0.5) {
        sub.push_back(pr);
        covered.insert(pr.second);
      }
    for (const auto& pr : r2.pairs())
      if (!covered.count(pr.second)) {
        sub.push_back(pr);
        covered.insert(pr.second);
      }
    const Relation r1 = rel(s, s, sub);
    CHECK(asymptotic_from_inclusion(r1, r2).is_finite());
  }
}

TEST_CASE("relation calculus properties on random relations") {
  Rng rng(515);
  for (int k = 0; k < 60; ++k) {
    const SpacePtr s = laws::random_space(rng, 12);
    const auto rand_rel = [&](const SpacePtr& a, const SpacePtr& b) {
      std::vector<std::pair<PointId, PointId>> pairs;
      const int m = static_cast<int>(rng.uniform_int(0, 18));
      for (int i = 0; i < m; ++i)
        pairs.push_back(
            {b->point(static_cast<std::size_t>(rng.uniform_int(0, b->size() - 1))),
             a->point(static_cast<std::size_t>(rng.uniform_int(0, a->size() - 1)))});
      return rel(a, b, pairs);
    };
    const Relation r = rand_rel(s, s), t = rand_rel(s, s), u = rand_rel(s, s);
    // Associativity and the transpose anti-homomorphism, exactly.
    CHECK(rel_compose(rel_compose(u, t), r) == rel_compose(u, rel_compose(t, r)));
    CHECK(rel_transpose(rel_compose(t, r)) ==
          rel_compose(rel_transpose(r), rel_transpose(t)));
    // Scale subadditivity under composition.
    const Scale st = entourage_scale(t), sr = entourage_scale(r);
    CHECK(entourage_scale(rel_compose(t, r)) <= st + sr);
    // Subordination is a preorder at additive cost.
    std::vector<PointId> a, b, c;
    for (std::size_t i = 0; i < s->size(); ++i) {
      if (rng.uniform() < 0.4) a.push_back(s->point(i));
      if (rng.uniform() < 0.4) b.push_back(s->point(i));
      if (rng.uniform() < 0.4) c.push_back(s->point(i));
    }
    const Scale ab = subordination_into(a, b, *s);
    const Scale bc = subordination_into(b, c, *s);
    if (ab.is_finite() && bc.is_finite())
      CHECK(subordination_into(a, c, *s) <= ab + bc);
  }
}

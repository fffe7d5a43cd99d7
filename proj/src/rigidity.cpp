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

#include "coarselab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace coarselab {

std::string rel_mode_name(RelMode mode) {
  return mode == RelMode::Blocks ? "blocks" : "windows";
}

namespace {

void validate_params(const Operator& t, const ApproxParams& p) {
  if (!(p.delta > 0.0 && p.delta < 1.0))
    throw std::invalid_argument("approximate_relation: delta must be in (0,1)");
  if (p.f_scale < t.target.space()->disc_gauge_scale())
    throw std::invalid_argument(
        "approximate_relation: F scale below the target discreteness gauge");
  if (p.e_scale < t.source.space()->disc_gauge_scale())
    throw std::invalid_argument(
        "approximate_relation: E scale below the source discreteness gauge");
}

// Coordinate and point unions of all blocks within the given radius of
// each block (max block distance).
struct Windows {
  std::vector<std::vector<int>> coords;
  std::vector<std::vector<PointId>> points;
};

Windows windows_around_blocks(const Module& m, Scale radius) {
  const LFCMSpace& sp = *m.space();
  Windows w;
  w.coords.resize(sp.block_count());
  w.points.resize(sp.block_count());
  for (std::size_t b = 0; b < sp.block_count(); ++b) {
    for (std::size_t c = 0; c < sp.block_count(); ++c) {
      if (sp.block_max_dist(b, c) > radius) continue;
      const auto& ks = m.coords_of_block(c);
      w.coords[b].insert(w.coords[b].end(), ks.begin(), ks.end());
      const auto& ps = sp.block_points(c);
      w.points[b].insert(w.points[b].end(), ps.begin(), ps.end());
    }
    std::sort(w.coords[b].begin(), w.coords[b].end());
    std::sort(w.points[b].begin(), w.points[b].end());
  }
  return w;
}

}  // namespace

Relation approximate_relation(const Operator& t, const ApproxParams& p) {
  validate_params(t, p);
  const LFCMSpace& xs = *t.source.space();
  const LFCMSpace& ys = *t.target.space();
  std::set<std::pair<PointId, PointId>> pairs;

  if (p.mode == RelMode::Blocks) {
    const std::vector<double> norms = block_norms(t);
    for (std::size_t b = 0; b < ys.block_count(); ++b)
      for (std::size_t a = 0; a < xs.block_count(); ++a)
        if (norms[b * xs.block_count() + a] > p.delta)
          for (PointId y : ys.block_points(b))
            for (PointId x : xs.block_points(a)) pairs.emplace(y, x);
  } else {
    const Windows wy = windows_around_blocks(t.target, p.f_scale);
    const Windows wx = windows_around_blocks(t.source, p.e_scale);
    const std::vector<double> norms =
        kernels::block_norm_table(t.mat, wy.coords, wx.coords);
    for (std::size_t b = 0; b < ys.block_count(); ++b)
      for (std::size_t a = 0; a < xs.block_count(); ++a)
        if (norms[b * xs.block_count() + a] > p.delta)
          for (PointId y : wy.points[b])
            for (PointId x : wx.points[a]) pairs.emplace(y, x);
  }
  return Relation(xs.base(), ys.base(),
                  std::vector<std::pair<PointId, PointId>>(pairs.begin(),
                                                           pairs.end()));
}

ApproxParams parameter_join(const ApproxParams& p1, const ApproxParams& p2) {
  if (p1.mode != p2.mode)
    throw std::invalid_argument("parameter_join: mode mismatch");
  return ApproxParams{std::min(p1.delta, p2.delta), max(p1.f_scale, p2.f_scale),
                      max(p1.e_scale, p2.e_scale), p1.mode};
}

CentralUnitary make_central_unitary(const LFCMPtr& space,
                                    const std::map<PointId, double>& angles) {
  CentralUnitary u;
  u.space = space;
  const std::vector<PointId> labels = component_labels(*space->base());
  std::set<PointId> comps(labels.begin(), labels.end());
  for (PointId c : comps) {
    auto it = angles.find(c);
    if (it == angles.end())
      throw std::invalid_argument("central unitary: missing component " +
                                  std::to_string(c));
    u.phase_by_component[c] =
        Complex(std::cos(it->second), std::sin(it->second));
  }
  return u;
}

CentralUnitary identity_central_unitary(const LFCMPtr& space) {
  std::map<PointId, double> angles;
  for (PointId c : component_labels(*space->base())) angles[c] = 0.0;
  return make_central_unitary(space, angles);
}

Operator central_unitary_operator(const CentralUnitary& u, const Module& c) {
  if (!same_lfcm(u.space, c.space()))
    throw std::invalid_argument("central unitary: module over a different space");
  const std::vector<PointId> labels = component_labels(*c.space()->base());
  Matrix m(c.dim(), c.dim());
  for (std::size_t k = 0; k < c.dim(); ++k) {
    const auto& pts =
        c.space()->block_points(static_cast<std::size_t>(c.block_of(k)));
    const PointId comp = labels[c.space()->base()->index_of(pts.front())];
    m(k, k) = u.phase_by_component.at(comp);
  }
  return Operator(c, c, std::move(m));
}

bool central_invariance_check(const Operator& t, const CentralUnitary& u,
                              const CentralUnitary& v, const ApproxParams& p) {
  const Operator uo = central_unitary_operator(u, t.source);
  const Operator vo = central_unitary_operator(v, t.target);
  const Operator vtu = op_compose(vo, op_compose(t, uo));
  return approximate_relation(vtu, p) == approximate_relation(t, p);
}

namespace {

// Metric subspace induced on a subset of points.
SpacePtr induced_subspace(const SpacePtr& s, const std::vector<PointId>& pts) {
  std::vector<std::vector<Scale>> dist(pts.size(),
                                       std::vector<Scale>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      dist[i][j] = s->dist(s->index_of(pts[i]), s->index_of(pts[j]));
  return std::make_shared<const Space>(pts, dist);
}

Relation restrict_relation(const Relation& r, const SpacePtr& sub_source,
                           const SpacePtr& sub_target) {
  std::vector<std::pair<PointId, PointId>> pairs;
  for (const auto& [y, x] : r.pairs())
    if (sub_target->has_point(y) && sub_source->has_point(x))
      pairs.emplace_back(y, x);
  return Relation(sub_source, sub_target, std::move(pairs));
}

std::vector<std::pair<Scale, Scale>> default_schedule(const Operator& u) {
  const Scale dx = u.source.space()->disc_gauge_scale();
  const Scale dy = u.target.space()->disc_gauge_scale();
  std::uint64_t start = std::max<std::uint64_t>(
      1, std::max(dx.value(), dy.value()));
  std::uint64_t diam = 0;
  if (u.source.space()->base()->diameter().is_finite())
    diam = u.source.space()->base()->diameter().value();
  if (u.target.space()->base()->diameter().is_finite())
    diam = std::max(diam, u.target.space()->base()->diameter().value());
  std::vector<std::pair<Scale, Scale>> sched;
  for (std::uint64_t s = start;; s *= 2) {
    if (s >= diam) {
      sched.emplace_back(Scale(std::max(s, start)), Scale(std::max(s, start)));
      break;
    }
    sched.emplace_back(Scale(s), Scale(s));
  }
  return sched;
}

}  // namespace

ExtractionResult extract_embedding(const Operator& u,
                                   const ExtractOptions& opts) {
  const Matrix gram = kernels::matmul(u.mat, u.mat.adjoint());
  if (kernels::frobenius(gram - Matrix::identity(gram.rows())) > 1e-8)
    throw std::invalid_argument("extract_embedding: operator is not unitary");

  std::vector<std::pair<Scale, Scale>> schedule =
      opts.schedule.empty() ? default_schedule(u) : opts.schedule;
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i].first < schedule[i - 1].first ||
        schedule[i].second < schedule[i - 1].second)
      throw std::invalid_argument("extract_embedding: schedule must be nondecreasing");

  const DomainResult dom_x = domain(u.source, 1);
  const DomainResult dom_y = domain(u.target, 1);
  const SpacePtr sub_x = induced_subspace(u.source.space()->base(), dom_x.points());
  const SpacePtr sub_y = induced_subspace(u.target.space()->base(), dom_y.points());
  const Scale gauges = u.source.space()->disc_gauge_scale() +
                       u.target.space()->disc_gauge_scale();

  ExtractionResult result;
  std::optional<Relation> best_rel;
  std::size_t best_failures = static_cast<std::size_t>(-1);

  for (std::size_t si = 0; si < schedule.size(); ++si) {
    const auto [f, e] = schedule[si];
    ExtractStep step;
    step.params = ApproxParams{opts.delta, f, e, opts.mode};

    const Relation fwd = approximate_relation(u, step.params);
    const Relation bwd = approximate_relation(
        op_adjoint(u), ApproxParams{opts.delta, e, f, opts.mode});
    const Relation fwd_r = restrict_relation(fwd, sub_x, sub_y);
    const Relation bwd_r = restrict_relation(bwd, sub_y, sub_x);

    step.relation_size = fwd_r.size();
    step.report = classify_relation(fwd_r);
    step.inverse_defect = relation_subordination(bwd_r, rel_transpose(fwd_r));

    const Scale witness_cap = opts.max_witness.value_or(f + e + gauges + Scale(2));
    const Scale inverse_cap = opts.max_inverse_defect.value_or(witness_cap);

    if (!step.report.controlled()) step.failures.push_back("not controlled");
    if (!step.report.transpose_controlled())
      step.failures.push_back("transpose not controlled");
    if (step.report.densely_defined_scale > witness_cap)
      step.failures.push_back("densely-defined witness " +
                              step.report.densely_defined_scale.str() +
                              " exceeds cap " + witness_cap.str());
    if (step.report.coarsely_surjective_scale > witness_cap)
      step.failures.push_back("coarsely-surjective witness " +
                              step.report.coarsely_surjective_scale.str() +
                              " exceeds cap " + witness_cap.str());
    if (step.inverse_defect > inverse_cap)
      step.failures.push_back("inverse relation defect " +
                              step.inverse_defect.str() + " exceeds cap " +
                              inverse_cap.str());
    step.success = step.failures.empty();

    if (step.failures.size() < best_failures) {
      best_failures = step.failures.size();
      result.step_index = si;
      result.report = step.report;
      best_rel = fwd_r;
    }
    const bool done = step.success;
    result.steps.push_back(std::move(step));
    if (done) {
      result.success = true;
      result.step_index = si;
      result.report = result.steps.back().report;
      result.relation = fwd_r;
      return result;
    }
  }
  if (best_rel) result.relation = *best_rel;
  return result;
}

DomainInvariance domain_invariance_check(const Operator& t,
                                         const std::vector<int>& kappas) {
  if (!t.endogenous())
    throw std::invalid_argument("domain_invariance_check: operator not endogenous");
  if (t.mat.rows() != t.mat.cols())
    throw std::invalid_argument("domain_invariance_check: operator not square");
  Matrix inv;
  try {
    inv = kernels::inverse(t.mat);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("domain_invariance_check: singular operator");
  }
  DomainInvariance res;
  res.condition = kernels::sigma_max(t.mat) * kernels::sigma_max(inv);
  if (res.condition > 1e12)
    throw std::invalid_argument(
        "domain_invariance_check: numerically singular (condition " +
        std::to_string(res.condition) + ")");
  const Operator tinv(t.target, t.source, std::move(inv));
  const Scale disc = t.source.space()->disc_gauge_scale();
  res.bound = max(propagation(t), propagation(tinv)) + disc + disc;
  const Space& base = *t.source.space()->base();
  for (int kappa : kappas) {
    const DomainResult ds = domain(t.source, kappa);
    const DomainResult dt = domain(t.target, kappa);
    const auto [a, b] = subordination(ds.points(), dt.points(), base);
    const Scale witness = max(a, b);
    if (witness > res.bound)
      throw std::logic_error(
          "domain invariance violated at kappa " + std::to_string(kappa) +
          ": witness " + witness.str() + " exceeds bound " + res.bound.str());
    res.witnesses.emplace_back(kappa, witness);
  }
  return res;
}

}  // namespace coarselab

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

#include "coarselab/category.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace coarselab {

namespace {

void require_unitary(const Operator& u, double defect_cap, const char* who) {
  if (u.mat.rows() != u.mat.cols())
    throw std::invalid_argument(std::string(who) + ": non-square unitary");
  const Matrix g = kernels::matmul(u.mat, u.mat.adjoint());
  if (kernels::frobenius(g - Matrix::identity(g.rows())) > defect_cap)
    throw std::invalid_argument(std::string(who) + ": operator is not unitary");
}

/// Component label of each coordinate of a module.
std::vector<PointId> coordinate_components(const Module& c) {
  const std::vector<PointId> labels = component_labels(*c.space()->base());
  std::vector<PointId> out(c.dim());
  for (std::size_t k = 0; k < c.dim(); ++k) {
    const auto& pts =
        c.space()->block_points(static_cast<std::size_t>(c.block_of(k)));
    out[k] = labels[c.space()->base()->index_of(pts.front())];
  }
  return out;
}

}  // namespace

Operator FunctorSpec::apply(const Operator& t) const {
  const Operator uc = unitary(t.source);
  const Operator ud = unitary(t.target);
  return op_compose(ud, op_compose(t, op_adjoint(uc)));
}

FunctorSpec pushforward_functor(const PointMap& f, const LFCMPtr& source,
                                const LFCMPtr& target) {
  // Trips the measurability check eagerly.
  (void)pushforward(f, uniform_module(source), target);
  FunctorSpec spec;
  spec.object_map = [f, target](const Module& c) {
    return pushforward(f, c, target);
  };
  spec.unitary = [f, target](const Module& c) {
    return pushforward_unitary(f, c, target);
  };
  return spec;
}

FunctorSpec functor_from_unitaries(
    std::function<Module(const Module&)> object_map,
    std::function<Operator(const Module&)> unitaries) {
  FunctorSpec spec;
  spec.object_map = object_map;
  spec.unitary = [object_map, unitaries](const Module& c) {
    Operator u = unitaries(c);
    require_unitary(u, 1e-10, "functor_from_unitaries");
    if (u.source != c)
      throw std::invalid_argument(
          "functor_from_unitaries: unitary not based at the given module");
    if (u.target != object_map(c))
      throw std::invalid_argument(
          "functor_from_unitaries: unitary does not land in the image module");
    return u;
  };
  return spec;
}

Operator additivity_iso(const FunctorSpec& f, const Module& c,
                        const Module& d) {
  const DirectSum dom = direct_sum(c, d);
  const DirectSum cod = direct_sum(f.apply_object(c), f.apply_object(d));
  const Operator left = op_compose(f.apply(dom.inc0), cod.proj0);
  const Operator right = op_compose(f.apply(dom.inc1), cod.proj1);
  return op_add(left, right);
}

std::optional<CongruenceWitness> cong_mod_central(const Operator& t,
                                                  const Operator& s,
                                                  double tol) {
  if (t.source != s.source || t.target != s.target)
    throw std::invalid_argument("cong_mod_central: operators between different modules");

  const std::vector<PointId> src_comp = coordinate_components(t.source);
  const std::vector<PointId> tgt_comp = coordinate_components(t.target);
  std::set<PointId> src_labels(src_comp.begin(), src_comp.end());
  std::set<PointId> tgt_labels(tgt_comp.begin(), tgt_comp.end());
  {
    const auto all_src = component_labels(*t.source.space()->base());
    src_labels.insert(all_src.begin(), all_src.end());
    const auto all_tgt = component_labels(*t.target.space()->base());
    tgt_labels.insert(all_tgt.begin(), all_tgt.end());
  }

  // Hilbert-Schmidt inner products <s_lk, t_lk> per component pair.
  std::map<std::pair<PointId, PointId>, Complex> inner;
  for (std::size_t i = 0; i < t.mat.rows(); ++i)
    for (std::size_t j = 0; j < t.mat.cols(); ++j) {
      const auto key = std::make_pair(tgt_comp[i], src_comp[j]);
      inner[key] += std::conj(s.mat(i, j)) * t.mat(i, j);
    }

  // Propagate phases over the touched component pairs; each connected
  // cluster has one free phase, fixed by assigning 1 to its first node.
  std::map<PointId, Complex> alpha;  // source components
  std::map<PointId, Complex> beta;   // target components
  struct Node {
    bool is_source;
    PointId label;
    bool operator<(const Node& b) const {
      if (is_source != b.is_source) return is_source > b.is_source;
      return label < b.label;
    }
  };
  std::map<Node, std::vector<std::pair<Node, Complex>>> edges;
  for (const auto& [key, c] : inner) {
    if (std::abs(c) == 0.0) continue;
    const Complex gamma = c / std::abs(c);
    const Node ns{true, key.second}, nt{false, key.first};
    edges[ns].push_back({nt, gamma});          // beta = gamma * conj(alpha)
    edges[nt].push_back({ns, gamma});          // alpha = gamma * conj(beta)
  }
  std::set<Node> visited;
  for (const auto& [start, ignored] : edges) {
    if (visited.count(start)) continue;
    std::vector<Node> stack = {start};
    visited.insert(start);
    if (start.is_source)
      alpha[start.label] = Complex(1.0, 0.0);
    else
      beta[start.label] = Complex(1.0, 0.0);
    while (!stack.empty()) {
      const Node n = stack.back();
      stack.pop_back();
      const Complex mine =
          n.is_source ? alpha.at(n.label) : beta.at(n.label);
      for (const auto& [other, gamma] : edges.at(n)) {
        if (visited.count(other)) continue;
        visited.insert(other);
        const Complex val = gamma * std::conj(mine);
        if (other.is_source)
          alpha[other.label] = val;
        else
          beta[other.label] = val;
        stack.push_back(other);
      }
    }
  }
  for (PointId l : src_labels)
    if (!alpha.count(l)) alpha[l] = Complex(1.0, 0.0);
  for (PointId l : tgt_labels)
    if (!beta.count(l)) beta[l] = Complex(1.0, 0.0);

  CentralUnitary u{t.source.space(), alpha};
  CentralUnitary v{t.target.space(), beta};
  const Operator cand = op_compose(central_unitary_operator(v, t.target),
                                   op_compose(s, central_unitary_operator(u, t.source)));
  const double residual = kernels::sigma_max(t.mat - cand.mat);
  const double scale = kernels::sigma_max(t.mat);
  if (residual <= tol * std::max(scale, 1e-300))
    return CongruenceWitness{std::move(u), std::move(v), residual};
  return std::nullopt;
}

NaturalIsoVerdict natural_iso_mod_central_check(
    const FunctorSpec& f, const FunctorSpec& g,
    const std::function<Operator(const Module&)>& eta,
    const std::vector<Operator>& test_morphisms, double tol) {
  NaturalIsoVerdict verdict;
  for (std::size_t i = 0; i < test_morphisms.size(); ++i) {
    const Operator& t = test_morphisms[i];
    const Operator eta_c = eta(t.source);
    const Operator eta_d = eta(t.target);
    require_unitary(eta_c, 1e-8, "natural_iso_mod_central_check");
    const Operator lhs = op_compose(g.apply(t), eta_c);
    const Operator rhs = op_compose(eta_d, f.apply(t));
    if (!cong_mod_central(lhs, rhs, tol)) {
      verdict.ok = false;
      verdict.failures.push_back("naturality square fails at test morphism " +
                                 std::to_string(i));
    }
  }
  return verdict;
}

FunctorSpec assemble_functor(const std::vector<ModulePair>& pairs,
                             const PointMap& fallback, const LFCMPtr& source,
                             const LFCMPtr& target) {
  for (const auto& p : pairs) {
    require_unitary(p.unitary, 1e-10, "assemble_functor");
    if (p.unitary.source != p.source || p.unitary.target != p.target)
      throw std::invalid_argument(
          "assemble_functor: unitary endpoints differ from the module pair");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i].source == pairs[j].source &&
          !(pairs[i].target == pairs[j].target &&
            pairs[i].unitary.mat == pairs[j].unitary.mat))
        throw std::invalid_argument(
            "assemble_functor: duplicate source module with conflicting images");

  (void)pushforward(fallback, uniform_module(source), target);
  FunctorSpec spec;
  spec.object_map = [pairs, fallback, target](const Module& c) {
    for (const auto& p : pairs)
      if (p.source == c) return p.target;
    return pushforward(fallback, c, target);
  };
  spec.unitary = [pairs, fallback, target](const Module& c) {
    for (const auto& p : pairs)
      if (p.source == c) return p.unitary;
    return pushforward_unitary(fallback, c, target);
  };
  return spec;
}

Scale closeness_from_functor_congruence(const PointMap& f, const PointMap& g,
                                        const LFCMPtr& source,
                                        const LFCMPtr& target,
                                        const std::vector<Module>& modules) {
  if (!same_space(f.source(), source->base()) ||
      !same_space(g.source(), source->base()) ||
      !same_space(f.target(), target->base()) ||
      !same_space(g.target(), target->base()))
    throw std::invalid_argument(
        "closeness_from_functor_congruence: maps do not match the spaces");

  // scale((f x g)(E_disc^X)) computed directly over block pairs.
  const Space& y = *target->base();
  Scale expected(0);
  for (const auto& block : source->blocks())
    for (PointId p : block)
      for (PointId q : block)
        expected = max(expected, y.dist(y.index_of(f.apply(p)),
                                        y.index_of(g.apply(q))));

  for (const Module& c : modules) {
    for (std::size_t b = 0; b < c.space()->block_count(); ++b)
      if (c.rank_of_block(b) < 1)
        throw std::invalid_argument(
            "closeness_from_functor_congruence: module without full-support dims");
    const Module fc = pushforward(f, c, target);
    const Module gc = pushforward(g, c, target);
    const Operator nu(fc, gc, Matrix::identity(c.dim()));
    const Scale got = entourage_scale(op_support(nu));
    if (got != expected)
      throw std::logic_error(
          "closeness_from_functor_congruence: support scale " + got.str() +
          " differs from (f x g)(E_disc) scale " + expected.str());
  }
  return expected;
}

}  // namespace coarselab

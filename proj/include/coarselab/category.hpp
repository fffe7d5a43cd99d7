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

#ifndef COARSELAB_CATEGORY_HPP
#define COARSELAB_CATEGORY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/rigidity.hpp"

namespace coarselab {

/// *-functor between approximable categories in normal form: an object
/// map plus a unitary U(C): C -> F(C) per module, acting on morphisms
/// by F(t) = U(D) t U(C)*.  Every full and faithful *-functor is of
/// this form up to central unitaries, so nothing is lost by fixing it.
struct FunctorSpec {
  std::function<Module(const Module&)> object_map;
  std::function<Operator(const Module&)> unitary;

  Module apply_object(const Module& c) const { return object_map(c); }

  /// F(t) = unitary(target) o t o unitary(source)*.
  Operator apply(const Operator& t) const;
};

/// Functor induced by a measurable coarse map: pushforward on objects,
/// identity-matrix unitaries.  Functor laws hold exactly.
FunctorSpec pushforward_functor(const PointMap& f, const LFCMPtr& source,
                                const LFCMPtr& target);

/// Conjugation functor from an object map and per-object unitaries;
/// full and faithful by construction.  Unitarity is checked on use
/// (defect above 1e-10 rejects the input).
FunctorSpec functor_from_unitaries(
    std::function<Module(const Module&)> object_map,
    std::function<Operator(const Module&)> unitaries);

/// Additivity isomorphism alpha_{C,D} = F(i_C) pi_{F(C)} + F(i_D)
/// pi_{F(D)} : F(C) (+) F(D) -> F(C (+) D).  Unitary, natural in both
/// arguments; generally of uncontrolled propagation.
Operator additivity_iso(const FunctorSpec& f, const Module& c, const Module& d);

struct CongruenceWitness {
  CentralUnitary u;  // source space
  CentralUnitary v;  // target space
  double residual;   // ||t - v s u||
};

/// Decides t = v s u for central unitaries (u, v) by propagating block
/// phases over the touched component pairs (one free phase per
/// connected cluster, fixed deterministically).  Returns a witness when
/// the residual is at most tol * ||t||.
std::optional<CongruenceWitness> cong_mod_central(const Operator& t,
                                                  const Operator& s,
                                                  double tol = 1e-9);

struct NaturalIsoVerdict {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Checks the naturality squares G(t) eta(C) ~ eta(D) F(t) modulo
/// central unitaries on the given test morphisms.
NaturalIsoVerdict natural_iso_mod_central_check(
    const FunctorSpec& f, const FunctorSpec& g,
    const std::function<Operator(const Module&)>& eta,
    const std::vector<Operator>& test_morphisms, double tol = 1e-9);

struct ModulePair {
  Module source;
  Module target;
  Operator unitary;  // source -> target
};

/// Functor sending each listed module to its partner via the given
/// unitary and every other module through the pushforward along the
/// fallback map.  Full and faithful by construction.
FunctorSpec assemble_functor(const std::vector<ModulePair>& pairs,
                             const PointMap& fallback, const LFCMPtr& source,
                             const LFCMPtr& target);

/// scale((f x g)(E_disc^X)), the closeness witness of f and g, after
/// asserting it equals the support scale of nu_C = V(C) U(C)* for every
/// supplied module with full-support dimensions.
Scale closeness_from_functor_congruence(const PointMap& f, const PointMap& g,
                                        const LFCMPtr& source,
                                        const LFCMPtr& target,
                                        const std::vector<Module>& modules);

}  // namespace coarselab

#endif  // COARSELAB_CATEGORY_HPP

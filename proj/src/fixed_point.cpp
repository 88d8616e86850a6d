// Copyright 2026 The extravisc Authors
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

#include "extravisc/fixed_point.hpp"

#include <cmath>
#include <sstream>

namespace extravisc {

CompositeProjectionMap::CompositeProjectionMap(const PolyhedralSet& set, HalfSpace halfspace,
                                               double demicontractive_modulus)
    : set_(&set), halfspace_(std::move(halfspace)), modulus_(demicontractive_modulus) {
  if (halfspace_.dimension() != set.dimension()) {
    throw std::invalid_argument("CompositeProjectionMap: dimension mismatch");
  }
}

std::vector<CompositeProjectionMap> make_maps(const ProblemInstance& instance) {
  std::vector<CompositeProjectionMap> maps;
  maps.reserve(instance.halfspaces.size());
  for (const auto& hs : instance.halfspaces) {
    maps.emplace_back(instance.feasible_set, hs, instance.demicontractive_modulus);
  }
  return maps;
}

QpSolution apply_map_solution(const CompositeProjectionMap& S, const Vector& x, double tol,
                              const std::optional<Vector>& warm_start) {
  return solve_projection(S.set(), project_halfspace(S.halfspace(), x), warm_start, tol);
}

Vector apply_map(const CompositeProjectionMap& S, const Vector& x, double tol) {
  return require_converged(apply_map_solution(S, x, tol), "apply_map").y;
}

Vector mann_combination(const Vector& t, const Vector& s, double beta_n, double modulus) {
  const double cap = 0.5 * (1.0 - modulus);
  if (!(beta_n > 0.0 && beta_n < cap)) {
    std::ostringstream msg;
    msg << "mann step coefficient " << beta_n << " outside (0, " << cap << ")";
    throw ParameterOutOfRange(msg.str());
  }
  return (1.0 - beta_n) * t + beta_n * s;
}

Vector mann_step(const CompositeProjectionMap& S, const Vector& t, double beta_n, double tol) {
  // Check the coefficient before paying for the projection.
  mann_combination(t, t, beta_n, S.modulus());
  return mann_combination(t, apply_map(S, t, tol), beta_n, S.modulus());
}

Vector evaluate_operator(const Operator& F, const Vector& x) {
  if (x.size() != F.dimension()) throw std::invalid_argument("operator: dimension mismatch");
  switch (F.kind()) {
    case OperatorKind::kAffineShift:
      return x - F.shift();
  }
  throw std::logic_error("unknown operator kind");
}

Vector viscosity_point(const Operator& F, const Vector& z, double alpha) {
  if (!(alpha > 0.0)) throw ParameterOutOfRange("viscosity_point: alpha must be positive");
  return z - alpha * evaluate_operator(F, z);
}

double contraction_factor(const Operator& F, double mu) {
  const double eta = F.strong_monotonicity();
  const double lip = F.lipschitz();
  if (!(mu > 0.0 && mu < 2.0 * eta / (lip * lip))) {
    throw ParameterOutOfRange("contraction_factor: mu outside (0, 2 eta / L^2)");
  }
  return std::sqrt(std::max(0.0, 1.0 - mu * (2.0 * eta - mu * lip * lip)));
}

double contraction_gap(const Operator& F, double mu) {
  return 1.0 - contraction_factor(F, mu);
}

double max_viscosity_step(const Operator& F) {
  const double lip = F.lipschitz();
  return 0.99 * 2.0 * F.strong_monotonicity() / (lip * lip);
}

}  // namespace extravisc

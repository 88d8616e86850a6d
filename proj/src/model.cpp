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

#include "extravisc/model.hpp"

#include "extravisc/extragradient.hpp"
#include "extravisc/qp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace extravisc {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double min_sym_eigenvalue(const Matrix& M) {
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_sym_eigenvalue(const Matrix& M) {
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace

HalfSpace::HalfSpace(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  if (normal_.size() == 0 || normal_.isZero(0.0)) {
    throw std::invalid_argument("HalfSpace: normal must be nonzero");
  }
  if (!normal_.allFinite() || !std::isfinite(offset_)) {
    throw std::invalid_argument("HalfSpace: non-finite data");
  }
}

double HalfSpace::violation(const Vector& x) const {
  return std::max(0.0, normal_.dot(x) - offset_);
}

PolyhedralSet::PolyhedralSet(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw std::invalid_argument("PolyhedralSet: A has " + std::to_string(A_.rows()) +
                                " rows but b has length " + std::to_string(b_.size()));
  }
  if (A_.cols() == 0) throw std::invalid_argument("PolyhedralSet: zero dimension");
  if (!A_.allFinite() || !b_.allFinite()) {
    throw std::invalid_argument("PolyhedralSet: non-finite data");
  }
}

PolyhedralSet PolyhedralSet::whole_space(Index dimension) {
  return PolyhedralSet(Matrix(0, dimension), Vector(0));
}

double PolyhedralSet::violation(const Vector& x) const {
  if (A_.rows() == 0) return 0.0;
  return std::max(0.0, (A_ * x - b_).maxCoeff());
}

PolyhedralSet PolyhedralSet::with_rows(std::span<const HalfSpace> rows) const {
  const Index k = A_.rows();
  const Index extra = static_cast<Index>(rows.size());
  Matrix A(k + extra, A_.cols());
  Vector b(k + extra);
  A.topRows(k) = A_;
  b.head(k) = b_;
  for (Index r = 0; r < extra; ++r) {
    if (rows[r].dimension() != A_.cols()) {
      throw std::invalid_argument("PolyhedralSet::with_rows: dimension mismatch");
    }
    A.row(k + r) = rows[r].normal().transpose();
    b[k + r] = rows[r].offset();
  }
  return PolyhedralSet(std::move(A), std::move(b));
}

LinearBifunction::LinearBifunction(Matrix P, Matrix Q, Vector q)
    : P_(std::move(P)), Q_(std::move(Q)), q_(std::move(q)) {
  const Index m = q_.size();
  if (P_.rows() != m || P_.cols() != m || Q_.rows() != m || Q_.cols() != m) {
    throw std::invalid_argument("LinearBifunction: P, Q must be m x m with m = len(q)");
  }
}

Operator::Operator(OperatorKind kind, Vector shift, double eta, double lipschitz)
    : kind_(kind), shift_(std::move(shift)), eta_(eta), lipschitz_(lipschitz) {}

Operator Operator::affine_shift(Vector shift) {
  return Operator(OperatorKind::kAffineShift, std::move(shift), 1.0, 1.0);
}

SimplexWeights::SimplexWeights(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("SimplexWeights: empty weight vector");
  for (double w : values_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SimplexWeights: weights must be strictly positive");
    }
  }
  const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("SimplexWeights: weights sum to " + fmt_double(total) +
                                ", not 1");
  }
}

SimplexWeights SimplexWeights::uniform(std::size_t count) {
  if (count == 0) throw std::invalid_argument("SimplexWeights: empty weight vector");
  return SimplexWeights(std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

AlphaSchedule AlphaSchedule::inverse() { return AlphaSchedule{}; }

AlphaSchedule AlphaSchedule::inverse_sqrt() {
  AlphaSchedule s;
  s.rule_ = AlphaRule::kInverseSqrt;
  return s;
}

AlphaSchedule AlphaSchedule::custom(std::vector<double> values) {
  AlphaSchedule s;
  s.rule_ = AlphaRule::kCustom;
  s.custom_ = std::move(values);
  return s;
}

AlphaSchedule AlphaSchedule::from_name(const std::string& name) {
  if (name == "inv_n") return inverse();
  if (name == "inv_sqrt_n") return inverse_sqrt();
  throw std::invalid_argument("unknown alpha schedule '" + name +
                              "' (expected inv_n or inv_sqrt_n)");
}

std::string AlphaSchedule::name() const {
  switch (rule_) {
    case AlphaRule::kInverse:
      return "inv_n";
    case AlphaRule::kInverseSqrt:
      return "inv_sqrt_n";
    case AlphaRule::kCustom:
      return "custom";
  }
  return "custom";
}

double AlphaSchedule::operator()(int n) const {
  switch (rule_) {
    case AlphaRule::kInverse:
      return 1.0 / (n + 1.0);
    case AlphaRule::kInverseSqrt:
      return 1.0 / std::sqrt(n + 1.0);
    case AlphaRule::kCustom:
      if (n < 0 || static_cast<std::size_t>(n) >= custom_.size()) {
        throw std::out_of_range("custom alpha schedule has no entry for n = " +
                                std::to_string(n));
      }
      return custom_[static_cast<std::size_t>(n)];
  }
  return 0.0;
}

double rho_upper_bound(const LipschitzConstants& c) {
  const double inf = std::numeric_limits<double>::infinity();
  const double b1 = c.c1 > 0.0 ? 1.0 / (2.0 * c.c1) : inf;
  const double b2 = c.c2 > 0.0 ? 1.0 / (2.0 * c.c2) : inf;
  return std::min(b1, b2);
}

SolverConfig default_config(const ProblemInstance& instance, AlphaSchedule alpha,
                                  int max_iters) {
  SolverConfig config;
  const LipschitzConstants c = family_constants(instance.bifunctions);
  config.rho = c.c1 > 0.0 ? 1.0 / (4.0 * c.c1) : 1.0;
  config.alpha = std::move(alpha);
  config.mann_coefficients.assign(instance.halfspaces.size(), 0.25);
  config.bifunction_weights = SimplexWeights::uniform(instance.bifunctions.size());
  config.map_weights = SimplexWeights::uniform(instance.halfspaces.size());
  config.max_iters = max_iters;
  return config;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue;
  }
  return out;
}

ValidationReport validate_instance(const ProblemInstance& instance, double eps_psd) {
  ValidationReport report;
  const Index m = instance.dimension();
  if (instance.bifunctions.empty()) report.add("no bifunctions (N must be >= 1)");
  if (instance.halfspaces.empty()) report.add("no fixed-point maps (M must be >= 1)");

  for (std::size_t i = 0; i < instance.bifunctions.size(); ++i) {
    const LinearBifunction& f = instance.bifunctions[i];
    const std::string tag = "bifunction " + std::to_string(i) + ": ";
    if (f.dimension() != m) {
      report.add(tag + "dimension " + std::to_string(f.dimension()) + " != " +
                 std::to_string(m));
      continue;
    }
    const double asym = (f.Q() - f.Q().transpose()).lpNorm<Eigen::Infinity>();
    if (asym > eps_psd * std::max(1.0, f.Q().lpNorm<Eigen::Infinity>())) {
      report.add(tag + "Q not symmetric");
    }
    const double q_min = min_sym_eigenvalue(f.Q());
    if (q_min < -eps_psd) {
      report.add(tag + "Q not positive semidefinite (min eigenvalue " + fmt_double(q_min) +
                 ")");
    }
    const double qp_max = max_sym_eigenvalue(f.Q() - f.P());
    if (qp_max > eps_psd) {
      report.add(tag + "Q - P not negative semidefinite (max eigenvalue " +
                 fmt_double(qp_max) + ")");
    }
  }
  for (std::size_t j = 0; j < instance.halfspaces.size(); ++j) {
    if (instance.halfspaces[j].dimension() != m) {
      report.add("halfspace " + std::to_string(j) + ": dimension mismatch");
    }
  }
  if (instance.op.dimension() != m) report.add("operator: dimension mismatch");
  const double eta = instance.op.strong_monotonicity();
  const double lip = instance.op.lipschitz();
  if (!(eta > 0.0) || lip < eta) report.add("operator: need eta > 0 and L >= eta");
  const double beta = instance.demicontractive_modulus;
  if (!(beta >= 0.0 && beta < 1.0)) report.add("demicontractive modulus outside [0, 1)");
  if (instance.known_solution && instance.known_solution->size() != m) {
    report.add("known_solution: dimension mismatch");
  }

  try {
    if (!find_feasible_point(instance.feasible_set)) report.add("feasible set empty");
  } catch (const QpError& e) {
    report.add(std::string("feasibility check failed: ") + e.what());
  }
  return report;
}

ValidationReport validate_config(const SolverConfig& config, const ProblemInstance& instance) {
  ValidationReport report;
  const LipschitzConstants c = family_constants(instance.bifunctions);
  if (!(config.rho > 0.0)) report.add("rho must be positive");
  if (c.c1 > 0.0 && config.rho >= 1.0 / (2.0 * c.c1)) {
    report.add("rho >= 1/(2 c1) = " + fmt_double(1.0 / (2.0 * c.c1)));
  }
  if (c.c2 > 0.0 && config.rho >= 1.0 / (2.0 * c.c2)) {
    report.add("rho >= 1/(2 c2) = " + fmt_double(1.0 / (2.0 * c.c2)));
  }

  const std::size_t n_maps = instance.halfspaces.size();
  const double beta_cap = 0.5 * (1.0 - instance.demicontractive_modulus);
  if (config.mann_coefficients.size() != n_maps) {
    report.add("mann coefficients: expected " + std::to_string(n_maps) + ", got " +
               std::to_string(config.mann_coefficients.size()));
  }
  for (std::size_t j = 0; j < config.mann_coefficients.size(); ++j) {
    const double bj = config.mann_coefficients[j];
    if (!(bj > 0.0 && bj < beta_cap)) {
      report.add("mann coefficient " + std::to_string(j) + " = " + fmt_double(bj) +
                 " outside (0, (1 - beta)/2) = (0, " + fmt_double(beta_cap) + ")");
    }
  }
  if (config.bifunction_weights.size() != instance.bifunctions.size()) {
    report.add("bifunction weights: expected " + std::to_string(instance.bifunctions.size()) +
               " entries");
  }
  if (config.map_weights.size() != n_maps) {
    report.add("map weights: expected " + std::to_string(n_maps) + " entries");
  }
  if (!(config.inner_tol > 0.0)) report.add("inner_tol must be positive");
  if (config.max_iters < 0) report.add("max_iters must be nonnegative");
  if (config.workers < 1) report.add("workers must be >= 1");
  if (config.stop_tol < 0.0) report.add("stop_tol must be nonnegative");
  if (config.alpha.rule() == AlphaRule::kCustom) {
    const auto& a = config.alpha.custom_values();
    if (a.size() < static_cast<std::size_t>(std::max(config.max_iters, 0))) {
      report.add("custom alpha schedule shorter than max_iters");
    }
    for (double v : a) {
      if (!(v > 0.0)) {
        report.add("custom alpha schedule has a nonpositive entry");
        break;
      }
    }
  }
  return report;
}

double IterationTrace::total_ms() const {
  double total = 0.0;
  for (const auto& r : records) total += r.elapsed_ms;
  return total;
}

}  // namespace extravisc

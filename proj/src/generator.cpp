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

#include "extravisc/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace extravisc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

enum Stream : std::uint64_t {
  kConstraintMatrix = 0,
  kConstraintOffsets = 1,
  kHalfspaceNormals = 2,
  kHalfspaceOffsets = 3,
  kBifunctionBase = 16,
};

Matrix conjugated_diagonal(StreamRng& eig_rng, StreamRng& rot_rng, Index m, double lo, double hi) {
  Vector eig(m);
  for (Index r = 0; r < m; ++r) eig[r] = eig_rng.uniform(lo, hi);
  const Matrix U = random_orthogonal(rot_rng, m);
  Matrix S = U * eig.asDiagonal() * U.transpose();
  // Round-off leaves S a few ulps from symmetric.
  return 0.5 * (S + S.transpose());
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ull + 1))) {}

double StreamRng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double StreamRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Matrix random_orthogonal(StreamRng& rng, Index m) {
  Matrix G(m, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < m; ++r) G(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(m, m);
  const Matrix& R = qr.matrixQR();
  for (Index c = 0; c < m; ++c) {
    if (R(c, c) < 0.0) Q.col(c) *= -1.0;
  }
  return Q;
}

ProblemInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.m < 1 || spec.k < 1 || spec.n_bifunctions < 1 || spec.n_maps < 1) {
    throw std::invalid_argument("GeneratorSpec: m, k, N, M must all be >= 1");
  }
  const Index m = spec.m;
  const double range = static_cast<double>(spec.m);

  StreamRng a_rng(spec.seed, kConstraintMatrix);
  StreamRng b_rng(spec.seed, kConstraintOffsets);
  Matrix A(spec.k, m);
  Vector b(spec.k);
  for (Index r = 0; r < spec.k; ++r) {
    for (Index c = 0; c < m; ++c) A(r, c) = a_rng.uniform(-range, range);
    b[r] = b_rng.uniform(1.0, range);
  }

  StreamRng h_rng(spec.seed, kHalfspaceNormals);
  StreamRng l_rng(spec.seed, kHalfspaceOffsets);
  std::vector<HalfSpace> halfspaces;
  for (int j = 0; j < spec.n_maps; ++j) {
    Vector h(m);
    for (Index c = 0; c < m; ++c) h[c] = h_rng.uniform(-range, range);
    halfspaces.emplace_back(std::move(h), l_rng.uniform(1.0, range));
  }

  std::vector<LinearBifunction> bifunctions;
  for (int i = 0; i < spec.n_bifunctions; ++i) {
    const std::uint64_t base = kBifunctionBase + 4 * static_cast<std::uint64_t>(i);
    StreamRng t_eig(spec.seed, base), q_eig(spec.seed, base + 1);
    StreamRng t_rot(spec.seed, base + 2), q_rot(spec.seed, base + 3);
    const Matrix T = conjugated_diagonal(t_eig, t_rot, m, -range, 0.0);
    Matrix Q = conjugated_diagonal(q_eig, q_rot, m, 0.0, range);
    Matrix P = Q - T;
    bifunctions.emplace_back(std::move(P), std::move(Q), Vector::Zero(m));
  }

  return ProblemInstance{PolyhedralSet(std::move(A), std::move(b)), std::move(bifunctions),
                         std::move(halfspaces), Operator::affine_shift(Vector::Ones(m)), 0.0,
                         Vector::Zero(m)};
}

}  // namespace extravisc

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

#ifndef EXTRAVISC_GENERATOR_HPP
#define EXTRAVISC_GENERATOR_HPP

#include "extravisc/model.hpp"

#include <cstdint>
#include <random>

namespace extravisc {

/// Seeded stream of doubles, reproducible across platforms: a 64-bit
/// Mersenne Twister (whose output sequence is fixed by the C++ standard)
/// seeded with splitmix64(seed, stream), uniform doubles built from the top
/// 53 bits, and normals from the Marsaglia polar method. Each random object
/// of an instance draws from its own stream so that changing one shape
/// never shifts another.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-distributed orthogonal matrix: QR of a standard-normal matrix with
/// the signs fixed so that R has a positive diagonal.
Matrix random_orthogonal(StreamRng& rng, Index m);

/// Shape of a random Nash-Cournot test instance. Entry ranges are fixed:
/// A and h_j in [-m, m], b and l_j in [1, m], q_i = 0, eigenvalues of Q_i in
/// [0, m] and of T_i = Q_i - P_i in [-m, 0].
struct GeneratorSpec {
  int m = 10;
  int k = 20;
  int n_bifunctions = 5;
  int n_maps = 20;
  std::uint64_t seed = 0;
};

/// Stream layout: 0 -> A, 1 -> b, 2 -> h_j, 3 -> l_j, and for bifunction i
/// streams 16 + 4i (eigenvalues of T_i), 17 + 4i (eigenvalues of Q_i),
/// 18 + 4i (rotation of T_i), 19 + 4i (rotation of Q_i).
///
/// The known solution is 0: b, l_j > 0 put 0 in C and in every T_j, and
/// with q_i = 0 it solves every equilibrium problem. Since P_i + Q_i =
/// 2 Q_i - T_i is positive definite with probability one, each equilibrium
/// problem has 0 as its only solution, so the operator F(x) = x - a with
/// a = (1, ..., 1) has nothing else to select.
/// Throws std::invalid_argument unless every size is >= 1.
ProblemInstance generate_instance(const GeneratorSpec& spec);

}  // namespace extravisc

#endif  // EXTRAVISC_GENERATOR_HPP

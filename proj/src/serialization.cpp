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

#include "extravisc/serialization.hpp"

#include <fstream>

namespace extravisc {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

void check_version(const json& j) {
  const int version = field(j, "schema_version").get<int>();
  if (version != kSchemaVersion) {
    throw SchemaError("unsupported schema_version " + std::to_string(version));
  }
}

std::vector<double> doubles(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of numbers");
  return j.get<std::vector<double>>();
}

}  // namespace

json matrix_to_json(const Matrix& M) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(M.size()));
  for (Index r = 0; r < M.rows(); ++r) {
    for (Index c = 0; c < M.cols(); ++c) data.push_back(M(r, c));
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = field(j, "rows").get<Index>();
  const auto cols = field(j, "cols").get<Index>();
  const std::vector<double> data = doubles(field(j, "data"));
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
    throw SchemaError("matrix data length does not match rows x cols");
  }
  Matrix M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) M(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return M;
}

json vector_to_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const json& j) {
  const std::vector<double> data = doubles(j);
  return Eigen::Map<const Vector>(data.data(), static_cast<Index>(data.size()));
}

json instance_to_json(const ProblemInstance& instance) {
  json bifunctions = json::array();
  for (const auto& f : instance.bifunctions) {
    bifunctions.push_back(
        {{"P", matrix_to_json(f.P())}, {"Q", matrix_to_json(f.Q())}, {"q", vector_to_json(f.q())}});
  }
  json halfspaces = json::array();
  for (const auto& hs : instance.halfspaces) {
    halfspaces.push_back({{"h", vector_to_json(hs.normal())}, {"l", hs.offset()}});
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["dimension"] = instance.dimension();
  j["feasible_set"] = {{"A", matrix_to_json(instance.feasible_set.A())},
                       {"b", vector_to_json(instance.feasible_set.b())}};
  j["bifunctions"] = std::move(bifunctions);
  j["halfspaces"] = std::move(halfspaces);
  j["operator"] = {{"kind", "affine_shift"},
                   {"shift", vector_to_json(instance.op.shift())},
                   {"eta", instance.op.strong_monotonicity()},
                   {"L", instance.op.lipschitz()}};
  j["demicontractive_modulus"] = instance.demicontractive_modulus;
  j["known_solution"] =
      instance.known_solution ? vector_to_json(*instance.known_solution) : json(nullptr);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  check_version(j);
  try {
    const json& set = field(j, "feasible_set");
    PolyhedralSet C(matrix_from_json(field(set, "A")), vector_from_json(field(set, "b")));

    std::vector<LinearBifunction> bifunctions;
    for (const auto& f : field(j, "bifunctions")) {
      bifunctions.emplace_back(matrix_from_json(field(f, "P")), matrix_from_json(field(f, "Q")),
                               vector_from_json(field(f, "q")));
    }
    std::vector<HalfSpace> halfspaces;
    for (const auto& hs : field(j, "halfspaces")) {
      halfspaces.emplace_back(vector_from_json(field(hs, "h")), field(hs, "l").get<double>());
    }
    const json& op = field(j, "operator");
    if (field(op, "kind").get<std::string>() != "affine_shift") {
      throw SchemaError("unsupported operator kind");
    }
    ProblemInstance instance{std::move(C), std::move(bifunctions), std::move(halfspaces),
                             Operator::affine_shift(vector_from_json(field(op, "shift"))),
                             j.value("demicontractive_modulus", 0.0), std::nullopt};
    if (j.contains("known_solution") && !j.at("known_solution").is_null()) {
      instance.known_solution = vector_from_json(j.at("known_solution"));
    }
    if (j.contains("dimension") && j.at("dimension").get<Index>() != instance.dimension()) {
      throw SchemaError("declared dimension does not match the feasible set");
    }
    return instance;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed instance: ") + e.what());
  }
}

json config_to_json(const SolverConfig& config) {
  json alpha = {{"rule", config.alpha.name()}};
  if (config.alpha.rule() == AlphaRule::kCustom) alpha["values"] = config.alpha.custom_values();
  const auto w = config.bifunction_weights.values();
  const auto g = config.map_weights.values();
  return json{{"schema_version", kSchemaVersion},
              {"rho", config.rho},
              {"alpha", alpha},
              {"mann_coefficients", config.mann_coefficients},
              {"bifunction_weights", std::vector<double>(w.begin(), w.end())},
              {"map_weights", std::vector<double>(g.begin(), g.end())},
              {"inner_tol", config.inner_tol},
              {"max_iters", config.max_iters},
              {"stop_tol", config.stop_tol},
              {"target_distance", config.target_distance},
              {"seed", config.seed},
              {"workers", config.workers}};
}

SolverConfig config_from_json(const json& j, const ProblemInstance& instance) {
  check_version(j);
  SolverConfig config = default_config(instance);
  try {
    if (j.contains("rho")) config.rho = j.at("rho").get<double>();
    if (j.contains("alpha")) {
      const json& a = j.at("alpha");
      const std::string rule = field(a, "rule").get<std::string>();
      config.alpha = rule == "custom" ? AlphaSchedule::custom(doubles(field(a, "values")))
                                      : AlphaSchedule::from_name(rule);
    }
    if (j.contains("mann_coefficients")) {
      config.mann_coefficients = doubles(j.at("mann_coefficients"));
    }
    if (j.contains("bifunction_weights")) {
      config.bifunction_weights = SimplexWeights(doubles(j.at("bifunction_weights")));
    }
    if (j.contains("map_weights")) config.map_weights = SimplexWeights(doubles(j.at("map_weights")));
    config.inner_tol = j.value("inner_tol", config.inner_tol);
    config.max_iters = j.value("max_iters", config.max_iters);
    config.stop_tol = j.value("stop_tol", config.stop_tol);
    config.target_distance = j.value("target_distance", config.target_distance);
    config.seed = j.value("seed", config.seed);
    config.workers = j.value("workers", config.workers);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed config: ") + e.what());
  }
  return config;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace extravisc

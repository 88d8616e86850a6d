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

// JSON interchange for instances and solver configs.
//
// Matrices are objects {"rows": r, "cols": c, "data": [...]} with data in
// row-major order; vectors are plain arrays. Every document carries
// "schema_version" (currently 1).

#ifndef EXTRAVISC_SERIALIZATION_HPP
#define EXTRAVISC_SERIALIZATION_HPP

#include "extravisc/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>

namespace extravisc {

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const ProblemInstance& instance);
/// Throws SchemaError on a missing field, wrong version or bad shape.
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const SolverConfig& config);
/// Fields absent from `j` take the experiment defaults for `instance`.
SolverConfig config_from_json(const nlohmann::json& j, const ProblemInstance& instance);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace extravisc

#endif  // EXTRAVISC_SERIALIZATION_HPP

/*
 * Copyright 2026 The pkrls Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PKRLS_IO_HPP
#define PKRLS_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pkrls/estimators.hpp"
#include "pkrls/synth.hpp"

namespace pkrls {

using Json = nlohmann::json;

/// Model files carry this tag and version; readers reject anything else.
inline constexpr const char* kModelFormat = "pkrls-model";
inline constexpr int kModelVersion = 1;

Json box_to_json(const Box& box);
Box box_from_json(const Json& j);

Json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const Json& j);

Json partition_to_json(const Partition& partition);
Partition partition_from_json(const Json& j);

Json points_to_json(const PointSet& X);
PointSet points_from_json(const Json& j);

Json model_to_json(const AnyModel& model);
AnyModel model_from_json(const Json& j);

void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

/// Task description as it appears in experiment configs.
SyntheticTask task_from_json(const Json& j);
/// Resolved task, including the generated coefficient vectors.
Json task_to_json(const SyntheticTask& task);

/// Reads "x0,...,x{d-1},y" rows (header required). With labels = false the
/// file holds only the x columns.
struct Dataset {
    PointSet X;
    Vector y;
};
Dataset read_dataset_csv(const std::filesystem::path& path, bool labels = true);
void write_dataset_csv(const std::filesystem::path& path, const PointSet& X, const Vector* y);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace pkrls

#endif  // PKRLS_IO_HPP

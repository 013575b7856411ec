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

#ifndef PKRLS_ESTIMATORS_HPP
#define PKRLS_ESTIMATORS_HPP

#include <string>
#include <string_view>
#include <variant>

#include "pkrls/localized.hpp"

namespace pkrls {

enum class EstimatorKind { krls, localized, nystrom, localized_nystrom, distributed_avg };

std::string_view estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

using AnyModel = std::variant<KrlsModel, NystromModel, LocalizedModel, DistributedModel>;

double predict(const AnyModel& model, PointRef x);
Vector predict(const AnyModel& model, const PointSet& X);

/// Hyper-parameters of one fit; m and l are ignored where they do not apply.
struct EstimatorSettings {
    EstimatorKind kind = EstimatorKind::krls;
    double lambda = 0.0;
    std::size_t m = 1;
    std::size_t l = 0;
    std::uint64_t seed = 0;
};

/// Uniform grid with m cells in total (floor(m^(1/d)) per axis when d > 1).
Partition grid_partition_with_cells(const Box& box, std::size_t m);

AnyModel fit_estimator(const EstimatorSettings& settings, const PointSet& X, const Vector& y,
                       const KernelSpec& spec);

/// Same, with the partition for the localized estimators supplied.
AnyModel fit_estimator(const EstimatorSettings& settings, const PointSet& X, const Vector& y,
                       const KernelSpec& spec, const Partition& partition);

}  // namespace pkrls

#endif  // PKRLS_ESTIMATORS_HPP

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

#include "pkrls/estimators.hpp"

#include <cmath>

#include "pkrls/error.hpp"

namespace pkrls {

std::string_view estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::krls: return "krls";
        case EstimatorKind::localized: return "localized";
        case EstimatorKind::nystrom: return "nystrom";
        case EstimatorKind::localized_nystrom: return "localized_nystrom";
        case EstimatorKind::distributed_avg: return "distributed_avg";
    }
    return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
    for (auto k : {EstimatorKind::krls, EstimatorKind::localized, EstimatorKind::nystrom,
                   EstimatorKind::localized_nystrom, EstimatorKind::distributed_avg}) {
        if (estimator_name(k) == name) return k;
    }
    throw ContractError("unknown estimator '" + std::string(name) + "'");
}

double predict(const AnyModel& model, PointRef x) {
    return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

Vector predict(const AnyModel& model, const PointSet& X) {
    return std::visit([&](const auto& m) { return predict(m, X); }, model);
}

Partition grid_partition_with_cells(const Box& box, std::size_t m) {
    if (m == 0) throw ContractError("grid_partition_with_cells: m must be >= 1");
    const std::size_t d = box.dim();
    std::vector<std::size_t> cells(d, 1);
    if (d == 1) {
        cells[0] = m;
    } else {
        const auto per_axis = static_cast<std::size_t>(
            std::floor(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(d)) + 1e-9));
        std::fill(cells.begin(), cells.end(), std::max<std::size_t>(1, per_axis));
    }
    return Partition::grid(box, std::move(cells));
}

AnyModel fit_estimator(const EstimatorSettings& s, const PointSet& X, const Vector& y,
                       const KernelSpec& spec, const Partition& partition) {
    switch (s.kind) {
        case EstimatorKind::krls:
            return fit_krls(X, y, s.lambda, spec);
        case EstimatorKind::nystrom:
            return fit_nystrom(X, y, s.lambda, s.l, s.seed, spec);
        case EstimatorKind::localized:
            return fit_localized(X, y, partition, s.lambda, spec);
        case EstimatorKind::localized_nystrom:
            return fit_localized_nystrom(X, y, partition, s.lambda, s.l, s.seed, spec);
        case EstimatorKind::distributed_avg:
            return fit_distributed_average(X, y, s.m, s.lambda, spec, s.seed);
    }
    throw ContractError("fit_estimator: unknown estimator");
}

AnyModel fit_estimator(const EstimatorSettings& s, const PointSet& X, const Vector& y,
                       const KernelSpec& spec) {
    return fit_estimator(s, X, y, spec, grid_partition_with_cells(spec.domain, s.m));
}

}  // namespace pkrls

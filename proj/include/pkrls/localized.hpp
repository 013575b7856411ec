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

#ifndef PKRLS_LOCALIZED_HPP
#define PKRLS_LOCALIZED_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "pkrls/krls.hpp"
#include "pkrls/nystrom.hpp"
#include "pkrls/partition.hpp"

namespace pkrls {

/// Local estimator of an empty cell: the zero function.
struct ZeroModel {};

using LocalModel = std::variant<ZeroModel, KrlsModel, NystromModel>;

/**
 * Sum of per-cell estimators, each extended by zero outside its cell.
 *
 * Prediction at x only evaluates the model of the cell containing x. The
 * cell weights are kept for diagnostics and the direct-sum kernel; they do
 * not rescale predictions.
 */
struct LocalizedModel {
    Partition partition;
    std::vector<LocalModel> locals;
    double lambda = 0.0;
    CellStats cell_stats;
};

/// Per-cell KRLS with a shared lambda.
LocalizedModel fit_localized(const PointSet& X, const Vector& y, const Partition& partition,
                             double lambda, const std::vector<KernelSpec>& specs);
LocalizedModel fit_localized(const PointSet& X, const Vector& y, const Partition& partition,
                             double lambda, const KernelSpec& spec);

/// Per-cell plain Nystrom with l landmarks (n_j if the cell is smaller).
/// Cell j draws its landmarks with derive_seed(seed, j).
LocalizedModel fit_localized_nystrom(const PointSet& X, const Vector& y, const Partition& partition,
                                     double lambda, std::size_t l, std::uint64_t seed,
                                     const std::vector<KernelSpec>& specs);
LocalizedModel fit_localized_nystrom(const PointSet& X, const Vector& y, const Partition& partition,
                                     double lambda, std::size_t l, std::uint64_t seed,
                                     const KernelSpec& spec);

double predict(const LocalModel& model, PointRef x);
Vector predict(const LocalModel& model, const PointSet& X);

double predict(const LocalizedModel& model, PointRef x);
Vector predict(const LocalizedModel& model, const PointSet& X);

/// Number of cells whose local model is the zero model.
std::size_t zero_cell_count(const LocalizedModel& model);

/**
 * Reproducing kernel of the weighted direct sum:
 * K(x, x') = K_j(x, x') / p_j when both points lie in cell j, else 0.
 */
double direct_sum_kernel(const Partition& partition, const std::vector<KernelSpec>& specs,
                         const std::vector<double>& weights, PointRef x, PointRef xp);

/// Simple average of KRLS fits on disjoint chunks of the data.
struct DistributedModel {
    std::vector<KrlsModel> chunks;
};

/// Splits a seeded random permutation of [0, n) into m chunks whose sizes
/// differ by at most one.
std::vector<std::vector<std::size_t>> random_equal_split(std::size_t n, std::size_t m,
                                                         std::uint64_t seed);

DistributedModel fit_distributed_average(const PointSet& X, const Vector& y, std::size_t m,
                                         double lambda, const KernelSpec& spec, std::uint64_t seed);
DistributedModel fit_distributed_average(const PointSet& X, const Vector& y,
                                         const std::vector<std::vector<std::size_t>>& chunks,
                                         double lambda, const KernelSpec& spec);

double predict(const DistributedModel& model, PointRef x);
Vector predict(const DistributedModel& model, const PointSet& X);

}  // namespace pkrls

#endif  // PKRLS_LOCALIZED_HPP

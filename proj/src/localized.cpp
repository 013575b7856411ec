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

#include "pkrls/localized.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "pkrls/error.hpp"

namespace pkrls {

namespace {

template <typename Fit>
LocalizedModel fit_cells(const PointSet& X, const Vector& y, const Partition& partition, double lambda,
                         const std::vector<KernelSpec>& specs, Fit&& fit_cell) {
    if (X.rows() != y.size()) throw ContractError("localized fit: |X| != |y|");
    if (!(lambda > 0.0)) throw ContractError("localized fit: lambda must be > 0");
    if (specs.size() != partition.size()) {
        throw ContractError("localized fit: need one kernel spec per cell");
    }
    DatasetSplit split = split_dataset(partition, X, y);
    LocalizedModel model{partition, {}, lambda, std::move(split.stats)};
    model.locals.resize(partition.size());
    for (std::size_t j = 0; j < partition.size(); ++j) {
        if (model.cell_stats.counts[j] == 0) {
            log_warning("cell " + std::to_string(j) + " has no samples; using the zero estimator");
            model.locals[j] = ZeroModel{};
            continue;
        }
        try {
            model.locals[j] = fit_cell(j, split.inputs[j], split.labels[j], specs[j]);
        } catch (const CellFitError&) {
            throw;
        } catch (const std::exception& e) {
            throw CellFitError(j, e.what());
        }
    }
    return model;
}

}  // namespace

LocalizedModel fit_localized(const PointSet& X, const Vector& y, const Partition& partition,
                             double lambda, const std::vector<KernelSpec>& specs) {
    return fit_cells(X, y, partition, lambda, specs,
                     [lambda](std::size_t, const PointSet& Xj, const Vector& yj, const KernelSpec& s) {
                         return LocalModel{fit_krls(Xj, yj, lambda, s)};
                     });
}

LocalizedModel fit_localized(const PointSet& X, const Vector& y, const Partition& partition,
                             double lambda, const KernelSpec& spec) {
    return fit_localized(X, y, partition, lambda, std::vector<KernelSpec>(partition.size(), spec));
}

LocalizedModel fit_localized_nystrom(const PointSet& X, const Vector& y, const Partition& partition,
                                     double lambda, std::size_t l, std::uint64_t seed,
                                     const std::vector<KernelSpec>& specs) {
    if (l == 0) throw ContractError("fit_localized_nystrom: l must be >= 1");
    return fit_cells(
        X, y, partition, lambda, specs,
        [lambda, l, seed](std::size_t j, const PointSet& Xj, const Vector& yj, const KernelSpec& s) {
            const auto nj = static_cast<std::size_t>(Xj.rows());
            std::size_t lj = l;
            if (nj < l) {
                log_warning("cell " + std::to_string(j) + " has " + std::to_string(nj) +
                            " samples < l = " + std::to_string(l) + "; using l = n_j");
                lj = nj;
            }
            return LocalModel{fit_nystrom(Xj, yj, lambda, lj, derive_seed(seed, j), s)};
        });
}

LocalizedModel fit_localized_nystrom(const PointSet& X, const Vector& y, const Partition& partition,
                                     double lambda, std::size_t l, std::uint64_t seed,
                                     const KernelSpec& spec) {
    return fit_localized_nystrom(X, y, partition, lambda, l, seed,
                                 std::vector<KernelSpec>(partition.size(), spec));
}

double predict(const LocalModel& model, PointRef x) {
    return std::visit(
        [&](const auto& m) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ZeroModel>) {
                return 0.0;
            } else {
                return predict(m, x);
            }
        },
        model);
}

Vector predict(const LocalModel& model, const PointSet& X) {
    return std::visit(
        [&](const auto& m) -> Vector {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ZeroModel>) {
                return Vector::Zero(X.rows());
            } else {
                return predict(m, X);
            }
        },
        model);
}

double predict(const LocalizedModel& model, PointRef x) {
    return predict(model.locals[model.partition.assign(x)], x);
}

Vector predict(const LocalizedModel& model, const PointSet& X) {
    const DatasetSplit split = split_dataset(model.partition, X, Vector::Zero(X.rows()));
    Vector out(X.rows());
    for (std::size_t j = 0; j < model.locals.size(); ++j) {
        const auto& idx = split.stats.index_sets[j];
        if (idx.empty()) continue;
        const Vector pj = predict(model.locals[j], split.inputs[j]);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            out[static_cast<Eigen::Index>(idx[r])] = pj[static_cast<Eigen::Index>(r)];
        }
    }
    return out;
}

std::size_t zero_cell_count(const LocalizedModel& model) {
    return static_cast<std::size_t>(std::count_if(model.locals.begin(), model.locals.end(), [](const LocalModel& m) {
        return std::holds_alternative<ZeroModel>(m);
    }));
}

double direct_sum_kernel(const Partition& partition, const std::vector<KernelSpec>& specs,
                         const std::vector<double>& weights, PointRef x, PointRef xp) {
    if (specs.size() != partition.size() || weights.size() != partition.size()) {
        throw ContractError("direct_sum_kernel: need one spec and one weight per cell");
    }
    const std::size_t j = partition.assign(x);
    const std::size_t jp = partition.assign(xp);
    if (!(weights[j] > 0.0)) {
        throw ContractError("direct_sum_kernel: cell " + std::to_string(j) + " has zero weight");
    }
    if (j != jp) return 0.0;
    return eval_kernel(specs[j], x, xp) / weights[j];
}

std::vector<std::vector<std::size_t>> random_equal_split(std::size_t n, std::size_t m,
                                                         std::uint64_t seed) {
    if (m == 0) throw ContractError("random_equal_split: m must be >= 1");
    if (m > n) throw ContractError("random_equal_split: m > n");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<std::size_t>> chunks(m);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t begin = c * n / m;
        const std::size_t end = (c + 1) * n / m;
        chunks[c].assign(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                         perm.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return chunks;
}

DistributedModel fit_distributed_average(const PointSet& X, const Vector& y,
                                         const std::vector<std::vector<std::size_t>>& chunks,
                                         double lambda, const KernelSpec& spec) {
    if (X.rows() != y.size()) throw ContractError("fit_distributed_average: |X| != |y|");
    if (chunks.empty()) throw ContractError("fit_distributed_average: need at least one chunk");
    DistributedModel model;
    for (const auto& idx : chunks) {
        const auto nc = static_cast<Eigen::Index>(idx.size());
        PointSet Xc(nc, X.cols());
        Vector yc(nc);
        for (Eigen::Index r = 0; r < nc; ++r) {
            const std::size_t src = idx[static_cast<std::size_t>(r)];
            if (src >= static_cast<std::size_t>(X.rows())) {
                throw ContractError("fit_distributed_average: chunk index out of range");
            }
            Xc.row(r) = X.row(static_cast<Eigen::Index>(src));
            yc[r] = y[static_cast<Eigen::Index>(src)];
        }
        model.chunks.push_back(fit_krls(Xc, yc, lambda, spec));
    }
    return model;
}

DistributedModel fit_distributed_average(const PointSet& X, const Vector& y, std::size_t m,
                                         double lambda, const KernelSpec& spec, std::uint64_t seed) {
    return fit_distributed_average(X, y, random_equal_split(static_cast<std::size_t>(X.rows()), m, seed),
                                   lambda, spec);
}

double predict(const DistributedModel& model, PointRef x) {
    double s = 0.0;
    for (const auto& c : model.chunks) s += predict(c, x);
    return s / static_cast<double>(model.chunks.size());
}

Vector predict(const DistributedModel& model, const PointSet& X) {
    Vector s = Vector::Zero(X.rows());
    for (const auto& c : model.chunks) s += predict(c, X);
    return s / static_cast<double>(model.chunks.size());
}

}  // namespace pkrls

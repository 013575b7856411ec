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

#include "pkrls/nystrom.hpp"

#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "pkrls/error.hpp"
#include "pkrls/krls.hpp"
#include "pkrls/linalg.hpp"

namespace pkrls {

std::vector<std::size_t> sample_landmarks(std::size_t n, std::size_t l, std::uint64_t seed) {
    if (l == 0) throw ContractError("sample_landmarks: l must be >= 1");
    if (l > n) throw ContractError("sample_landmarks: l > n");
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; a hash map keeps memory O(l) for l << n.
    std::vector<std::size_t> out(l);
    if (2 * l >= n) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 0; i < l; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(perm[i], perm[pick(rng)]);
            out[i] = perm[i];
        }
        return out;
    }
    std::unordered_map<std::size_t, std::size_t> moved;
    auto at = [&](std::size_t k) {
        auto it = moved.find(k);
        return it == moved.end() ? k : it->second;
    };
    for (std::size_t i = 0; i < l; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        const std::size_t j = pick(rng);
        const std::size_t vi = at(i);
        const std::size_t vj = at(j);
        moved[j] = vi;
        moved[i] = vj;
        out[i] = vj;
    }
    return out;
}

NystromModel fit_nystrom_with_landmarks(const PointSet& X, const Vector& y, double lambda,
                                        std::vector<std::size_t> landmark_indices,
                                        const KernelSpec& spec) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (n == 0) throw EmptyInputError("fit_nystrom: no training points");
    if (static_cast<std::size_t>(y.size()) != n) throw ContractError("fit_nystrom: |X| != |y|");
    if (!(lambda > 0.0)) throw ContractError("fit_nystrom: lambda must be > 0");
    const std::size_t l = landmark_indices.size();
    if (l == 0 || l > n) throw ContractError("fit_nystrom: need 1 <= l <= n landmarks");
    std::unordered_set<std::size_t> seen;
    for (std::size_t idx : landmark_indices) {
        if (idx >= n || !seen.insert(idx).second) {
            throw ContractError("fit_nystrom: landmark indices must be distinct rows of X");
        }
    }

    NystromModel model;
    model.landmarks.resize(static_cast<Eigen::Index>(l), X.cols());
    for (std::size_t j = 0; j < l; ++j) {
        model.landmarks.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(landmark_indices[j]));
    }
    const Matrix Knl = cross_gram(spec, X, model.landmarks);
    const Matrix Kll = gram(spec, model.landmarks);

    // K_nl^T K_nl is accumulated on one triangle and mirrored so the system
    // matrix is symmetric to the last bit.
    const auto L = static_cast<Eigen::Index>(l);
    Matrix A = Matrix::Zero(L, L);
    A.selfadjointView<Eigen::Lower>().rankUpdate(Knl.transpose());
    mirror_lower(A);
    A.noalias() += (static_cast<double>(n) * lambda) * Kll;
    const Vector rhs = Knl.transpose() * y;

    model.alpha = pinv_solve(A, rhs);
    model.landmark_indices = std::move(landmark_indices);
    model.lambda = lambda;
    model.kernel = spec;
    return model;
}

NystromModel fit_nystrom(const PointSet& X, const Vector& y, double lambda, std::size_t l,
                         std::uint64_t seed, const KernelSpec& spec) {
    if (X.rows() == 0) throw EmptyInputError("fit_nystrom: no training points");
    auto idx = sample_landmarks(static_cast<std::size_t>(X.rows()), l, seed);
    NystromModel model = fit_nystrom_with_landmarks(X, y, lambda, std::move(idx), spec);
    model.seed = seed;
    return model;
}

double predict(const NystromModel& model, PointRef x) {
    return kernel_column(model.kernel, model.landmarks, x).dot(model.alpha);
}

Vector predict(const NystromModel& model, const PointSet& X) {
    return expansion_predict(model.kernel, model.landmarks, model.alpha, X);
}

}  // namespace pkrls

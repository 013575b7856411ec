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

#ifndef PKRLS_NYSTROM_HPP
#define PKRLS_NYSTROM_HPP

#include <cstdint>
#include <vector>

#include "pkrls/kernels.hpp"

namespace pkrls {

/// Plain Nystrom estimator f = sum_j alpha_j K(z_j, .) over l landmarks.
struct NystromModel {
    PointSet landmarks;
    std::vector<std::size_t> landmark_indices;  ///< rows of the training set
    Vector alpha;
    double lambda = 0.0;
    KernelSpec kernel;
    std::uint64_t seed = 0;
};

/// l distinct indices of [0, n), uniform over l-subsets, deterministic in seed.
std::vector<std::size_t> sample_landmarks(std::size_t n, std::size_t l, std::uint64_t seed);

/**
 * alpha = (K_nl^T K_nl + n lambda K_ll)^+ K_nl^T y with landmarks drawn by
 * sample_landmarks(n, l, seed).
 */
NystromModel fit_nystrom(const PointSet& X, const Vector& y, double lambda, std::size_t l,
                         std::uint64_t seed, const KernelSpec& spec);

/// Same solve with caller-chosen landmark rows.
NystromModel fit_nystrom_with_landmarks(const PointSet& X, const Vector& y, double lambda,
                                        std::vector<std::size_t> landmark_indices,
                                        const KernelSpec& spec);

double predict(const NystromModel& model, PointRef x);
Vector predict(const NystromModel& model, const PointSet& X);

}  // namespace pkrls

#endif  // PKRLS_NYSTROM_HPP

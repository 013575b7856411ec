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

// Reference computations for the tests. They avoid the library's solver
// and assembly paths: plain loops, closed forms and Householder QR.

#ifndef PKRLS_TESTS_ORACLES_HPP
#define PKRLS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double gaussian(double x, double z, double h) { return std::exp(-(x - z) * (x - z) / (2.0 * h * h)); }
inline double laplacian(double x, double z, double h) { return std::exp(-std::abs(x - z) / h); }
inline double brownian(double x, double z) { return x < z ? x : z; }

template <typename K>
MatrixXd gram1d(const VectorXd& x, const VectorXd& z, K k) {
    MatrixXd G(x.size(), z.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index j = 0; j < z.size(); ++j) G(i, j) = k(x[i], z[j]);
    }
    return G;
}

/// (K + lambda n I)^{-1} y by Householder QR.
inline VectorXd krls_alpha(const MatrixXd& K, const VectorXd& y, double lambda) {
    const auto n = K.rows();
    MatrixXd A = K + lambda * static_cast<double>(n) * MatrixXd::Identity(n, n);
    return A.colPivHouseholderQr().solve(y);
}

inline VectorXd uniform(std::size_t n, unsigned seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    VectorXd v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = u(rng);
    return v;
}

/// n x 1 point set from a list of scalars.
inline MatrixXd col(std::initializer_list<double> v) {
    MatrixXd X(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double e : v) X(i++, 0) = e;
    return X;
}

inline MatrixXd col(const VectorXd& v) { return MatrixXd(v); }

inline double max_abs_diff(const VectorXd& a, const VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle

#endif  // PKRLS_TESTS_ORACLES_HPP

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

#ifndef PKRLS_KRLS_HPP
#define PKRLS_KRLS_HPP

#include "pkrls/kernels.hpp"

namespace pkrls {

/**
 * Exact kernel regularized least squares.
 *
 * Minimizes (1/n) sum_i (f(x_i) - y_i)^2 + lambda ||f||_H^2, whose solution
 * is f = sum_j alpha_j K(x_j, .) with (K_n + lambda n I) alpha = y.
 */
struct KrlsModel {
    PointSet inputs;
    Vector alpha;
    double lambda = 0.0;
    KernelSpec kernel;
};

KrlsModel fit_krls(const PointSet& X, const Vector& y, double lambda, const KernelSpec& spec);

double predict(const KrlsModel& model, PointRef x);
Vector predict(const KrlsModel& model, const PointSet& X);

/// sum_j alpha_j K(c_j, x) for every row x of X, evaluated in row blocks.
Vector expansion_predict(const KernelSpec& spec, const PointSet& centers, const Vector& alpha,
                         const PointSet& X);

/**
 * Training objective (1/n) sum (f(x_i) - y_i)^2 + lambda ||f||_H^2 for
 * f = sum_j alpha_j K(c_j, .), with ||f||_H^2 = alpha^T K_cc alpha.
 */
double regularized_risk(const KernelSpec& spec, const PointSet& centers, const Vector& alpha,
                        const PointSet& X, const Vector& y, double lambda);

}  // namespace pkrls

#endif  // PKRLS_KRLS_HPP

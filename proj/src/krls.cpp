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

#include "pkrls/krls.hpp"

#include <algorithm>

#include "pkrls/error.hpp"
#include "pkrls/linalg.hpp"

namespace pkrls {

KrlsModel fit_krls(const PointSet& X, const Vector& y, double lambda, const KernelSpec& spec) {
    if (X.rows() == 0) throw EmptyInputError("fit_krls: no training points");
    if (X.rows() != y.size()) throw ContractError("fit_krls: |X| != |y|");
    if (!(lambda > 0.0)) throw ContractError("fit_krls: lambda must be > 0");

    const auto n = static_cast<double>(X.rows());
    Matrix K = gram(spec, X);
    KrlsModel model;
    model.alpha = spd_solve_inplace(K, lambda * n, y);
    model.inputs = X;
    model.lambda = lambda;
    model.kernel = spec;
    return model;
}

double predict(const KrlsModel& model, PointRef x) {
    return kernel_column(model.kernel, model.inputs, x).dot(model.alpha);
}

Vector predict(const KrlsModel& model, const PointSet& X) {
    return expansion_predict(model.kernel, model.inputs, model.alpha, X);
}

Vector expansion_predict(const KernelSpec& spec, const PointSet& centers, const Vector& alpha,
                         const PointSet& X) {
    if (centers.rows() != alpha.size()) throw ContractError("expansion_predict: |centers| != |alpha|");
    Vector out(X.rows());
    if (X.rows() == 0) return out;
    if (centers.rows() == 0) {
        check_domain(spec, X);
        out.setZero();
        return out;
    }
    // keep each block of the cross-Gram matrix around 32 MB
    const Eigen::Index block =
        std::max<Eigen::Index>(1, (Eigen::Index{1} << 22) / std::max<Eigen::Index>(1, centers.rows()));
    for (Eigen::Index start = 0; start < X.rows(); start += block) {
        const Eigen::Index len = std::min(block, X.rows() - start);
        out.segment(start, len) = cross_gram(spec, X.middleRows(start, len), centers) * alpha;
    }
    return out;
}

double regularized_risk(const KernelSpec& spec, const PointSet& centers, const Vector& alpha,
                        const PointSet& X, const Vector& y, double lambda) {
    if (X.rows() != y.size()) throw ContractError("regularized_risk: |X| != |y|");
    const Vector f = expansion_predict(spec, centers, alpha, X);
    const double fit = (f - y).squaredNorm() / static_cast<double>(X.rows());
    const double norm = centers.rows() == 0 ? 0.0 : alpha.dot(gram(spec, centers) * alpha);
    return fit + lambda * norm;
}

}  // namespace pkrls

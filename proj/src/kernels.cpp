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

#include "pkrls/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "pkrls/error.hpp"

namespace pkrls {

namespace {

// Points are laid out contiguously (d x n, column per point) before the
// inner loops so evaluation stays branch-light.
double eval_raw(const KernelSpec& s, const double* x, const double* z, Eigen::Index d) {
    switch (s.family) {
        case KernelFamily::gaussian: {
            double sq = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) {
                const double t = x[k] - z[k];
                sq += t * t;
            }
            return std::exp(-sq / (2.0 * s.bandwidth * s.bandwidth));
        }
        case KernelFamily::laplacian: {
            double sq = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) {
                const double t = x[k] - z[k];
                sq += t * t;
            }
            return std::exp(-std::sqrt(sq) / s.bandwidth);
        }
        case KernelFamily::brownian: {
            double v = 1.0;
            for (Eigen::Index k = 0; k < d; ++k) v *= std::min(x[k], z[k]);
            return v;
        }
        case KernelFamily::polynomial: {
            double dot = s.offset;
            for (Eigen::Index k = 0; k < d; ++k) dot += x[k] * z[k];
            double v = 1.0;
            for (int p = 0; p < s.degree; ++p) v *= dot;
            return v;
        }
    }
    return 0.0;
}

Matrix packed(const KernelSpec& spec, const PointSet& X, const char* what) {
    if (X.rows() == 0) throw EmptyInputError(std::string(what) + ": empty point set");
    if (static_cast<std::size_t>(X.cols()) != spec.dim()) {
        throw ContractError(std::string(what) + ": point dimension does not match kernel domain");
    }
    check_domain(spec, X);
    return X.transpose();
}

}  // namespace

std::string_view family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::laplacian: return "laplacian";
        case KernelFamily::brownian: return "brownian";
        case KernelFamily::polynomial: return "polynomial";
    }
    return "unknown";
}

KernelFamily parse_family(std::string_view name) {
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "laplacian") return KernelFamily::laplacian;
    if (name == "brownian") return KernelFamily::brownian;
    if (name == "polynomial") return KernelFamily::polynomial;
    throw ContractError("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::gaussian(double bandwidth, Box domain) {
    KernelSpec s{KernelFamily::gaussian, bandwidth, 1, 0.0, std::move(domain)};
    s.validate();
    return s;
}

KernelSpec KernelSpec::laplacian(double bandwidth, Box domain) {
    KernelSpec s{KernelFamily::laplacian, bandwidth, 1, 0.0, std::move(domain)};
    s.validate();
    return s;
}

KernelSpec KernelSpec::brownian(Box domain) {
    KernelSpec s{KernelFamily::brownian, 1.0, 1, 0.0, std::move(domain)};
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset, Box domain) {
    KernelSpec s{KernelFamily::polynomial, 1.0, degree, offset, std::move(domain)};
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (!domain.nondegenerate()) throw ContractError("kernel domain must be a nondegenerate box");
    switch (family) {
        case KernelFamily::gaussian:
        case KernelFamily::laplacian:
            if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
                throw ContractError("bandwidth must be positive");
            }
            break;
        case KernelFamily::brownian:
            if ((domain.lower.array() < 0.0).any() || (domain.upper.array() > 1.0).any()) {
                throw ContractError("brownian kernel requires a domain inside [0,1]^d");
            }
            break;
        case KernelFamily::polynomial:
            if (degree < 1) throw ContractError("polynomial degree must be >= 1");
            if (!(offset >= 0.0) || !std::isfinite(offset)) {
                throw ContractError("polynomial offset must be >= 0");
            }
            break;
    }
}

bool operator==(const KernelSpec& a, const KernelSpec& b) {
    return a.family == b.family && a.bandwidth == b.bandwidth && a.degree == b.degree &&
           a.offset == b.offset && a.domain == b.domain;
}

void check_domain(const KernelSpec& spec, const PointSet& X) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (!spec.domain.contains(X.row(i))) {
            throw DomainError("point " + std::to_string(i) + " lies outside the kernel domain");
        }
    }
}

double eval_kernel(const KernelSpec& spec, PointRef x, PointRef xp) {
    if (!spec.domain.contains(x) || !spec.domain.contains(xp)) {
        throw DomainError("eval_kernel: point outside the kernel domain");
    }
    const Eigen::RowVectorXd a = x;
    const Eigen::RowVectorXd b = xp;
    return eval_raw(spec, a.data(), b.data(), a.size());
}

Matrix gram(const KernelSpec& spec, const PointSet& X) {
    const Matrix P = packed(spec, X, "gram");
    const Eigen::Index n = P.cols();
    const Eigen::Index d = P.rows();
    Matrix G(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double* zj = P.col(j).data();
        for (Eigen::Index i = 0; i <= j; ++i) {
            G(i, j) = eval_raw(spec, P.col(i).data(), zj, d);
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) G(i, j) = G(j, i);
    }
    return G;
}

Matrix cross_gram(const KernelSpec& spec, const PointSet& X, const PointSet& Z) {
    const Matrix PX = packed(spec, X, "cross_gram");
    const Matrix PZ = packed(spec, Z, "cross_gram");
    const Eigen::Index d = PX.rows();
    Matrix C(PX.cols(), PZ.cols());
    for (Eigen::Index j = 0; j < PZ.cols(); ++j) {
        const double* zj = PZ.col(j).data();
        for (Eigen::Index i = 0; i < PX.cols(); ++i) {
            C(i, j) = eval_raw(spec, PX.col(i).data(), zj, d);
        }
    }
    return C;
}

Vector kernel_column(const KernelSpec& spec, const PointSet& Z, PointRef x) {
    if (!spec.domain.contains(x)) throw DomainError("kernel_column: point outside the kernel domain");
    const Eigen::RowVectorXd q = x;
    Vector k(Z.rows());
    Eigen::RowVectorXd z(Z.cols());
    for (Eigen::Index j = 0; j < Z.rows(); ++j) {
        z = Z.row(j);
        k[j] = eval_raw(spec, q.data(), z.data(), q.size());
    }
    return k;
}

double kernel_bound(const KernelSpec& spec) {
    spec.validate();
    const Box& b = spec.domain;
    switch (spec.family) {
        case KernelFamily::gaussian:
        case KernelFamily::laplacian:
            return 1.0;
        case KernelFamily::brownian:
            // min(x, x') <= x_k with equality on the diagonal at the top corner
            return b.upper.prod();
        case KernelFamily::polynomial: {
            // <x, x'> is bilinear, so its extremes over box x box sit at vertices
            // and separate coordinate-wise.
            double hi = 0.0;
            double lo = 0.0;
            for (Eigen::Index k = 0; k < b.lower.size(); ++k) {
                const double c[4] = {b.lower[k] * b.lower[k], b.lower[k] * b.upper[k],
                                     b.upper[k] * b.lower[k], b.upper[k] * b.upper[k]};
                hi += *std::max_element(c, c + 4);
                lo += *std::min_element(c, c + 4);
            }
            const double m = std::max(std::abs(hi + spec.offset), std::abs(lo + spec.offset));
            return std::pow(m, spec.degree);
        }
    }
    return 0.0;
}

}  // namespace pkrls

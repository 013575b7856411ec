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

#ifndef PKRLS_KERNELS_HPP
#define PKRLS_KERNELS_HPP

#include <string>
#include <string_view>

#include "pkrls/types.hpp"

namespace pkrls {

enum class KernelFamily {
    gaussian,    ///< exp(-|x - x'|^2 / (2 h^2))
    laplacian,   ///< exp(-|x - x'| / h)
    brownian,    ///< prod_k min(x_k, x'_k), domain inside [0,1]^d
    polynomial,  ///< (<x, x'> + c)^d
};

std::string_view family_name(KernelFamily family);
KernelFamily parse_family(std::string_view name);

/**
 * A positive-definite kernel together with the box it is defined on.
 *
 * The brownian family is the reference kernel for synthetic experiments:
 * on [0,1] with the uniform measure its Mercer eigenvalues are
 * ((k - 1/2) pi)^-2 with eigenfunctions sqrt(2) sin((k - 1/2) pi x).
 */
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;
    int degree = 1;
    double offset = 0.0;
    Box domain = Box::unit(1);

    static KernelSpec gaussian(double bandwidth, Box domain = Box::unit(1));
    static KernelSpec laplacian(double bandwidth, Box domain = Box::unit(1));
    static KernelSpec brownian(Box domain = Box::unit(1));
    static KernelSpec polynomial(int degree, double offset, Box domain = Box::unit(1));

    std::size_t dim() const { return domain.dim(); }

    /// Throws ContractError when parameters are out of range.
    void validate() const;
};

bool operator==(const KernelSpec& a, const KernelSpec& b);

/// K(x, x'). Throws DomainError if either point is outside the domain.
double eval_kernel(const KernelSpec& spec, PointRef x, PointRef xp);

/// n x n kernel matrix; the upper triangle is computed and mirrored.
Matrix gram(const KernelSpec& spec, const PointSet& X);

/// |X| x |Z| matrix with entries K(x_i, z_j).
Matrix cross_gram(const KernelSpec& spec, const PointSet& X, const PointSet& Z);

/// k(x) = (K(x, z_j))_j for a single query point.
Vector kernel_column(const KernelSpec& spec, const PointSet& Z, PointRef x);

/// Exact sup of |K(x, x')| over the domain (kappa squared).
double kernel_bound(const KernelSpec& spec);

/// Throws DomainError naming the first row of X outside the domain.
void check_domain(const KernelSpec& spec, const PointSet& X);

}  // namespace pkrls

#endif  // PKRLS_KERNELS_HPP

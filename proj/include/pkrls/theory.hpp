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

#ifndef PKRLS_THEORY_HPP
#define PKRLS_THEORY_HPP

#include <optional>
#include <vector>

#include "pkrls/types.hpp"

namespace pkrls {

/// Regularity, capacity and noise parameters of a learning problem.
struct ModelParams {
    double r = 0.5;      ///< source-condition smoothness, (0, 1/2]
    double gamma = 1.0;  ///< capacity exponent, (0, 1]
    double R = 1.0;      ///< source-condition radius
    double sigma = 1.0;  ///< Bernstein scale
    double M = 1.0;      ///< Bernstein bound
    std::optional<double> r_low;   ///< smoothness on the exceptional cells
    std::optional<double> r_high;  ///< smoothness elsewhere

    void validate() const;
};

/// Which smoothness drives a schedule: r, or r_high / r_low of the
/// exceptional-set setting.
enum class Smoothness { global, high, low };

double smoothness(const ModelParams& p, Smoothness which);

/// min(1, n^(-1/(2r+1+gamma))).
double lambda_schedule(std::size_t n, const ModelParams& p, Smoothness which = Smoothness::global);

/// min(1, (sigma^2 / (R^2 n))^(1/(2r+1+gamma))), the noise-scaled variant.
double lambda_schedule_scaled(std::size_t n, const ModelParams& p,
                              Smoothness which = Smoothness::global);

/// max(1, floor(n^(2r/(2r+1+gamma)))).
std::size_t m_schedule(std::size_t n, const ModelParams& p, Smoothness which = Smoothness::global);

/// max(1, ceil(n^((1+gamma)/(2r+1+gamma)))).
std::size_t l_schedule(std::size_t n, const ModelParams& p, Smoothness which = Smoothness::global);

/// (2r+1)/(2r+1+gamma), the predicted decay exponent of the excess risk.
double rate_exponent(const ModelParams& p, Smoothness which = Smoothness::global);

/**
 * Empirical effective dimension sum_i mu_i / (mu_i + lambda), where mu_i
 * are the eigenvalues of c K / n and c = 1 / kappa_sq when normalize_kappa
 * is set (c = 1 otherwise). Negative round-off eigenvalues count as 0.
 */
double effective_dimension(const Matrix& K, double lambda, bool normalize_kappa = false,
                           double kappa_sq = 1.0);

/// sum_i mu_i / (mu_i + lambda) for a given (operator) spectrum.
double effective_dimension_from_spectrum(const Vector& spectrum, double lambda);

/// 1 + (2/(n lambda) + sqrt(N / (n lambda)))^2
double b_quantity(double n, double lambda, double eff_dim);

/// Sample size beyond which B_{n/m}(T_j, lambda_n) <= 2 for every cell.
double n0_sufficient_value(std::size_t m, const ModelParams& p, double p_max, double c_gamma);
std::size_t n0_sufficient(std::size_t m, const ModelParams& p, double p_max, double c_gamma);

struct SumCheck {
    double lhs = 0.0;  ///< sum_j N(T_j, p_j lambda)
    double rhs = 0.0;  ///< N(T, lambda) with spec(T) = union_j spec(T_j) / p_j
    double gap = 0.0;
};

/// Effective dimension of the direct sum against the sum of local ones.
SumCheck effective_dimension_sum_check(const std::vector<Vector>& local_spectra,
                                       const std::vector<double>& p, double lambda);

/**
 * Plug-in comparison of m sum_j p_j N(T_j, lambda) against N(T, m lambda)
 * from empirical Gram matrices. It reports the two sides; finite samples
 * cannot certify the asymptotic compatibility condition.
 */
struct CapacityDiagnostic {
    double local_side = 0.0;
    double global_side = 0.0;
    double ratio = 0.0;
};

CapacityDiagnostic capacity_compatibility(const std::vector<Matrix>& local_grams,
                                          const std::vector<double>& p, const Matrix& global_gram,
                                          double lambda);

}  // namespace pkrls

#endif  // PKRLS_THEORY_HPP

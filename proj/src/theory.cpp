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

#include "pkrls/theory.hpp"

#include <algorithm>
#include <cmath>

#include "pkrls/error.hpp"
#include "pkrls/linalg.hpp"

namespace pkrls {

namespace {

// n^e through log2 so that powers of two come out exact.
double power_of(std::size_t n, double e) {
    return std::exp2(std::log2(static_cast<double>(n)) * e);
}

// Guards floor/ceil against 15.999999999 style round-off.
constexpr double kRoundSlack = 1e-12;

void require_n(std::size_t n, const char* what) {
    if (n < 1) throw ContractError(std::string(what) + ": n must be >= 1");
}

}  // namespace

void ModelParams::validate() const {
    if (!(r > 0.0 && r <= 0.5)) throw ContractError("ModelParams: r must lie in (0, 1/2]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("ModelParams: gamma must lie in (0, 1]");
    if (!(R > 0.0) || !(sigma > 0.0) || !(M > 0.0)) {
        throw ContractError("ModelParams: R, sigma, M must be positive");
    }
    if (r_low.has_value() != r_high.has_value()) {
        throw ContractError("ModelParams: r_low and r_high come together");
    }
    if (r_low) {
        if (!(*r_low > 0.0 && *r_low <= 0.5) || !(*r_high > 0.0 && *r_high <= 0.5)) {
            throw ContractError("ModelParams: r_low, r_high must lie in (0, 1/2]");
        }
        if (!(*r_low < *r_high)) throw ContractError("ModelParams: r_low must be < r_high");
    }
}

double smoothness(const ModelParams& p, Smoothness which) {
    switch (which) {
        case Smoothness::global: return p.r;
        case Smoothness::high:
            if (!p.r_high) throw ContractError("smoothness: r_high not set");
            return *p.r_high;
        case Smoothness::low:
            if (!p.r_low) throw ContractError("smoothness: r_low not set");
            return *p.r_low;
    }
    return p.r;
}

double lambda_schedule(std::size_t n, const ModelParams& p, Smoothness which) {
    require_n(n, "lambda_schedule");
    const double r = smoothness(p, which);
    return std::min(1.0, power_of(n, -1.0 / (2.0 * r + 1.0 + p.gamma)));
}

double lambda_schedule_scaled(std::size_t n, const ModelParams& p, Smoothness which) {
    require_n(n, "lambda_schedule_scaled");
    const double r = smoothness(p, which);
    const double base = p.sigma * p.sigma / (p.R * p.R * static_cast<double>(n));
    return std::min(1.0, std::pow(base, 1.0 / (2.0 * r + 1.0 + p.gamma)));
}

std::size_t m_schedule(std::size_t n, const ModelParams& p, Smoothness which) {
    require_n(n, "m_schedule");
    const double r = smoothness(p, which);
    const double v = power_of(n, 2.0 * r / (2.0 * r + 1.0 + p.gamma));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(v * (1.0 + kRoundSlack))));
}

std::size_t l_schedule(std::size_t n, const ModelParams& p, Smoothness which) {
    require_n(n, "l_schedule");
    const double r = smoothness(p, which);
    const double v = power_of(n, (1.0 + p.gamma) / (2.0 * r + 1.0 + p.gamma));
    const auto l = static_cast<std::size_t>(std::ceil(v * (1.0 - kRoundSlack)));
    return std::clamp<std::size_t>(l, 1, n);
}

double rate_exponent(const ModelParams& p, Smoothness which) {
    const double r = smoothness(p, which);
    return (2.0 * r + 1.0) / (2.0 * r + 1.0 + p.gamma);
}

double effective_dimension_from_spectrum(const Vector& spectrum, double lambda) {
    if (!(lambda > 0.0)) throw ContractError("effective_dimension: lambda must be > 0");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        const double mu = std::max(0.0, spectrum[i]);
        acc += mu / (mu + lambda);
    }
    return acc;
}

double effective_dimension(const Matrix& K, double lambda, bool normalize_kappa, double kappa_sq) {
    if (!(lambda > 0.0)) throw ContractError("effective_dimension: lambda must be > 0");
    if (K.rows() == 0) return 0.0;
    double c = 1.0;
    if (normalize_kappa) {
        if (!(kappa_sq > 0.0)) throw ContractError("effective_dimension: kappa_sq must be > 0");
        c = 1.0 / kappa_sq;
    }
    const Vector mu = eigvalsh(K) * (c / static_cast<double>(K.rows()));
    return effective_dimension_from_spectrum(mu, lambda);
}

double b_quantity(double n, double lambda, double eff_dim) {
    if (!(n > 0.0) || !(lambda > 0.0)) throw ContractError("b_quantity: n and lambda must be > 0");
    if (eff_dim < 0.0) throw ContractError("b_quantity: effective dimension must be >= 0");
    const double nl = n * lambda;
    const double t = 2.0 / nl + std::sqrt(eff_dim / nl);
    return 1.0 + t * t;
}

double n0_sufficient_value(std::size_t m, const ModelParams& p, double p_max, double c_gamma) {
    if (m < 1) throw ContractError("n0_sufficient: m must be >= 1");
    if (!(p_max > 0.0 && p_max <= 1.0)) throw ContractError("n0_sufficient: p_max must lie in (0, 1]");
    if (!(c_gamma > 0.0)) throw ContractError("n0_sufficient: C_gamma must be > 0");
    const double r = p.r;
    const double g = p.gamma;
    const double ratio = p.R / p.sigma;
    const double outer = (2.0 * r + g + 1.0) / (2.0 * r);
    const double first = std::pow(ratio, 2.0 / (2.0 * r + g));
    const double second = std::pow(p_max * c_gamma, outer) * std::pow(ratio, 2.0 * (g + 1.0) / (2.0 * r));
    return std::pow(4.0 * static_cast<double>(m), outer) * std::max(first, second);
}

std::size_t n0_sufficient(std::size_t m, const ModelParams& p, double p_max, double c_gamma) {
    const double v = n0_sufficient_value(m, p, p_max, c_gamma);
    return static_cast<std::size_t>(std::ceil(v * (1.0 - kRoundSlack)));
}

SumCheck effective_dimension_sum_check(const std::vector<Vector>& local_spectra,
                                       const std::vector<double>& p, double lambda) {
    if (local_spectra.size() != p.size() || p.empty()) {
        throw ContractError("effective_dimension_sum_check: one weight per local spectrum");
    }
    double total = 0.0;
    for (double w : p) {
        if (!(w > 0.0)) throw ContractError("effective_dimension_sum_check: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ContractError("effective_dimension_sum_check: weights must sum to 1");
    }
    SumCheck out;
    for (std::size_t j = 0; j < p.size(); ++j) {
        out.lhs += effective_dimension_from_spectrum(local_spectra[j], p[j] * lambda);
        out.rhs += effective_dimension_from_spectrum(local_spectra[j] / p[j], lambda);
    }
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

CapacityDiagnostic capacity_compatibility(const std::vector<Matrix>& local_grams,
                                          const std::vector<double>& p, const Matrix& global_gram,
                                          double lambda) {
    if (local_grams.size() != p.size() || p.empty()) {
        throw ContractError("capacity_compatibility: one weight per local Gram matrix");
    }
    const auto m = static_cast<double>(p.size());
    CapacityDiagnostic d;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (local_grams[j].rows() == 0) continue;
        d.local_side += p[j] * effective_dimension(local_grams[j], lambda);
    }
    d.local_side *= m;
    d.global_side = effective_dimension(global_gram, m * lambda);
    d.ratio = d.global_side > 0.0 ? d.local_side / d.global_side : INFINITY;
    return d;
}

}  // namespace pkrls

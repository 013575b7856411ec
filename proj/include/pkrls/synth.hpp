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

#ifndef PKRLS_SYNTH_HPP
#define PKRLS_SYNTH_HPP

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "pkrls/kernels.hpp"
#include "pkrls/partition.hpp"
#include "pkrls/theory.hpp"

namespace pkrls {

/// Mercer eigenvalue ((k - 1/2) pi)^-2 of the brownian kernel, k >= 1.
double brownian_eigenvalue(std::size_t k);

/**
 * f(x) = sum_k c_k sqrt(2) sin((k - 1/2) pi x) on [0,1], built in the
 * eigenbasis of the brownian kernel with
 * c_k = scale * mu_k^(r + 1/2) * k^-0.51 and scale chosen so that
 * ||T^-r f||_H^2 = sum_k c_k^2 mu_k^-(2r+1) = R^2.
 */
struct SobolevTarget {
    double r = 0.5;
    double R = 1.0;
    double scale = 0.0;
    Vector coefficients;
    /// sup-norm of the series tail dropped by the truncation
    double tail_sup_estimate = 0.0;

    double operator()(double x) const;
};

SobolevTarget make_sobolev_target(double r, double R, std::size_t truncation = 200);

/// sum_k c_k^2 mu_k^-(2r+1)
double source_norm_sq(const SobolevTarget& target);

/// Cell-wise target: on each grid cell a SobolevTarget in local coordinates
/// u = (x - a_j) / (b_j - a_j), smoothness r_low on the exceptional cells
/// and r_high elsewhere. Continuity across cells is not imposed.
struct PiecewiseTarget {
    double r_low = 0.0;
    double r_high = 0.0;
    double R_low = 1.0;
    double R_high = 1.0;
    Partition partition = Partition::grid(Box::unit(1), {1});
    std::vector<std::size_t> exceptional;
    std::vector<SobolevTarget> cells;

    double operator()(double x) const;
};

PiecewiseTarget make_piecewise_target(double r_low, double r_high, double R_low, double R_high,
                                      const Partition& partition, std::vector<std::size_t> exceptional,
                                      std::size_t truncation = 200);

struct ConstantTarget {
    double value = 0.0;
};

using Target = std::variant<SobolevTarget, PiecewiseTarget, ConstantTarget>;

enum class NoiseKind { none, gaussian, uniform_bounded };

/// Additive label noise; gaussian(sigma) satisfies Bern(sigma, sigma) and
/// uniform_bounded(M) satisfies |eps| <= M.
struct Noise {
    NoiseKind kind = NoiseKind::none;
    double scale = 0.0;
};

/// Regression task on a one-dimensional box with uniform marginal.
struct SyntheticTask {
    Box domain = Box::unit(1);
    Target target;
    Noise noise;
    KernelSpec kernel = KernelSpec::brownian();
    double gamma = 0.5;

    double truth(PointRef x) const;
    Vector truth(const PointSet& X) const;
    /// r (or r_low/r_high), gamma, R and the Bernstein constants.
    ModelParams params() const;
};

SyntheticTask make_sobolev_task(double r, double R, Noise noise, std::size_t truncation = 200);

/// sum of the uniform-marginal measure of the exceptional cells
double exceptional_mass(const PiecewiseTarget& target);

/// mass <= (R_high / R_low)^2 lambda_n^(2 (r_high - r_low)) with lambda_n
/// from the r_high schedule at n.
bool exceptional_mass_admissible(const PiecewiseTarget& target, double gamma, std::size_t n);

PointSet gen_inputs(const SyntheticTask& task, std::size_t n, std::uint64_t seed);
Vector sample_labels(const SyntheticTask& task, const PointSet& X, std::uint64_t seed);

using BatchPredictor = std::function<Vector(const PointSet&)>;

/// Monte Carlo estimate of ||f_hat - f_rho||^2 in L2 of the marginal.
double mise_estimate(const BatchPredictor& predictor, const SyntheticTask& task, std::size_t n_test,
                     std::uint64_t seed);

/// Global mean squared error against sum_j (n'_j / n) * (cell mean squared
/// error) on the same sample.
struct MiseDecomposition {
    double global = 0.0;
    double by_cells = 0.0;
    std::vector<double> cell_mse;
    std::vector<std::size_t> cell_counts;
};

MiseDecomposition decompose_mise(const Vector& predictions, const Vector& truth,
                                 const std::vector<std::size_t>& assignment, std::size_t cell_count);

}  // namespace pkrls

#endif  // PKRLS_SYNTH_HPP

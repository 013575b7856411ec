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

#include "pkrls/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pkrls/error.hpp"

namespace pkrls {

namespace {

constexpr double kSlack = 0.51;

// sum_k c_k sqrt(2) sin((k - 1/2) pi x) via the three-term recurrence
// s_{k+1} = 2 cos(pi x) s_k - s_{k-1}.
double eval_series(const Vector& c, double x) {
    if (c.size() == 0) return 0.0;
    const double theta = std::numbers::pi * x;
    const double two_cos = 2.0 * std::cos(theta);
    double prev = -std::sin(0.5 * theta);  // k = 0 term: sin(-theta/2)
    double cur = std::sin(0.5 * theta);
    double s = c[0] * cur;
    for (Eigen::Index k = 1; k < c.size(); ++k) {
        const double next = two_cos * cur - prev;
        prev = cur;
        cur = next;
        s += c[k] * cur;
    }
    return std::numbers::sqrt2 * s;
}

}  // namespace

double brownian_eigenvalue(std::size_t k) {
    if (k == 0) throw ContractError("brownian_eigenvalue: k starts at 1");
    const double t = (static_cast<double>(k) - 0.5) * std::numbers::pi;
    return 1.0 / (t * t);
}

double SobolevTarget::operator()(double x) const { return eval_series(coefficients, x); }

SobolevTarget make_sobolev_target(double r, double R, std::size_t truncation) {
    if (!(r > 0.0 && r <= 0.5)) throw ContractError("make_sobolev_target: r must lie in (0, 1/2]");
    if (!(R > 0.0)) throw ContractError("make_sobolev_target: R must be > 0");
    if (truncation < 1) throw ContractError("make_sobolev_target: truncation must be >= 1");

    SobolevTarget t;
    t.r = r;
    t.R = R;
    t.coefficients.resize(static_cast<Eigen::Index>(truncation));
    // with the unscaled profile each term of the source sum is k^-1.02
    double sum = 0.0;
    for (std::size_t k = 1; k <= truncation; ++k) {
        const double mu = brownian_eigenvalue(k);
        const double c = std::pow(mu, r + 0.5) * std::pow(static_cast<double>(k), -kSlack);
        t.coefficients[static_cast<Eigen::Index>(k - 1)] = c;
        sum += c * c * std::pow(mu, -(2.0 * r + 1.0));
    }
    t.scale = R / std::sqrt(sum);
    t.coefficients *= t.scale;

    // |c_k| sqrt(2) summed over the dropped modes: direct sum over a long
    // stretch, then the integral of the k^-(2r+1.51) envelope.
    const std::size_t stretch = 100000;
    double tail = 0.0;
    for (std::size_t k = truncation + 1; k <= truncation + stretch; ++k) {
        tail += std::pow(brownian_eigenvalue(k), r + 0.5) * std::pow(static_cast<double>(k), -kSlack);
    }
    const double p = 2.0 * r + 1.0 + kSlack;
    const double kend = static_cast<double>(truncation + stretch);
    tail += std::pow(std::numbers::pi, -(2.0 * r + 1.0)) * std::pow(kend, 1.0 - p) / (p - 1.0);
    t.tail_sup_estimate = std::numbers::sqrt2 * t.scale * tail;
    return t;
}

double source_norm_sq(const SobolevTarget& target) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < target.coefficients.size(); ++k) {
        const double c = target.coefficients[k];
        s += c * c * std::pow(brownian_eigenvalue(static_cast<std::size_t>(k + 1)), -(2.0 * target.r + 1.0));
    }
    return s;
}

double PiecewiseTarget::operator()(double x) const {
    Point p(1);
    p[0] = x;
    const std::size_t j = partition.assign(p);
    const Box b = partition.cell_box(j);
    const double u = (x - b.lower[0]) / (b.upper[0] - b.lower[0]);
    return cells[j](u);
}

PiecewiseTarget make_piecewise_target(double r_low, double r_high, double R_low, double R_high,
                                      const Partition& partition, std::vector<std::size_t> exceptional,
                                      std::size_t truncation) {
    if (!partition.is_grid() || partition.domain().dim() != 1) {
        throw ContractError("make_piecewise_target: needs a one-dimensional grid partition");
    }
    if (!(r_low <= r_high)) throw ContractError("make_piecewise_target: r_low must be <= r_high");
    PiecewiseTarget t;
    t.r_low = r_low;
    t.r_high = r_high;
    t.R_low = R_low;
    t.R_high = R_high;
    t.partition = partition;
    std::vector<bool> is_exc(partition.size(), false);
    for (std::size_t j : exceptional) {
        if (j >= partition.size()) throw ContractError("make_piecewise_target: exceptional cell out of range");
        is_exc[j] = true;
    }
    t.exceptional = std::move(exceptional);
    const SobolevTarget rough = make_sobolev_target(r_low, R_low, truncation);
    const SobolevTarget smooth = make_sobolev_target(r_high, R_high, truncation);
    t.cells.reserve(partition.size());
    for (std::size_t j = 0; j < partition.size(); ++j) t.cells.push_back(is_exc[j] ? rough : smooth);
    return t;
}

double SyntheticTask::truth(PointRef x) const {
    if (!domain.contains(x)) throw DomainError("truth: point outside the task domain");
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ConstantTarget>) {
                return f.value;
            } else {
                return f(x[0]);
            }
        },
        target);
}

Vector SyntheticTask::truth(const PointSet& X) const {
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = truth(PointRef(X.row(i)));
    return out;
}

ModelParams SyntheticTask::params() const {
    ModelParams p;
    p.gamma = gamma;
    const double level = noise.kind == NoiseKind::none ? 0.0 : noise.scale;
    p.sigma = level > 0.0 ? level : 1.0;
    p.M = p.sigma;
    if (const auto* s = std::get_if<SobolevTarget>(&target)) {
        p.r = s->r;
        p.R = s->R;
    } else if (const auto* pw = std::get_if<PiecewiseTarget>(&target)) {
        p.r = pw->r_low;
        p.R = std::max(pw->R_low, pw->R_high);
        if (pw->r_low < pw->r_high) {
            p.r_low = pw->r_low;
            p.r_high = pw->r_high;
        }
    }
    return p;
}

SyntheticTask make_sobolev_task(double r, double R, Noise noise, std::size_t truncation) {
    SyntheticTask t;
    t.target = make_sobolev_target(r, R, truncation);
    t.noise = noise;
    t.kernel = KernelSpec::brownian();
    t.gamma = 0.5;
    return t;
}

double exceptional_mass(const PiecewiseTarget& target) {
    const double total = target.partition.domain().volume();
    double mass = 0.0;
    for (std::size_t j : target.exceptional) mass += target.partition.cell_box(j).volume() / total;
    return mass;
}

bool exceptional_mass_admissible(const PiecewiseTarget& target, double gamma, std::size_t n) {
    ModelParams p;
    p.r = target.r_high;
    p.gamma = gamma;
    const double lam = lambda_schedule(n, p);
    const double ratio = target.R_high / target.R_low;
    return exceptional_mass(target) <= ratio * ratio * std::pow(lam, 2.0 * (target.r_high - target.r_low));
}

PointSet gen_inputs(const SyntheticTask& task, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(task.domain.dim());
    PointSet X(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            X(i, k) = task.domain.lower[k] + (task.domain.upper[k] - task.domain.lower[k]) * unit(rng);
        }
    }
    return X;
}

Vector sample_labels(const SyntheticTask& task, const PointSet& X, std::uint64_t seed) {
    Vector y = task.truth(X);
    if (task.noise.kind == NoiseKind::none || task.noise.scale == 0.0) return y;
    if (!(task.noise.scale > 0.0)) throw ContractError("sample_labels: noise scale must be >= 0");
    std::mt19937_64 rng(seed);
    if (task.noise.kind == NoiseKind::gaussian) {
        std::normal_distribution<double> eps(0.0, task.noise.scale);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += eps(rng);
    } else {
        std::uniform_real_distribution<double> eps(-task.noise.scale, task.noise.scale);
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += eps(rng);
    }
    return y;
}

double mise_estimate(const BatchPredictor& predictor, const SyntheticTask& task, std::size_t n_test,
                     std::uint64_t seed) {
    if (n_test == 0) throw ContractError("mise_estimate: n_test must be >= 1");
    const PointSet Xt = gen_inputs(task, n_test, seed);
    const Vector pred = predictor(Xt);
    if (pred.size() != Xt.rows()) throw ContractError("mise_estimate: predictor returned wrong length");
    return (pred - task.truth(Xt)).squaredNorm() / static_cast<double>(n_test);
}

MiseDecomposition decompose_mise(const Vector& predictions, const Vector& truth,
                                 const std::vector<std::size_t>& assignment, std::size_t cell_count) {
    if (predictions.size() != truth.size() || static_cast<std::size_t>(truth.size()) != assignment.size()) {
        throw ContractError("decompose_mise: length mismatch");
    }
    if (truth.size() == 0) throw ContractError("decompose_mise: empty sample");
    MiseDecomposition d;
    d.cell_mse.assign(cell_count, 0.0);
    d.cell_counts.assign(cell_count, 0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const double e = predictions[static_cast<Eigen::Index>(i)] - truth[static_cast<Eigen::Index>(i)];
        d.cell_mse[assignment[i]] += e * e;
        ++d.cell_counts[assignment[i]];
        d.global += e * e;
    }
    const auto n = static_cast<double>(assignment.size());
    d.global /= n;
    for (std::size_t j = 0; j < cell_count; ++j) {
        if (d.cell_counts[j] == 0) continue;
        d.cell_mse[j] /= static_cast<double>(d.cell_counts[j]);
        d.by_cells += static_cast<double>(d.cell_counts[j]) / n * d.cell_mse[j];
    }
    return d;
}

}  // namespace pkrls

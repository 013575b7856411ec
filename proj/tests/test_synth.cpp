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

#include <doctest.h>

#include "oracles.hpp"
#include "pkrls/error.hpp"
#include "pkrls/synth.hpp"

using namespace pkrls;
using oracle::col;

namespace {

// direct summation, no recurrence
double series(const Vector& c, double x) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) s += c[k] * std::sqrt(2.0) * std::sin((k + 0.5) * M_PI * x);
    return s;
}

double source_sum(const Vector& c, double r) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        const double mu = 1.0 / std::pow((k + 0.5) * M_PI, 2);
        s += c[k] * c[k] / std::pow(mu, 2.0 * r + 1.0);
    }
    return s;
}

SyntheticTask sobolev_task(Noise noise = {}) { return make_sobolev_task(0.5, 1.0, noise); }

}  // namespace

TEST_CASE("brownian eigenvalues") {
    CHECK(brownian_eigenvalue(1) == doctest::Approx(4.0 / (M_PI * M_PI)).epsilon(1e-15));
    CHECK(brownian_eigenvalue(3) == doctest::Approx(1.0 / (6.25 * M_PI * M_PI)).epsilon(1e-15));
    CHECK_THROWS_AS(brownian_eigenvalue(0), ContractError);
}

TEST_CASE("single-mode target") {
    const SobolevTarget t = make_sobolev_target(0.3, 2.0, 1);
    CHECK(t.coefficients.size() == 1);
    CHECK(std::sqrt(source_norm_sq(t)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t(0.4) == doctest::Approx(t.coefficients[0] * std::sqrt(2.0) * std::sin(0.2 * M_PI)).epsilon(1e-14));
}

TEST_CASE("source norm equals R^2 by direct summation") {
    for (double r : {0.05, 0.1, 0.25, 0.4, 0.5}) {
        for (double R : {0.3, 1.0, 5.0}) {
            const SobolevTarget t = make_sobolev_target(r, R, 200);
            CHECK(std::abs(source_sum(t.coefficients, r) - R * R) <= 1e-10 * R * R);
        }
    }
}

TEST_CASE("r = 1/2 coefficients decay like k^-2.51") {
    const SobolevTarget t = make_sobolev_target(0.5, 1.0, 4000);
    const double slope = std::log(t.coefficients[3999] / t.coefficients[1999]) / std::log(4000.0 / 2000.0);
    CHECK(slope == doctest::Approx(-2.51).epsilon(1e-3));
    // c_k / (mu_k k^-0.51) is constant
    for (std::size_t k : {1, 10, 100}) {
        const double ratio = t.coefficients[k - 1] / (brownian_eigenvalue(k) * std::pow(double(k), -0.51));
        CHECK(ratio == doctest::Approx(t.scale).epsilon(1e-13));
    }
}

TEST_CASE("recurrence evaluation matches direct summation") {
    const SobolevTarget t = make_sobolev_target(0.2, 1.0, 200);
    for (double x : {0.0, 0.013, 0.25, 0.5, 0.77, 0.999, 1.0}) CHECK(t(x) == doctest::Approx(series(t.coefficients, x)).epsilon(1e-11));
}

TEST_CASE("truncation tail bound dominates the measured truncation error") {
    const SobolevTarget t = make_sobolev_target(0.5, 1.0, 50);
    const SobolevTarget big = make_sobolev_target(0.5, 1.0, 5000);
    // same profile; rescale the long one to the short one's constant
    const Vector c = big.coefficients * (t.scale / big.scale);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        worst = std::max(worst, std::abs(series(c, x) - t(x)));
    }
    CHECK(t.tail_sup_estimate > 0.0);
    CHECK(worst <= t.tail_sup_estimate);
}

TEST_CASE("constructor contracts") {
    CHECK_THROWS_AS(make_sobolev_target(0.0, 1.0), ContractError);
    CHECK_THROWS_AS(make_sobolev_target(0.6, 1.0), ContractError);
    CHECK_THROWS_AS(make_sobolev_target(0.5, 1.0, 0), ContractError);
}

TEST_CASE("piecewise target") {
    const Partition cells = Partition::grid(Box::unit(1), {4});
    SUBCASE("no exceptional cells: each cell is the Sobolev target in local coordinates") {
        const PiecewiseTarget t = make_piecewise_target(0.1, 0.5, 1.0, 1.0, cells, {});
        const SobolevTarget s = make_sobolev_target(0.5, 1.0);
        CHECK(t(0.3) == doctest::Approx(s(0.2)).epsilon(1e-13));
        CHECK(t(0.9) == doctest::Approx(s(0.6)).epsilon(1e-13));
        CHECK(exceptional_mass(t) == 0.0);
    }
    SUBCASE("equal smoothness everywhere") {
        const PiecewiseTarget t = make_piecewise_target(0.3, 0.3, 1.0, 1.0, cells, {1, 2});
        for (double x : {0.1, 0.3, 0.6, 0.8}) {
            const double u = x * 4.0 - std::floor(x * 4.0);
            CHECK(t(x) == doctest::Approx(make_sobolev_target(0.3, 1.0)(u)).epsilon(1e-13));
        }
    }
    SUBCASE("exceptional cells use the rough component") {
        const PiecewiseTarget t = make_piecewise_target(0.1, 0.5, 2.0, 1.0, cells, {2});
        CHECK(t(0.6) == doctest::Approx(make_sobolev_target(0.1, 2.0)(0.4)).epsilon(1e-13));
        CHECK(t(0.1) == doctest::Approx(make_sobolev_target(0.5, 1.0)(0.4)).epsilon(1e-13));
    }
    SUBCASE("exceptional mass is the cell measure") {
        const Partition g32 = Partition::grid(Box::unit(1), {32});
        CHECK(std::abs(exceptional_mass(make_piecewise_target(0.1, 0.5, 1, 1, g32, {5})) - 1.0 / 32) <= 1e-12);
        CHECK(std::abs(exceptional_mass(make_piecewise_target(0.1, 0.5, 1, 1, g32, {0, 7, 31})) - 3.0 / 32) <= 1e-12);
        // lambda_8192^0.8 with the r_high = 1/2, gamma = 1/2 schedule is about 0.056
        CHECK(exceptional_mass_admissible(make_piecewise_target(0.1, 0.5, 1, 1, g32, {5}), 0.5, 8192));
        CHECK(!exceptional_mass_admissible(make_piecewise_target(0.1, 0.5, 1, 1, g32, {5, 6}), 0.5, 8192));
    }
    CHECK_THROWS_AS(make_piecewise_target(0.5, 0.1, 1, 1, cells, {}), ContractError);
    CHECK_THROWS_AS(make_piecewise_target(0.1, 0.5, 1, 1, cells, {4}), ContractError);
    CHECK_THROWS_AS(make_piecewise_target(0.1, 0.5, 1, 1, Partition::voronoi(Box::unit(1), col({0.5})), {}),
                    ContractError);
}

TEST_CASE("gen_inputs") {
    const SyntheticTask task = sobolev_task();
    const PointSet X = gen_inputs(task, 1000, 3);
    CHECK(X.minCoeff() >= 0.0);
    CHECK(X.maxCoeff() <= 1.0);
    CHECK(gen_inputs(task, 1000, 3) == X);
    CHECK(!(gen_inputs(task, 1000, 4) == X));

    const std::size_t n = 100000;
    std::vector<double> v(n);
    const PointSet big = gen_inputs(task, n, 5);
    for (std::size_t i = 0; i < n; ++i) v[i] = big(static_cast<Eigen::Index>(i), 0);
    std::sort(v.begin(), v.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ks = std::max({ks, std::abs((i + 1.0) / n - v[i]), std::abs(static_cast<double>(i) / n - v[i])});
    }
    CHECK(ks <= 1.95 / std::sqrt(double(n)));
}

TEST_CASE("sample_labels") {
    const PointSet X = gen_inputs(sobolev_task(), 100000, 1);
    const SyntheticTask clean = sobolev_task();
    const Vector truth = clean.truth(X);
    CHECK(sample_labels(clean, X, 2) == truth);
    CHECK(sample_labels(sobolev_task({NoiseKind::gaussian, 0.0}), X, 2) == truth);

    const Vector yb = sample_labels(sobolev_task({NoiseKind::uniform_bounded, 0.3}), X, 3);
    CHECK((yb - truth).cwiseAbs().maxCoeff() <= 0.3);

    const double sigma = 0.5;
    const Vector yg = sample_labels(sobolev_task({NoiseKind::gaussian, sigma}), X, 4);
    const Vector eps = yg - truth;
    CHECK(std::abs(eps.mean()) <= 5.0 * sigma / std::sqrt(1e5));
    CHECK(std::sqrt(eps.squaredNorm() / 1e5) == doctest::Approx(sigma).epsilon(0.02));
    CHECK(sample_labels(sobolev_task({NoiseKind::gaussian, sigma}), X, 4) == yg);
}

TEST_CASE("task parameters") {
    const ModelParams p = sobolev_task({NoiseKind::gaussian, 0.2}).params();
    CHECK(p.r == 0.5);
    CHECK(p.gamma == 0.5);
    CHECK(p.R == 1.0);
    CHECK(p.sigma == 0.2);
    CHECK(p.M == 0.2);
}

TEST_CASE("mise_estimate") {
    const SyntheticTask task = sobolev_task();
    CHECK(mise_estimate([&](const PointSet& X) { return task.truth(X); }, task, 5000, 1) == 0.0);

    SyntheticTask one;
    one.target = ConstantTarget{1.0};
    CHECK(mise_estimate([](const PointSet& X) { return Vector(Vector::Zero(X.rows())); }, one, 100, 1) == 1.0);

    // the modes are orthonormal in L2[0,1], so the integral of f^2 is sum c_k^2
    const auto& c = std::get<SobolevTarget>(task.target).coefficients;
    const std::size_t n = 200000;
    const double est = mise_estimate([](const PointSet& X) { return Vector(Vector::Zero(X.rows())); }, task, n, 7);
    const Vector f2 = task.truth(gen_inputs(task, n, 7)).array().square();
    const double sd = std::sqrt((f2.array() - f2.mean()).square().sum() / (n - 1.0) / n);
    CHECK(std::abs(est - c.squaredNorm()) <= 3.0 * sd);
    CHECK_THROWS_AS(mise_estimate([](const PointSet& X) { return Vector(X.rows()); }, task, 0, 1), ContractError);
}

TEST_CASE("property: MISE is nonnegative and decomposes over any partition") {
    const SyntheticTask task = sobolev_task();
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const double shift = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const auto pred = [&](const PointSet& X) { return Vector(task.truth(X).array() * 0.5 + shift); };
        CHECK(mise_estimate(pred, task, 1000, trial) >= 0.0);
        const PointSet T = gen_inputs(task, 3000, 100 + trial);
        const Partition p = trial % 2 ? Partition::grid(Box::unit(1), {std::size_t(1 + trial)})
                                      : Partition::voronoi(Box::unit(1), col(oracle::uniform(5, trial)));
        const MiseDecomposition d = decompose_mise(pred(T), task.truth(T), p.assign_all(T), p.size());
        CHECK(std::abs(d.global - d.by_cells) <= 1e-12 * d.global);
    }
}

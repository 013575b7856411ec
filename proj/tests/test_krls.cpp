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
#include "pkrls/krls.hpp"

using namespace pkrls;
using oracle::col;

TEST_CASE("single point fit") {
    const KrlsModel m = fit_krls(col({0.5}), Vector::Constant(1, 2.0), 1.0, KernelSpec::gaussian(1.0));
    CHECK(m.alpha.size() == 1);
    CHECK(m.alpha[0] == doctest::Approx(1.0));
    CHECK(predict(m, col({0.5}).row(0)) == doctest::Approx(1.0));
}

TEST_CASE("zero labels give zero coefficients and a zero predictor") {
    const PointSet X = col(oracle::uniform(25, 1));
    const KrlsModel m = fit_krls(X, Vector::Zero(25), 0.01, KernelSpec::brownian());
    CHECK(m.alpha.isZero(0.0));
    CHECK(predict(m, col(oracle::uniform(10, 2))).isZero(0.0));
}

TEST_CASE("heavy regularization shrinks predictions, matching the dense oracle") {
    const auto x = oracle::uniform(50, 4);
    const auto y = oracle::uniform(50, 5, -1.0, 1.0);
    const double lambda = 1e6;
    const KrlsModel m = fit_krls(col(x), y, lambda, KernelSpec::gaussian(0.5));
    const auto K = oracle::gram1d(x, x, [](double a, double b) { return oracle::gaussian(a, b, 0.5); });
    const Vector alpha = oracle::krls_alpha(K, y, lambda);
    CHECK(oracle::max_abs_diff(m.alpha, alpha) <= 1e-15);
    const auto t = oracle::uniform(100, 6);
    const Vector f = predict(m, col(t));
    CHECK(f.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("predict matches direct summation") {
    const auto x = oracle::uniform(3, 7);
    const auto y = oracle::uniform(3, 8);
    const KrlsModel m = fit_krls(col(x), y, 0.1, KernelSpec::laplacian(0.3));
    for (double t : {0.0, 0.21, 0.5, 0.77, 1.0}) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += m.alpha[j] * oracle::laplacian(x[j], t, 0.3);
        CHECK(predict(m, col({t}).row(0)) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("alpha solves the regularized system") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto x = oracle::uniform(120, seed);
        const auto y = oracle::uniform(120, seed + 10, -1.0, 1.0);
        const double lambda = 1e-3;
        const KrlsModel m = fit_krls(col(x), y, lambda, KernelSpec::brownian());
        const auto K = oracle::gram1d(x, x, oracle::brownian);
        const Vector r = K * m.alpha + lambda * 120.0 * m.alpha - y;
        CHECK(r.norm() <= 1e-10 * y.norm());
    }
}

TEST_CASE("errors") {
    const PointSet X = col({0.1, 0.2});
    CHECK_THROWS_AS(fit_krls(X, Vector::Zero(3), 0.1, KernelSpec::brownian()), ContractError);
    CHECK_THROWS_AS(fit_krls(X, Vector::Zero(2), 0.0, KernelSpec::brownian()), ContractError);
    CHECK_THROWS_AS(fit_krls(PointSet(0, 1), Vector(0), 0.1, KernelSpec::brownian()), EmptyInputError);
    const KrlsModel m = fit_krls(X, Vector::Ones(2), 0.1, KernelSpec::brownian());
    CHECK_THROWS_AS(predict(m, col({1.5}).row(0)), DomainError);
}

TEST_CASE("property: interpolation as lambda decreases") {
    const auto x = oracle::uniform(40, 21);
    const auto y = oracle::uniform(40, 22, -1.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-2, 1e-4, 1e-6}) {
        const KrlsModel m = fit_krls(col(x), y, lambda, KernelSpec::laplacian(0.5));
        const double res = (predict(m, col(x)) - y).norm();
        CHECK(res < prev);
        prev = res;
    }
    CHECK(prev < 1e-2 * y.norm());
}

TEST_CASE("property: linearity in the labels") {
    const auto x = oracle::uniform(60, 31);
    const auto y1 = oracle::uniform(60, 32, -1.0, 1.0);
    const auto y2 = oracle::uniform(60, 33, -1.0, 1.0);
    const KernelSpec s = KernelSpec::gaussian(0.2);
    const auto a = fit_krls(col(x), y1, 1e-3, s).alpha;
    const auto b = fit_krls(col(x), y2, 1e-3, s).alpha;
    const auto c = fit_krls(col(x), y1 + y2, 1e-3, s).alpha;
    CHECK((a + b - c).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("property: the fit beats alpha = 0 and nearby perturbations on the objective") {
    std::mt19937 rng(41);
    std::normal_distribution<double> g;
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto x = oracle::uniform(80, 40 + seed);
        const auto y = oracle::uniform(80, 50 + seed, -1.0, 1.0);
        const KernelSpec s = KernelSpec::brownian();
        const double lambda = 1e-2;
        const KrlsModel m = fit_krls(col(x), y, lambda, s);
        const double best = regularized_risk(s, m.inputs, m.alpha, m.inputs, y, lambda);
        CHECK(best <= regularized_risk(s, m.inputs, Vector::Zero(80), m.inputs, y, lambda));
        Vector d(80);
        for (auto& e : d) e = 1e-3 * g(rng);
        CHECK(best <= regularized_risk(s, m.inputs, m.alpha + d, m.inputs, y, lambda));
    }
}

TEST_CASE("batch predict equals pointwise predict") {
    const auto x = oracle::uniform(30, 61);
    const KrlsModel m = fit_krls(col(x), oracle::uniform(30, 62), 0.05, KernelSpec::gaussian(0.3));
    const PointSet T = col(oracle::uniform(17, 63));
    const Vector f = predict(m, T);
    for (Eigen::Index i = 0; i < T.rows(); ++i) CHECK(f[i] == doctest::Approx(predict(m, T.row(i))).epsilon(1e-14));
}

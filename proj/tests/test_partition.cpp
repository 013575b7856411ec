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
#include "pkrls/partition.hpp"

using namespace pkrls;
using oracle::col;

namespace {

std::size_t at(const Partition& p, double x) { return p.assign(col({x}).row(0)); }

}  // namespace

TEST_CASE("grid construction") {
    const Partition p = Partition::grid(Box::unit(1), {4});
    CHECK(p.size() == 4);
    CHECK(p.cell_box(1).lower[0] == 0.25);
    CHECK(p.cell_box(1).upper[0] == 0.5);
    CHECK(Partition::grid(Box::unit(2), {2, 2}).size() == 4);
    CHECK(Partition::grid(Box::unit(2), {3, 5}).size() == 15);
    const Partition one = Partition::grid(Box::unit(1), {1});
    CHECK(one.size() == 1);
    CHECK(one.cell_box(0) == Box::unit(1));
    const Box flat{Vector::Constant(1, 0.3), Vector::Constant(1, 0.3)};
    CHECK_THROWS_AS(Partition::grid(flat, {2}), ContractError);
    CHECK_THROWS_AS(Partition::grid(Box::unit(1), {0}), ContractError);
    CHECK_THROWS_AS(Partition::grid(Box::unit(2), {2}), ContractError);
}

TEST_CASE("grid assignment follows the half-open convention") {
    const Partition p = Partition::grid(Box::unit(1), {4});
    CHECK(at(p, 0.0) == 0);
    CHECK(at(p, 0.25) == 1);
    CHECK(at(p, 0.2499999) == 0);
    CHECK(at(p, 0.5) == 2);
    CHECK(at(p, 0.75) == 3);
    CHECK(at(p, 1.0) == 3);
    CHECK_THROWS_AS(at(p, 1.0000001), DomainError);
    CHECK_THROWS_AS(at(p, -0.1), DomainError);
}

TEST_CASE("edges that are not representable exactly still follow the convention") {
    // 0.1 * k is inexact in binary; the stored edges decide
    const Partition p = Partition::grid(Box::unit(1), {10});
    const auto& edges = std::get<GridScheme>(p.scheme()).edges[0];
    for (std::size_t k = 1; k < 10; ++k) {
        CHECK(at(p, edges[k]) == k);
        CHECK(at(p, std::nextafter(edges[k], 0.0)) == k - 1);
    }
}

TEST_CASE("2-D grid is row-major with the last axis fastest") {
    const Partition p = Partition::grid(Box::unit(2), {2, 3});
    Point x(2);
    x << 0.7, 0.1;
    CHECK(p.assign(x) == 3);
    x << 0.1, 0.9;
    CHECK(p.assign(x) == 2);
}

TEST_CASE("voronoi assignment") {
    const Partition p = Partition::voronoi(Box::unit(1), col({0.2, 0.8}));
    CHECK(p.size() == 2);
    CHECK(at(p, 0.5) == 0);
    CHECK(at(p, 0.51) == 1);
    CHECK(at(p, 0.0) == 0);
    CHECK_THROWS_AS(at(p, 2.0), DomainError);
}

TEST_CASE("split_dataset examples") {
    const PointSet X = col(oracle::uniform(50, 1));
    const Vector y = oracle::uniform(50, 2);
    const DatasetSplit one = split_dataset(Partition::grid(Box::unit(1), {1}), X, y);
    CHECK(one.stats.counts == std::vector<std::size_t>{50});
    CHECK(one.stats.weights == std::vector<double>{1.0});
    CHECK(one.inputs[0] == X);

    const PointSet low = col(oracle::uniform(30, 3, 0.0, 0.2));
    const DatasetSplit s = split_dataset(Partition::grid(Box::unit(1), {4}), low, Vector::Zero(30));
    CHECK(s.stats.counts == std::vector<std::size_t>{30, 0, 0, 0});
    CHECK(min_cell_count(s.stats) == 0);
    CHECK(s.stats.weights[0] == 1.0);
    CHECK(s.inputs[2].rows() == 0);
}

TEST_CASE("uniform data spreads evenly over grid cells") {
    const PointSet X = col(oracle::uniform(10000, 4));
    const DatasetSplit s = split_dataset(Partition::grid(Box::unit(1), {4}), X, Vector::Zero(10000));
    for (double w : s.stats.weights) {
        CHECK(w >= 0.22);
        CHECK(w <= 0.28);
    }
}

TEST_CASE("property: splits are stable, disjoint, exhaustive and reassemble the data") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const std::size_t n = 200 + 37 * seed;
        PointSet X(static_cast<Eigen::Index>(n), 2);
        X.col(0) = oracle::uniform(n, seed);
        X.col(1) = oracle::uniform(n, seed + 100);
        const Vector y = oracle::uniform(n, seed + 200);
        const Partition p = seed % 2 ? Partition::grid(Box::unit(2), {3, 2})
                                     : Partition::voronoi(Box::unit(2), X.topRows(5));
        const DatasetSplit s = split_dataset(p, X, y);
        std::vector<int> seen(n, 0);
        double wsum = 0.0;
        std::size_t csum = 0;
        PointSet back(static_cast<Eigen::Index>(n), 2);
        Vector yback(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < p.size(); ++j) {
            const auto& idx = s.stats.index_sets[j];
            CHECK(std::is_sorted(idx.begin(), idx.end()));
            CHECK(idx.size() == s.stats.counts[j]);
            for (std::size_t k = 0; k < idx.size(); ++k) {
                ++seen[idx[k]];
                CHECK(p.assign(X.row(static_cast<Eigen::Index>(idx[k]))) == j);
                back.row(static_cast<Eigen::Index>(idx[k])) = s.inputs[j].row(static_cast<Eigen::Index>(k));
                yback[static_cast<Eigen::Index>(idx[k])] = s.labels[j][static_cast<Eigen::Index>(k)];
            }
            wsum += s.stats.weights[j];
            csum += s.stats.counts[j];
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        CHECK(csum == n);
        CHECK(wsum == 1.0);
        CHECK(back == X);
        CHECK(yback == y);
        CHECK(p.assign_all(X) == p.assign_all(X));
    }
}

TEST_CASE("property: weight error shrinks as n grows") {
    const Partition p = Partition::grid(Box::unit(1), {8});
    for (std::size_t n : {1000, 10000, 100000}) {
        const CellStats s = cell_stats(8, p.assign_all(col(oracle::uniform(n, static_cast<unsigned>(n)))));
        double dev = 0.0;
        for (double w : s.weights) dev += std::abs(w - 0.125);
        // each p_j has sd sqrt(p (1-p) / n); 5 sigma summed over cells
        CHECK(dev <= 8 * 5.0 * std::sqrt(0.125 * 0.875 / static_cast<double>(n)));
    }
}

TEST_CASE("partition equality") {
    CHECK(Partition::grid(Box::unit(1), {3}) == Partition::grid(Box::unit(1), {3}));
    CHECK(!(Partition::grid(Box::unit(1), {3}) == Partition::grid(Box::unit(1), {4})));
}

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

#include "pkrls/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pkrls/error.hpp"

namespace pkrls {

Partition Partition::grid(Box box, std::vector<std::size_t> cells_per_dim) {
    if (!box.nondegenerate()) throw ContractError("grid partition: degenerate box");
    if (cells_per_dim.size() != box.dim()) {
        throw ContractError("grid partition: one cell count per axis required");
    }
    GridScheme g;
    std::size_t m = 1;
    for (std::size_t k = 0; k < cells_per_dim.size(); ++k) {
        const std::size_t c = cells_per_dim[k];
        if (c == 0) throw ContractError("grid partition: cell counts must be positive");
        const auto K = static_cast<Eigen::Index>(k);
        const double lo = box.lower[K];
        const double hi = box.upper[K];
        std::vector<double> e(c + 1);
        for (std::size_t i = 0; i <= c; ++i) {
            e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c);
        }
        e.front() = lo;
        e.back() = hi;
        g.edges.push_back(std::move(e));
        m *= c;
    }
    g.cells_per_dim = std::move(cells_per_dim);
    return Partition(std::move(box), std::move(g), m);
}

Partition Partition::voronoi(Box box, PointSet centers) {
    if (!box.nondegenerate()) throw ContractError("voronoi partition: degenerate box");
    if (centers.rows() == 0) throw ContractError("voronoi partition: need at least one center");
    if (static_cast<std::size_t>(centers.cols()) != box.dim()) {
        throw ContractError("voronoi partition: center dimension does not match box");
    }
    const auto m = static_cast<std::size_t>(centers.rows());
    return Partition(std::move(box), VoronoiScheme{std::move(centers)}, m);
}

std::size_t Partition::assign(PointRef x) const {
    if (!domain_.contains(x)) throw DomainError("assign: point outside the partition domain");
    if (const auto* g = std::get_if<GridScheme>(&scheme_)) {
        std::size_t cell = 0;
        for (std::size_t k = 0; k < g->cells_per_dim.size(); ++k) {
            const auto& e = g->edges[k];
            const std::size_t c = g->cells_per_dim[k];
            const double v = x[static_cast<Eigen::Index>(k)];
            const double t = (v - e.front()) / (e.back() - e.front()) * static_cast<double>(c);
            auto i = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(c - 1)));
            // the explicit edges are authoritative, the division only a guess
            while (i > 0 && v < e[i]) --i;
            while (i + 1 < c && v >= e[i + 1]) ++i;
            cell = cell * c + i;
        }
        return cell;
    }
    const auto& centers = std::get<VoronoiScheme>(scheme_).centers;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
        const double d = (centers.row(j) - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::size_t>(j);
        }
    }
    return best;
}

std::vector<std::size_t> Partition::assign_all(const PointSet& X) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = assign(X.row(i));
    return out;
}

Box Partition::cell_box(std::size_t cell) const {
    const auto* g = std::get_if<GridScheme>(&scheme_);
    if (g == nullptr) throw ContractError("cell_box: only grid partitions have box cells");
    if (cell >= size_) throw ContractError("cell_box: cell index out of range");
    Box b = domain_;
    for (std::size_t k = g->cells_per_dim.size(); k-- > 0;) {
        const std::size_t c = g->cells_per_dim[k];
        const std::size_t i = cell % c;
        cell /= c;
        b.lower[static_cast<Eigen::Index>(k)] = g->edges[k][i];
        b.upper[static_cast<Eigen::Index>(k)] = g->edges[k][i + 1];
    }
    return b;
}

bool operator==(const Partition& a, const Partition& b) {
    if (!(a.domain() == b.domain()) || a.size() != b.size()) return false;
    if (a.is_grid() != b.is_grid()) return false;
    if (a.is_grid()) {
        return std::get<GridScheme>(a.scheme()).cells_per_dim ==
               std::get<GridScheme>(b.scheme()).cells_per_dim;
    }
    return std::get<VoronoiScheme>(a.scheme()).centers == std::get<VoronoiScheme>(b.scheme()).centers;
}

CellStats cell_stats(std::size_t cell_count, const std::vector<std::size_t>& assignment) {
    CellStats s;
    s.counts.assign(cell_count, 0);
    s.index_sets.resize(cell_count);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const std::size_t j = assignment[i];
        if (j >= cell_count) throw ContractError("cell_stats: cell index out of range");
        ++s.counts[j];
        s.index_sets[j].push_back(i);
    }
    s.weights.assign(cell_count, 0.0);
    const std::size_t n = assignment.size();
    if (n == 0) return s;
    // The last nonempty cell takes the remainder so the weights sum to 1.
    std::size_t last = cell_count;
    for (std::size_t j = cell_count; j-- > 0;) {
        if (s.counts[j] > 0) {
            last = j;
            break;
        }
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < cell_count; ++j) {
        if (j == last) continue;
        s.weights[j] = static_cast<double>(s.counts[j]) / static_cast<double>(n);
        acc += s.weights[j];
    }
    s.weights[last] = 1.0 - acc;
    return s;
}

DatasetSplit split_dataset(const Partition& partition, const PointSet& X, const Vector& y) {
    if (X.rows() != y.size()) throw ContractError("split_dataset: |X| != |y|");
    DatasetSplit out;
    out.stats = cell_stats(partition.size(), partition.assign_all(X));
    const std::size_t m = partition.size();
    out.inputs.resize(m);
    out.labels.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& idx = out.stats.index_sets[j];
        const auto nj = static_cast<Eigen::Index>(idx.size());
        out.inputs[j].resize(nj, X.cols());
        out.labels[j].resize(nj);
        for (Eigen::Index r = 0; r < nj; ++r) {
            const auto src = static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]);
            out.inputs[j].row(r) = X.row(src);
            out.labels[j][r] = y[src];
        }
    }
    return out;
}

std::size_t min_cell_count(const CellStats& stats) {
    if (stats.counts.empty()) return 0;
    return *std::min_element(stats.counts.begin(), stats.counts.end());
}

}  // namespace pkrls

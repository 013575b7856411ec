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

#ifndef PKRLS_PARTITION_HPP
#define PKRLS_PARTITION_HPP

#include <variant>
#include <vector>

#include "pkrls/types.hpp"

namespace pkrls {

/// Uniform grid; cells are half-open [a, b) except the last one per axis,
/// which is closed at the top. Cell indices are row-major (last axis fastest).
struct GridScheme {
    std::vector<std::size_t> cells_per_dim;
    std::vector<std::vector<double>> edges;  ///< per axis, cells_per_dim[k] + 1 entries
};

/// Nearest-center cells; ties go to the lowest center index.
struct VoronoiScheme {
    PointSet centers;
};

/// A finite family of disjoint cells covering a box.
class Partition {
public:
    static Partition grid(Box box, std::vector<std::size_t> cells_per_dim);
    static Partition voronoi(Box box, PointSet centers);

    std::size_t size() const { return size_; }
    const Box& domain() const { return domain_; }
    const std::variant<GridScheme, VoronoiScheme>& scheme() const { return scheme_; }
    bool is_grid() const { return std::holds_alternative<GridScheme>(scheme_); }

    /// Index of the unique cell containing x. Throws DomainError outside the box.
    std::size_t assign(PointRef x) const;
    std::vector<std::size_t> assign_all(const PointSet& X) const;

    /// Bounding box of a grid cell. Throws ContractError for Voronoi partitions.
    Box cell_box(std::size_t cell) const;

private:
    Partition(Box domain, std::variant<GridScheme, VoronoiScheme> scheme, std::size_t size)
        : domain_(std::move(domain)), scheme_(std::move(scheme)), size_(size) {}

    Box domain_;
    std::variant<GridScheme, VoronoiScheme> scheme_;
    std::size_t size_;
};

bool operator==(const Partition& a, const Partition& b);

struct CellStats {
    std::vector<std::size_t> counts;                  ///< n_j
    std::vector<double> weights;                      ///< n_j / n, summing to exactly 1
    std::vector<std::vector<std::size_t>> index_sets; ///< I_j, ascending
};

struct DatasetSplit {
    CellStats stats;
    std::vector<PointSet> inputs;
    std::vector<Vector> labels;
};

/// Groups samples by cell, preserving original order inside each cell.
DatasetSplit split_dataset(const Partition& partition, const PointSet& X, const Vector& y);

/// Counts and weights from a cell assignment (no data copies).
CellStats cell_stats(std::size_t cell_count, const std::vector<std::size_t>& assignment);

/// Smallest n_j over all cells.
std::size_t min_cell_count(const CellStats& stats);

}  // namespace pkrls

#endif  // PKRLS_PARTITION_HPP

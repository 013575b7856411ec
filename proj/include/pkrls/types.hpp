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

#ifndef PKRLS_TYPES_HPP
#define PKRLS_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace pkrls {

/// Points are stored one per row.
using PointSet = Eigen::MatrixXd;
using Point = Eigen::RowVectorXd;
using PointRef = Eigen::Ref<const Eigen::RowVectorXd>;

/// Routes single-row expressions such as X.row(i) to the point overload of
/// predict; without it they convert equally well to PointRef and PointSet.
template <typename Model, typename Derived>
    requires(Derived::RowsAtCompileTime == 1)
double predict(const Model& model, const Eigen::MatrixBase<Derived>& x) {
    return predict(model, PointRef(x));
}
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lower, upper] in R^d.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Box unit(std::size_t dim = 1);

    std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
    bool contains(PointRef x) const;
    /// All sides strictly positive and bounds finite.
    bool nondegenerate() const;
    double volume() const;
};

bool operator==(const Box& a, const Box& b);

/// Deterministic 64-bit seed mixing; results do not depend on call order.
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t hash_name(std::string_view name);

/// Library warnings go to stderr unless silenced (tests and benchmarks).
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace pkrls

#endif  // PKRLS_TYPES_HPP

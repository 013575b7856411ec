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

#include "pkrls/types.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace pkrls {

Box Box::unit(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Box{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

bool Box::contains(PointRef x) const {
    if (x.size() != lower.size()) return false;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (!(x[k] >= lower[k] && x[k] <= upper[k])) return false;
    }
    return true;
}

bool Box::nondegenerate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) return false;
    for (Eigen::Index k = 0; k < lower.size(); ++k) {
        if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) return false;
        if (!(upper[k] > lower[k])) return false;
    }
    return true;
}

double Box::volume() const { return (upper - lower).prod(); }

bool operator==(const Box& a, const Box& b) {
    return a.lower.size() == b.lower.size() && a.lower == b.lower && a.upper == b.upper;
}

// splitmix64 finalizer
std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(mix_seed(master) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

// FNV-1a, stable across platforms
std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {
std::atomic<bool> g_warnings{true};
}

void log_warning(std::string_view message) {
    if (g_warnings.load(std::memory_order_relaxed)) {
        std::clog << "[pkrls] warning: " << message << '\n';
    }
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled, std::memory_order_relaxed); }

bool warnings_enabled() { return g_warnings.load(std::memory_order_relaxed); }

}  // namespace pkrls

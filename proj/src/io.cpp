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

#include "pkrls/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "pkrls/error.hpp"

namespace pkrls {

namespace {

Json vec_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vec_from_json(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json krls_to_json(const KrlsModel& m) {
    return Json{{"type", "krls"},
                {"kernel", kernel_to_json(m.kernel)},
                {"lambda", m.lambda},
                {"inputs", points_to_json(m.inputs)},
                {"alpha", vec_to_json(m.alpha)}};
}

KrlsModel krls_from_json(const Json& j) {
    KrlsModel m;
    m.kernel = kernel_from_json(j.at("kernel"));
    m.lambda = j.at("lambda").get<double>();
    m.inputs = points_from_json(j.at("inputs"));
    m.alpha = vec_from_json(j.at("alpha"));
    if (m.alpha.size() != m.inputs.rows()) throw ContractError("model file: |alpha| != |inputs|");
    return m;
}

Json nystrom_to_json(const NystromModel& m) {
    return Json{{"type", "nystrom"},
                {"kernel", kernel_to_json(m.kernel)},
                {"lambda", m.lambda},
                {"seed", m.seed},
                {"landmarks", points_to_json(m.landmarks)},
                {"landmark_indices", m.landmark_indices},
                {"alpha", vec_to_json(m.alpha)}};
}

NystromModel nystrom_from_json(const Json& j) {
    NystromModel m;
    m.kernel = kernel_from_json(j.at("kernel"));
    m.lambda = j.at("lambda").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.landmarks = points_from_json(j.at("landmarks"));
    m.landmark_indices = j.at("landmark_indices").get<std::vector<std::size_t>>();
    m.alpha = vec_from_json(j.at("alpha"));
    if (m.alpha.size() != m.landmarks.rows()) throw ContractError("model file: |alpha| != |landmarks|");
    return m;
}

Json local_to_json(const LocalModel& m) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ZeroModel>) {
                return Json{{"type", "zero"}};
            } else if constexpr (std::is_same_v<T, KrlsModel>) {
                return krls_to_json(v);
            } else {
                return nystrom_to_json(v);
            }
        },
        m);
}

LocalModel local_from_json(const Json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "zero") return ZeroModel{};
    if (type == "krls") return krls_from_json(j);
    if (type == "nystrom") return nystrom_from_json(j);
    throw ContractError("model file: unknown local model type '" + type + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Json box_to_json(const Box& box) { return Json{{"lower", vec_to_json(box.lower)}, {"upper", vec_to_json(box.upper)}}; }

Box box_from_json(const Json& j) {
    Box b{vec_from_json(j.at("lower")), vec_from_json(j.at("upper"))};
    if (b.lower.size() != b.upper.size()) throw ContractError("box: lower/upper length mismatch");
    return b;
}

Json kernel_to_json(const KernelSpec& spec) {
    Json j{{"family", std::string(family_name(spec.family))}, {"domain", box_to_json(spec.domain)}};
    switch (spec.family) {
        case KernelFamily::gaussian:
        case KernelFamily::laplacian:
            j["bandwidth"] = spec.bandwidth;
            break;
        case KernelFamily::polynomial:
            j["degree"] = spec.degree;
            j["offset"] = spec.offset;
            break;
        case KernelFamily::brownian:
            break;
    }
    return j;
}

KernelSpec kernel_from_json(const Json& j) {
    KernelSpec s;
    s.family = parse_family(j.at("family").get<std::string>());
    s.domain = box_from_json(j.at("domain"));
    switch (s.family) {
        case KernelFamily::gaussian:
        case KernelFamily::laplacian:
            s.bandwidth = j.at("bandwidth").get<double>();
            break;
        case KernelFamily::polynomial:
            s.degree = j.at("degree").get<int>();
            s.offset = j.at("offset").get<double>();
            break;
        case KernelFamily::brownian:
            break;
    }
    s.validate();
    return s;
}

Json partition_to_json(const Partition& partition) {
    Json j{{"domain", box_to_json(partition.domain())}};
    if (const auto* g = std::get_if<GridScheme>(&partition.scheme())) {
        j["scheme"] = "grid";
        j["cells_per_dim"] = g->cells_per_dim;
    } else {
        j["scheme"] = "voronoi";
        j["centers"] = points_to_json(std::get<VoronoiScheme>(partition.scheme()).centers);
    }
    return j;
}

Partition partition_from_json(const Json& j) {
    const auto scheme = j.at("scheme").get<std::string>();
    Box box = box_from_json(j.at("domain"));
    if (scheme == "grid") return Partition::grid(std::move(box), j.at("cells_per_dim").get<std::vector<std::size_t>>());
    if (scheme == "voronoi") return Partition::voronoi(std::move(box), points_from_json(j.at("centers")));
    throw ContractError("partition: unknown scheme '" + scheme + "'");
}

Json points_to_json(const PointSet& X) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(X.cols()));
        for (Eigen::Index k = 0; k < X.cols(); ++k) r[static_cast<std::size_t>(k)] = X(i, k);
        rows.push_back(std::move(r));
    }
    return rows;
}

PointSet points_from_json(const Json& j) {
    if (!j.is_array()) throw ContractError("points: expected an array of rows");
    if (j.empty()) return PointSet(0, 0);
    const auto d = static_cast<Eigen::Index>(j.front().size());
    PointSet X(static_cast<Eigen::Index>(j.size()), d);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto r = j[i].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(r.size()) != d) throw ContractError("points: ragged rows");
        for (Eigen::Index k = 0; k < d; ++k) X(static_cast<Eigen::Index>(i), k) = r[static_cast<std::size_t>(k)];
    }
    return X;
}

Json model_to_json(const AnyModel& model) {
    Json body = std::visit(
        [](const auto& m) -> Json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, KrlsModel>) {
                return krls_to_json(m);
            } else if constexpr (std::is_same_v<T, NystromModel>) {
                return nystrom_to_json(m);
            } else if constexpr (std::is_same_v<T, LocalizedModel>) {
                Json locals = Json::array();
                for (const auto& l : m.locals) locals.push_back(local_to_json(l));
                return Json{{"type", "localized"},
                            {"lambda", m.lambda},
                            {"partition", partition_to_json(m.partition)},
                            {"cell_counts", m.cell_stats.counts},
                            {"cell_weights", m.cell_stats.weights},
                            {"cell_indices", m.cell_stats.index_sets},
                            {"locals", std::move(locals)}};
            } else {
                Json chunks = Json::array();
                for (const auto& c : m.chunks) chunks.push_back(krls_to_json(c));
                return Json{{"type", "distributed_avg"}, {"chunks", std::move(chunks)}};
            }
        },
        model);
    body["format"] = kModelFormat;
    body["version"] = kModelVersion;
    return body;
}

AnyModel model_from_json(const Json& j) {
    if (j.value("format", std::string()) != kModelFormat) throw ContractError("not a pkrls model file");
    if (j.at("version").get<int>() != kModelVersion) {
        throw ContractError("unsupported model version " + j.at("version").dump());
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "krls") return krls_from_json(j);
    if (type == "nystrom") return nystrom_from_json(j);
    if (type == "localized") {
        LocalizedModel m{partition_from_json(j.at("partition")), {}, j.at("lambda").get<double>(), {}};
        m.cell_stats.counts = j.at("cell_counts").get<std::vector<std::size_t>>();
        m.cell_stats.weights = j.at("cell_weights").get<std::vector<double>>();
        m.cell_stats.index_sets = j.at("cell_indices").get<std::vector<std::vector<std::size_t>>>();
        for (const auto& l : j.at("locals")) m.locals.push_back(local_from_json(l));
        if (m.locals.size() != m.partition.size()) throw ContractError("model file: one local model per cell required");
        return m;
    }
    if (type == "distributed_avg") {
        DistributedModel m;
        for (const auto& c : j.at("chunks")) m.chunks.push_back(krls_from_json(c));
        if (m.chunks.empty()) throw ContractError("model file: distributed model without chunks");
        return m;
    }
    throw ContractError("model file: unknown model type '" + type + "'");
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
    write_json_file(path, model_to_json(model));
}

AnyModel load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

SyntheticTask task_from_json(const Json& j) {
    SyntheticTask t;
    t.domain = box_from_json(j.at("domain"));
    t.kernel = kernel_from_json(j.at("kernel"));
    t.gamma = j.at("gamma").get<double>();

    const Json& nz = j.at("noise");
    const auto kind = nz.at("kind").get<std::string>();
    if (kind == "none") {
        t.noise = Noise{NoiseKind::none, 0.0};
    } else if (kind == "gaussian") {
        t.noise = Noise{NoiseKind::gaussian, nz.at("scale").get<double>()};
    } else if (kind == "uniform_bounded") {
        t.noise = Noise{NoiseKind::uniform_bounded, nz.at("scale").get<double>()};
    } else {
        throw ContractError("task: unknown noise kind '" + kind + "'");
    }

    const Json& tg = j.at("target");
    const auto tkind = tg.at("kind").get<std::string>();
    if (tkind == "sobolev") {
        t.target = make_sobolev_target(tg.at("r").get<double>(), tg.at("R").get<double>(),
                                       tg.at("truncation").get<std::size_t>());
    } else if (tkind == "piecewise") {
        const Partition cells = grid_partition_with_cells(t.domain, tg.at("cells").get<std::size_t>());
        t.target = make_piecewise_target(tg.at("r_low").get<double>(), tg.at("r_high").get<double>(),
                                         tg.at("R_low").get<double>(), tg.at("R_high").get<double>(), cells,
                                         tg.at("exceptional").get<std::vector<std::size_t>>(),
                                         tg.at("truncation").get<std::size_t>());
    } else if (tkind == "constant") {
        t.target = ConstantTarget{tg.at("value").get<double>()};
    } else {
        throw ContractError("task: unknown target kind '" + tkind + "'");
    }
    return t;
}

Json task_to_json(const SyntheticTask& task) {
    Json j{{"domain", box_to_json(task.domain)}, {"kernel", kernel_to_json(task.kernel)}, {"gamma", task.gamma}};
    const char* kinds[] = {"none", "gaussian", "uniform_bounded"};
    j["noise"] = Json{{"kind", kinds[static_cast<int>(task.noise.kind)]}, {"scale", task.noise.scale}};
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SobolevTarget>) {
                j["target"] = Json{{"kind", "sobolev"},
                                   {"r", f.r},
                                   {"R", f.R},
                                   {"truncation", f.coefficients.size()},
                                   {"scale", f.scale},
                                   {"tail_sup_estimate", f.tail_sup_estimate},
                                   {"source_norm_sq", source_norm_sq(f)},
                                   {"coefficients", vec_to_json(f.coefficients)}};
            } else if constexpr (std::is_same_v<T, PiecewiseTarget>) {
                Json cells = Json::array();
                for (const auto& c : f.cells) cells.push_back(vec_to_json(c.coefficients));
                j["target"] = Json{{"kind", "piecewise"},
                                   {"r_low", f.r_low},
                                   {"r_high", f.r_high},
                                   {"R_low", f.R_low},
                                   {"R_high", f.R_high},
                                   {"cells", f.partition.size()},
                                   {"exceptional", f.exceptional},
                                   {"exceptional_mass", exceptional_mass(f)},
                                   {"truncation", f.cells.empty() ? 0 : f.cells.front().coefficients.size()},
                                   {"cell_coefficients", std::move(cells)}};
            } else {
                j["target"] = Json{{"kind", "constant"}, {"value", f.value}};
            }
        },
        task.target);
    return j;
}

Dataset read_dataset_csv(const std::filesystem::path& path, bool labels) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ContractError(path.string() + ": missing header");
    const std::size_t cols = split_csv_line(line).size();
    const std::size_t d = labels ? cols - 1 : cols;
    if (cols == 0 || d == 0) throw ContractError(path.string() + ": no input columns");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != cols) throw ContractError(path.string() + ": ragged row");
        std::vector<double> r;
        for (const auto& c : cells) r.push_back(std::stod(c));
        rows.push_back(std::move(r));
    }
    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    ds.y.resize(labels ? static_cast<Eigen::Index>(rows.size()) : 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        if (labels) ds.y[static_cast<Eigen::Index>(i)] = rows[i][d];
    }
    return ds;
}

void write_dataset_csv(const std::filesystem::path& path, const PointSet& X, const Vector* y) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path.string());
    for (Eigen::Index k = 0; k < X.cols(); ++k) out << (k ? "," : "") << 'x' << k;
    if (y != nullptr) out << ",y";
    out << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index k = 0; k < X.cols(); ++k) out << (k ? "," : "") << X(i, k);
        if (y != nullptr) out << ',' << (*y)[i];
        out << '\n';
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ContractError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace pkrls

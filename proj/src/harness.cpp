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

#include "pkrls/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace pkrls {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return j.at(key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
}

template <typename T>
T get_as(const Json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

/// Model parameters driving the schedules. Piecewise tasks always carry
/// both smoothness levels so that either schedule can be requested.
ModelParams experiment_params(const SyntheticTask& task) {
    ModelParams p = task.params();
    if (const auto* pw = std::get_if<PiecewiseTarget>(&task.target)) {
        p.r_low = pw->r_low;
        p.r_high = pw->r_high;
        // without exceptional cells the target is r_high-smooth everywhere
        if (pw->exceptional.empty()) p.r = pw->r_high;
    }
    return p;
}

/// Grid for the localized estimators. A piecewise task's cells are kept
/// intact: the cell count is rounded down to a multiple of the task's.
Partition experiment_partition(const SyntheticTask& task, std::size_t m) {
    if (const auto* pw = std::get_if<PiecewiseTarget>(&task.target)) {
        const std::size_t c = pw->partition.size();
        return grid_partition_with_cells(task.domain, c * std::max<std::size_t>(1, m / c));
    }
    return grid_partition_with_cells(task.domain, m);
}

struct Schedule {
    double lambda = 0.0;
    std::size_t m = 1;
    std::size_t l = 1;
};

Schedule schedule_at(const ExperimentConfig& c, std::size_t index, double scale, Smoothness lam_which,
                     Smoothness size_which) {
    const std::size_t n = c.n_grid[index];
    if (c.schedule == ScheduleMode::explicit_lists) return {c.lambdas[index], c.ms[index], c.ls[index]};
    const ModelParams p = experiment_params(c.task);
    return {scale * lambda_schedule(n, p, lam_which), m_schedule(n, p, size_which), l_schedule(n, p, size_which)};
}

bool uses_cells(EstimatorKind k) { return k == EstimatorKind::localized || k == EstimatorKind::localized_nystrom; }

void add_tag(std::string& warning, const std::string& tag) {
    if (!warning.empty()) warning += ';';
    warning += tag;
}

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == ';') ch = ' ';
    }
    return s;
}

class QuietWarnings {
public:
    QuietWarnings() : saved_(warnings_enabled()) { set_warnings_enabled(false); }
    ~QuietWarnings() { set_warnings_enabled(saved_); }
    QuietWarnings(const QuietWarnings&) = delete;
    QuietWarnings& operator=(const QuietWarnings&) = delete;

private:
    bool saved_;
};

struct UnitData {
    PointSet X;
    Vector y;
    std::uint64_t fit_seed = 0;
    std::uint64_t test_seed = 0;
};

UnitData draw_unit(const SyntheticTask& task, std::uint64_t seed, std::size_t n) {
    UnitData u;
    u.X = gen_inputs(task, n, derive_seed(seed, 0));
    u.y = sample_labels(task, u.X, derive_seed(seed, 1));
    u.fit_seed = derive_seed(seed, 2);
    u.test_seed = derive_seed(seed, 3);
    return u;
}

struct FitOutcome {
    RateRow row;
    std::optional<AnyModel> model;
};

/// Fits one unit and fills everything but mise.
FitOutcome fit_unit(const ExperimentConfig& c, EstimatorKind kind, std::size_t n, std::size_t rep,
                    const Schedule& s, const UnitData& data) {
    FitOutcome out;
    RateRow& row = out.row;
    row.estimator = std::string(estimator_name(kind));
    row.n = n;
    row.rep = rep;
    row.lambda = s.lambda;
    row.m = 1;
    row.l = 0;
    row.min_cell_count = n;
    row.mise = std::numeric_limits<double>::quiet_NaN();

    EstimatorSettings settings{kind, s.lambda, 1, 0, data.fit_seed};
    Partition partition = Partition::grid(c.task.domain, std::vector<std::size_t>(c.task.domain.dim(), 1));
    try {
        switch (kind) {
            case EstimatorKind::krls:
                break;
            case EstimatorKind::nystrom:
                settings.l = s.l;
                if (settings.l > n) {
                    settings.l = n;
                    add_tag(row.warning, "l_clamped");
                }
                row.l = settings.l;
                break;
            case EstimatorKind::localized:
            case EstimatorKind::localized_nystrom: {
                partition = experiment_partition(c.task, s.m);
                settings.m = partition.size();
                row.m = settings.m;
                const CellStats stats = cell_stats(partition.size(), partition.assign_all(data.X));
                row.min_cell_count = min_cell_count(stats);
                if (kind == EstimatorKind::localized_nystrom) {
                    settings.l = s.l;
                    row.l = s.l;
                    if (row.min_cell_count < s.l) add_tag(row.warning, "l_clamped");
                }
                if (row.min_cell_count < 1) add_tag(row.warning, "empty_cells");
                break;
            }
            case EstimatorKind::distributed_avg:
                settings.m = std::min(s.m, n);
                row.m = settings.m;
                row.min_cell_count = n / settings.m;
                break;
        }
        const auto start = std::chrono::steady_clock::now();
        AnyModel model = uses_cells(kind) ? fit_estimator(settings, data.X, data.y, c.task.kernel, partition)
                                          : fit_estimator(settings, data.X, data.y, c.task.kernel);
        row.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.model = std::move(model);
    } catch (const std::exception& e) {
        add_tag(row.warning, "error:" + sanitize(e.what()));
    }
    return out;
}

RateRow run_unit(const ExperimentConfig& c, EstimatorKind kind, std::size_t n, std::size_t rep, const Schedule& s,
                 std::string_view stream_label) {
    const UnitData data = draw_unit(c.task, unit_seed(c.master_seed, stream_label, n, rep), n);
    FitOutcome out = fit_unit(c, kind, n, rep, s, data);
    if (out.model) {
        try {
            const AnyModel& model = *out.model;
            out.row.mise = mise_estimate([&](const PointSet& X) { return predict(model, X); }, c.task, c.n_test,
                                         data.test_seed);
        } catch (const std::exception& e) {
            add_tag(out.row.warning, "error:" + sanitize(e.what()));
        }
    }
    return out.row;
}

/// Brownian kernel on [0,1]: N(lambda) from the closed-form Mercer spectrum.
std::optional<double> reference_effective_dimension(const SyntheticTask& task, double lambda) {
    const KernelSpec& k = task.kernel;
    if (k.family != KernelFamily::brownian || !(k.domain == Box::unit(1)) || !(task.domain == Box::unit(1))) {
        return std::nullopt;
    }
    constexpr std::size_t terms = 100000;
    double sum = 0.0;
    for (std::size_t i = terms; i >= 1; --i) {
        const double mu = brownian_eigenvalue(i);
        sum += mu / (mu + lambda);
    }
    // tail: mu_k / lambda ~ 1 / (lambda pi^2 k^2)
    return sum + 1.0 / (lambda * M_PI * M_PI * static_cast<double>(terms));
}

Json schedule_diagnostics(const ExperimentConfig& c, double scale, Smoothness lam_which, Smoothness size_which) {
    Json out = Json::array();
    const ModelParams p = experiment_params(c.task);
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        const std::size_t n = c.n_grid[i];
        const Schedule s = schedule_at(c, i, scale, lam_which, size_which);
        Json d{{"n", n}, {"lambda", s.lambda}, {"m", s.m}, {"l", s.l}};
        const std::size_t cells = experiment_partition(c.task, s.m).size();
        d["partition_cells"] = cells;
        ModelParams q = p;
        q.r = smoothness(p, size_which);
        d["n0_sufficient"] = n0_sufficient_value(cells, q, 1.0 / static_cast<double>(cells), 1.0);
        if (const auto eff = reference_effective_dimension(c.task, s.lambda)) {
            d["effective_dimension"] = *eff;
            d["b_quantity"] = b_quantity(static_cast<double>(n), s.lambda, *eff);
        }
        out.push_back(std::move(d));
    }
    return out;
}

void finish_report(RateReport& report) {
    std::sort(report.rows.begin(), report.rows.end(), [](const RateRow& a, const RateRow& b) {
        return std::tie(a.estimator, a.n, a.rep) < std::tie(b.estimator, b.n, b.rep);
    });
    std::set<std::string> names;
    for (const auto& r : report.rows) names.insert(r.estimator);
    for (const auto& name : names) {
        std::vector<std::pair<double, double>> pts;
        bool positive = true;
        for (const auto& [n, mean] : report.mean_mise(name)) {
            if (!std::isfinite(mean)) continue;
            positive = positive && mean > 0.0;
            pts.emplace_back(static_cast<double>(n), mean);
        }
        if (pts.size() >= 2 && positive) report.slopes[name] = fit_loglog_slope(pts);
    }
}

RateReport run_experiment(const ExperimentConfig& c, double scale, Smoothness lam_which, Smoothness size_which,
                          const std::vector<EstimatorKind>& estimators) {
    QuietWarnings quiet;
    RateReport report;
    report.lambda_scale = scale;
    report.theoretical_exponent = rate_exponent(experiment_params(c.task), lam_which);
    for (EstimatorKind kind : estimators) {
        for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
            const Schedule s = schedule_at(c, i, scale, lam_which, size_which);
            for (std::size_t rep = 0; rep < c.replications; ++rep) {
                report.rows.push_back(run_unit(c, kind, c.n_grid[i], rep, s, estimator_name(kind)));
            }
        }
    }
    report.diagnostics = Json{{"schedule", schedule_diagnostics(c, scale, lam_which, size_which)}};
    finish_report(report);
    return report;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ContractError("rows csv: bad number '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw ContractError("rows csv: bad count '" + s + "'");
    return static_cast<std::size_t>(v);
}

Json slopes_to_json(const std::map<std::string, SlopeFit>& slopes) {
    Json j = Json::object();
    for (const auto& [name, s] : slopes) j[name] = Json{{"slope", s.slope}, {"stderr", s.stderr_}, {"points", s.points}};
    return j;
}

std::map<std::string, SlopeFit> slopes_from_json(const Json& j) {
    std::map<std::string, SlopeFit> out;
    for (const auto& [name, s] : j.items()) {
        out[name] = SlopeFit{s.at("slope").get<double>(), s.at("stderr").get<double>(),
                             s.at("points").get<std::size_t>()};
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (estimators.empty()) throw ConfigError("estimators: at least one estimator required");
    if (n_grid.empty()) throw ConfigError("n_grid: at least one n required");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw ConfigError("n_grid: entries must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid: must be strictly ascending");
    }
    if (replications < 1) throw ConfigError("replications: must be >= 1");
    if (n_test < 1) throw ConfigError("n_test: must be >= 1");
    if (output.empty()) throw ConfigError("output: empty path");
    if (schedule == ScheduleMode::explicit_lists) {
        const std::size_t k = n_grid.size();
        if (lambdas.size() != k || ms.size() != k || ls.size() != k) {
            throw ConfigError("schedule: explicit lambda/m/l lists need one entry per n");
        }
        for (double v : lambdas) {
            if (!(v > 0.0)) throw ConfigError("schedule: lambda entries must be > 0");
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (ms[i] < 1 || ls[i] < 1) throw ConfigError("schedule: m and l entries must be >= 1");
        }
    } else {
        if (lambda_scale.has_value() == calibration.has_value()) {
            throw ConfigError("schedule: give either a numeric lambda_scale or \"calibrate\" with a calibration block");
        }
        if (lambda_scale && !(*lambda_scale > 0.0)) throw ConfigError("schedule: lambda_scale must be > 0");
        if (calibration) {
            if (calibration->replications < 1) throw ConfigError("calibration: replications must be >= 1");
            if (calibration->grid.empty()) throw ConfigError("calibration: grid must not be empty");
            for (double v : calibration->grid) {
                if (!(v > 0.0)) throw ConfigError("calibration: grid entries must be > 0");
            }
        }
    }
    if (kind == ExperimentKind::improved_bound) {
        const auto* pw = std::get_if<PiecewiseTarget>(&task.target);
        if (pw == nullptr) throw ConfigError("improved_bound: task target must be piecewise");
        if (estimators.size() != 1 || estimators.front() != EstimatorKind::localized) {
            throw ConfigError("improved_bound: estimators must be [\"localized\"]");
        }
        if (schedule != ScheduleMode::automatic) throw ConfigError("improved_bound: schedule mode must be auto");
    }
}

ExperimentConfig parse_config(const Json& j) {
    const std::string where = "config";
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown(j, {"experiment", "task", "estimators", "n_grid", "replications", "schedule", "n_test",
                       "master_seed", "output"},
                   where);
    ExperimentConfig c;
    const auto kind = get_as<std::string>(require(j, "experiment", where), "experiment");
    if (kind == "rate") {
        c.kind = ExperimentKind::rate;
    } else if (kind == "improved_bound") {
        c.kind = ExperimentKind::improved_bound;
    } else {
        throw ConfigError("experiment: expected \"rate\" or \"improved_bound\", got \"" + kind + "\"");
    }

    c.task_json = require(j, "task", where);
    try {
        c.task = task_from_json(c.task_json);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("task: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("task: ") + e.what());
    }

    for (const auto& name : get_as<std::vector<std::string>>(require(j, "estimators", where), "estimators")) {
        try {
            c.estimators.push_back(parse_estimator(name));
        } catch (const ContractError& e) {
            throw ConfigError(std::string("estimators: ") + e.what());
        }
    }
    c.n_grid = get_as<std::vector<std::size_t>>(require(j, "n_grid", where), "n_grid");
    c.replications = get_as<std::size_t>(require(j, "replications", where), "replications");
    c.n_test = get_as<std::size_t>(require(j, "n_test", where), "n_test");
    c.master_seed = get_as<std::uint64_t>(require(j, "master_seed", where), "master_seed");
    c.output = get_as<std::string>(require(j, "output", where), "output");

    const Json& s = require(j, "schedule", where);
    const auto mode = get_as<std::string>(require(s, "mode", "schedule"), "schedule.mode");
    if (mode == "auto") {
        c.schedule = ScheduleMode::automatic;
        reject_unknown(s, {"mode", "lambda_scale", "calibration"}, "schedule");
        const Json& scale = require(s, "lambda_scale", "schedule");
        if (scale.is_number()) {
            c.lambda_scale = scale.get<double>();
            if (s.contains("calibration")) throw ConfigError("schedule: calibration block given with a fixed lambda_scale");
        } else if (scale == "calibrate") {
            const Json& cal = require(s, "calibration", "schedule");
            reject_unknown(cal, {"estimator", "replications", "grid"}, "calibration");
            Calibration cb;
            try {
                cb.estimator = parse_estimator(get_as<std::string>(require(cal, "estimator", "calibration"),
                                                                   "calibration.estimator"));
            } catch (const ContractError& e) {
                throw ConfigError(std::string("calibration: ") + e.what());
            }
            cb.replications = get_as<std::size_t>(require(cal, "replications", "calibration"), "calibration.replications");
            cb.grid = get_as<std::vector<double>>(require(cal, "grid", "calibration"), "calibration.grid");
            c.calibration = std::move(cb);
        } else {
            throw ConfigError("schedule: lambda_scale must be a number or \"calibrate\"");
        }
    } else if (mode == "explicit") {
        c.schedule = ScheduleMode::explicit_lists;
        reject_unknown(s, {"mode", "lambda", "m", "l"}, "schedule");
        c.lambdas = get_as<std::vector<double>>(require(s, "lambda", "schedule"), "schedule.lambda");
        c.ms = get_as<std::vector<std::size_t>>(require(s, "m", "schedule"), "schedule.m");
        c.ls = get_as<std::vector<std::size_t>>(require(s, "l", "schedule"), "schedule.l");
    } else {
        throw ConfigError("schedule.mode: expected \"auto\" or \"explicit\", got \"" + mode + "\"");
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    Json j;
    try {
        j = read_json_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return parse_config(j);
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["experiment"] = c.kind == ExperimentKind::rate ? "rate" : "improved_bound";
    j["task"] = c.task_json;
    Json names = Json::array();
    for (auto k : c.estimators) names.push_back(std::string(estimator_name(k)));
    j["estimators"] = std::move(names);
    j["n_grid"] = c.n_grid;
    j["replications"] = c.replications;
    j["n_test"] = c.n_test;
    j["master_seed"] = c.master_seed;
    j["output"] = c.output;
    if (c.schedule == ScheduleMode::explicit_lists) {
        j["schedule"] = Json{{"mode", "explicit"}, {"lambda", c.lambdas}, {"m", c.ms}, {"l", c.ls}};
    } else if (c.lambda_scale) {
        j["schedule"] = Json{{"mode", "auto"}, {"lambda_scale", *c.lambda_scale}};
    } else {
        j["schedule"] = Json{{"mode", "auto"},
                             {"lambda_scale", "calibrate"},
                             {"calibration",
                              {{"estimator", std::string(estimator_name(c.calibration->estimator))},
                               {"replications", c.calibration->replications},
                               {"grid", c.calibration->grid}}}};
    }
    return j;
}

bool operator==(const RateRow& a, const RateRow& b) {
    const bool mise_eq = (std::isnan(a.mise) && std::isnan(b.mise)) || a.mise == b.mise;
    return mise_eq && a.estimator == b.estimator && a.n == b.n && a.m == b.m && a.l == b.l && a.lambda == b.lambda &&
           a.rep == b.rep && a.fit_seconds == b.fit_seconds && a.min_cell_count == b.min_cell_count &&
           a.warning == b.warning;
}

bool operator==(const SlopeFit& a, const SlopeFit& b) {
    return a.slope == b.slope && a.stderr_ == b.stderr_ && a.points == b.points;
}

bool RateReport::has_errors() const {
    return std::any_of(rows.begin(), rows.end(),
                       [](const RateRow& r) { return r.warning.find("error:") != std::string::npos; });
}

std::map<std::size_t, double> RateReport::mean_mise(const std::string& estimator) const {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& r : rows) {
        if (r.estimator != estimator || !std::isfinite(r.mise)) continue;
        auto& [sum, count] = acc[r.n];
        sum += r.mise;
        ++count;
    }
    std::map<std::size_t, double> out;
    for (const auto& [n, sc] : acc) out[n] = sc.first / static_cast<double>(sc.second);
    return out;
}

bool operator==(const RateReport& a, const RateReport& b) {
    return a.rows == b.rows && a.slopes == b.slopes && a.theoretical_exponent == b.theoretical_exponent &&
           a.lambda_scale == b.lambda_scale && a.diagnostics == b.diagnostics;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ContractError("fit_loglog_slope: need at least 2 points");
    const std::size_t k = points.size();
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto [n, mise] = points[i];
        if (!(n > 0.0)) throw ContractError("fit_loglog_slope: n must be positive");
        if (!(mise > 0.0)) throw ContractError("fit_loglog_slope: mise must be positive");
        lx[i] = std::log(n);
        ly[i] = std::log(mise);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw ContractError("fit_loglog_slope: n values must not all coincide");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.points = k;
    if (k > 2) {
        const double intercept = my - fit.slope * mx;
        double rss = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double e = ly[i] - intercept - fit.slope * lx[i];
            rss += e * e;
        }
        fit.stderr_ = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
    }
    return fit;
}

std::uint64_t unit_seed(std::uint64_t master, std::string_view estimator, std::size_t n, std::size_t rep) {
    std::uint64_t s = derive_seed(master, hash_name(estimator));
    s = derive_seed(s, static_cast<std::uint64_t>(n));
    return derive_seed(s, static_cast<std::uint64_t>(rep));
}

double resolve_lambda_scale(const ExperimentConfig& c, Smoothness which) {
    if (c.schedule == ScheduleMode::explicit_lists) return 1.0;
    if (c.lambda_scale) return *c.lambda_scale;
    const Calibration& cal = *c.calibration;
    const std::string label = "calibration:" + std::string(estimator_name(cal.estimator));
    QuietWarnings quiet;
    double best_scale = cal.grid.front();
    double best = std::numeric_limits<double>::infinity();
    for (double scale : cal.grid) {
        const Schedule s = schedule_at(c, 0, scale, which, which);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t rep = 0; rep < cal.replications; ++rep) {
            const RateRow row = run_unit(c, cal.estimator, c.n_grid.front(), rep, s, label);
            if (std::isfinite(row.mise)) {
                sum += row.mise;
                ++count;
            }
        }
        if (count == cal.replications && sum / static_cast<double>(count) < best) {
            best = sum / static_cast<double>(count);
            best_scale = scale;
        }
    }
    if (!std::isfinite(best)) throw Error("calibration: every candidate lambda scale had a failed fit");
    return best_scale;
}

RateReport run_rate_experiment(const ExperimentConfig& c) {
    c.validate();
    const double scale = resolve_lambda_scale(c, Smoothness::global);
    return run_experiment(c, scale, Smoothness::global, Smoothness::global, c.estimators);
}

ImprovedBoundReport run_improved_bound_experiment(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::improved_bound) throw ConfigError("improved_bound: config is not an improved_bound experiment");
    const auto& pw = std::get<PiecewiseTarget>(c.task.target);
    // one constant for both runs, fitted on the r_high schedule
    const double scale = resolve_lambda_scale(c, Smoothness::high);
    ImprovedBoundReport out;
    out.high = run_experiment(c, scale, Smoothness::high, Smoothness::high, c.estimators);
    out.low = run_experiment(c, scale, Smoothness::low, Smoothness::high, c.estimators);
    out.exceptional_mass = exceptional_mass(pw);
    out.mass_admissible = exceptional_mass_admissible(pw, c.task.gamma, c.n_grid.back());

    for (std::size_t n : c.n_grid) {
        std::vector<double> hi, lo, diff;
        for (std::size_t rep = 0; rep < c.replications; ++rep) {
            auto find = [&](const RateReport& r) {
                for (const auto& row : r.rows) {
                    if (row.n == n && row.rep == rep) return row.mise;
                }
                return std::numeric_limits<double>::quiet_NaN();
            };
            const double h = find(out.high), l = find(out.low);
            if (!std::isfinite(h) || !std::isfinite(l)) continue;
            hi.push_back(h);
            lo.push_back(l);
            diff.push_back(l - h);
        }
        PairedPoint p;
        p.n = n;
        const auto mean = [](const std::vector<double>& v) {
            return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        p.mean_high = mean(hi);
        p.mean_low = mean(lo);
        p.mean_diff = mean(diff);
        if (diff.size() >= 2) {
            double ss = 0.0;
            for (double d : diff) ss += (d - p.mean_diff) * (d - p.mean_diff);
            p.stderr_diff = std::sqrt(ss / static_cast<double>(diff.size() - 1) / static_cast<double>(diff.size()));
            p.z = p.stderr_diff > 0.0 ? p.mean_diff / p.stderr_diff
                                      : (p.mean_diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        } else {
            p.stderr_diff = std::numeric_limits<double>::quiet_NaN();
            p.z = std::numeric_limits<double>::quiet_NaN();
        }
        out.paired.push_back(p);
    }
    return out;
}

TimingTable run_timing_benchmark(const ExperimentConfig& c, std::size_t repeats) {
    c.validate();
    if (repeats < 1) throw ContractError("run_timing_benchmark: repeats must be >= 1");
    QuietWarnings quiet;
    // fit cost barely depends on the lambda constant, so no calibration here
    const double scale = c.lambda_scale.value_or(1.0);
    TimingTable table;
    for (EstimatorKind kind : c.estimators) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
            const std::size_t n = c.n_grid[i];
            const Schedule s = schedule_at(c, i, scale, Smoothness::global, Smoothness::global);
            const UnitData data = draw_unit(c.task, unit_seed(c.master_seed, estimator_name(kind), n, 0), n);
            TimingRow tr;
            tr.estimator = std::string(estimator_name(kind));
            tr.n = n;
            for (std::size_t k = 0; k < repeats; ++k) {
                const FitOutcome out = fit_unit(c, kind, n, 0, s, data);
                if (!out.model) throw Error("timing: fit failed: " + out.row.warning);
                tr.m = out.row.m;
                tr.l = out.row.l;
                tr.samples.push_back(out.row.fit_seconds);
            }
            std::vector<double> sorted = tr.samples;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t mid = sorted.size() / 2;
            tr.median_seconds = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
            if (tr.median_seconds > 0.0) pts.emplace_back(static_cast<double>(n), tr.median_seconds);
            table.rows.push_back(std::move(tr));
        }
        if (pts.size() >= 2) table.exponents[std::string(estimator_name(kind))] = fit_loglog_slope(pts);
    }
    return table;
}

void emit_report(const RateReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "rows.csv", std::ios::trunc);
        if (!out) throw ContractError("cannot write " + (dir / "rows.csv").string());
        out << kRowsHeader << '\n';
        for (const auto& r : report.rows) {
            out << r.estimator << ',' << r.n << ',' << r.m << ',' << r.l << ',' << format_double(r.lambda) << ','
                << r.rep << ',' << format_double(r.mise) << ',' << format_double(r.fit_seconds) << ','
                << r.min_cell_count << ',' << r.warning << '\n';
        }
    }
    Json means = Json::object();
    std::set<std::string> names;
    for (const auto& r : report.rows) names.insert(r.estimator);
    for (const auto& name : names) {
        Json m = Json::object();
        for (const auto& [n, v] : report.mean_mise(name)) m[std::to_string(n)] = v;
        means[name] = std::move(m);
    }
    write_json_file(dir / "summary.json", Json{{"theoretical_exponent", report.theoretical_exponent},
                                               {"lambda_scale", report.lambda_scale},
                                               {"slopes", slopes_to_json(report.slopes)},
                                               {"mean_mise", std::move(means)},
                                               {"diagnostics", report.diagnostics}});
}

std::vector<RateRow> read_rows_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kRowsHeader) throw ContractError(path.string() + ": unexpected header");
    std::vector<RateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            f.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (f.size() != 10) throw ContractError(path.string() + ": expected 10 fields");
        RateRow r;
        r.estimator = f[0];
        r.n = parse_count(f[1]);
        r.m = parse_count(f[2]);
        r.l = parse_count(f[3]);
        r.lambda = parse_double(f[4]);
        r.rep = parse_count(f[5]);
        r.mise = parse_double(f[6]);
        r.fit_seconds = parse_double(f[7]);
        r.min_cell_count = parse_count(f[8]);
        r.warning = f[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

RateReport read_report(const std::filesystem::path& dir) {
    RateReport report;
    report.rows = read_rows_csv(dir / "rows.csv");
    const Json s = read_json_file(dir / "summary.json");
    report.theoretical_exponent = s.at("theoretical_exponent").get<double>();
    report.lambda_scale = s.at("lambda_scale").get<double>();
    report.slopes = slopes_from_json(s.at("slopes"));
    report.diagnostics = s.at("diagnostics");
    return report;
}

void emit_improved_bound_report(const ImprovedBoundReport& report, const std::filesystem::path& dir) {
    emit_report(report.high, dir / "high");
    emit_report(report.low, dir / "low");
    Json paired = Json::array();
    for (const auto& p : report.paired) {
        paired.push_back(Json{{"n", p.n},
                              {"mean_high", p.mean_high},
                              {"mean_low", p.mean_low},
                              {"mean_diff", p.mean_diff},
                              {"stderr_diff", p.stderr_diff},
                              {"z", p.z}});
    }
    write_json_file(dir / "paired.json", Json{{"exceptional_mass", report.exceptional_mass},
                                              {"mass_admissible", report.mass_admissible},
                                              {"paired", std::move(paired)}});
}

void emit_timing_table(const TimingTable& table, const std::filesystem::path& path) {
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back(Json{{"estimator", r.estimator},
                            {"n", r.n},
                            {"m", r.m},
                            {"l", r.l},
                            {"median_seconds", r.median_seconds},
                            {"samples", r.samples}});
    }
    write_json_file(path, Json{{"rows", std::move(rows)}, {"exponents", slopes_to_json(table.exponents)}});
}

}  // namespace pkrls

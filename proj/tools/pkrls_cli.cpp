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

// Command-line front end: synth, fit, predict, experiment, bench, report.
// Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "pkrls/harness.hpp"

namespace {

using namespace pkrls;

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

struct KernelOptions {
    std::string family = "brownian";
    double bandwidth = 1.0;
    int degree = 1;
    double offset = 0.0;
    std::string file;
};

void add_kernel_options(CLI::App* cmd, KernelOptions& k) {
    cmd->add_option("--kernel", k.family, "gaussian | laplacian | brownian | polynomial");
    cmd->add_option("--bandwidth", k.bandwidth, "gaussian / laplacian bandwidth");
    cmd->add_option("--degree", k.degree, "polynomial degree");
    cmd->add_option("--offset", k.offset, "polynomial offset");
    cmd->add_option("--kernel-file", k.file, "kernel spec JSON (overrides the flags above)");
}

KernelSpec kernel_from_options(const KernelOptions& k, std::size_t dim) {
    if (!k.file.empty()) return kernel_from_json(read_json_file(k.file));
    KernelSpec s;
    s.family = parse_family(k.family);
    s.bandwidth = k.bandwidth;
    s.degree = k.degree;
    s.offset = k.offset;
    s.domain = Box::unit(dim);
    s.validate();
    return s;
}

int cmd_synth(const std::string& task_path, std::size_t n, std::uint64_t seed, const std::string& out,
              const std::string& resolved) {
    const SyntheticTask task = task_from_json(read_json_file(task_path));
    const PointSet X = gen_inputs(task, n, derive_seed(seed, 0));
    const Vector y = sample_labels(task, X, derive_seed(seed, 1));
    write_dataset_csv(out, X, &y);
    if (!resolved.empty()) write_json_file(resolved, task_to_json(task));
    return kOk;
}

int cmd_fit(const std::string& data_path, const std::string& estimator, double lambda, std::size_t m,
            std::size_t l, std::uint64_t seed, const KernelOptions& ko, const std::string& out) {
    const Dataset ds = read_dataset_csv(data_path);
    const KernelSpec spec = kernel_from_options(ko, static_cast<std::size_t>(ds.X.cols()));
    EstimatorSettings s{parse_estimator(estimator), lambda, m, l, seed};
    if ((s.kind == EstimatorKind::nystrom || s.kind == EstimatorKind::localized_nystrom) && s.l == 0) {
        throw ConfigError("--l is required for the nystrom estimators");
    }
    save_model(fit_estimator(s, ds.X, ds.y, spec), out);
    return kOk;
}

int cmd_predict(const std::string& model_path, const std::string& points, bool labelled, const std::string& out) {
    const AnyModel model = load_model(model_path);
    const Dataset ds = read_dataset_csv(points, labelled);
    const Vector f = predict(model, ds.X);
    std::FILE* sink = stdout;
    if (!out.empty()) {
        sink = std::fopen(out.c_str(), "w");
        if (sink == nullptr) throw ContractError("cannot write " + out);
    }
    std::fprintf(sink, "prediction\n");
    for (Eigen::Index i = 0; i < f.size(); ++i) std::fprintf(sink, "%.17g\n", f[i]);
    if (sink != stdout) std::fclose(sink);
    return kOk;
}

void print_summary(const RateReport& r, std::ostream& os) {
    std::set<std::string> names;
    for (const auto& row : r.rows) names.insert(row.estimator);
    os << "theoretical exponent " << r.theoretical_exponent << ", lambda scale " << r.lambda_scale << '\n';
    for (const auto& name : names) {
        os << name << '\n';
        for (const auto& [n, mean] : r.mean_mise(name)) os << "  n=" << n << "  mean_mise=" << mean << '\n';
        if (auto it = r.slopes.find(name); it != r.slopes.end()) {
            os << "  slope " << it->second.slope << " +- " << it->second.stderr_ << '\n';
        }
    }
    std::size_t flagged = 0;
    for (const auto& row : r.rows) flagged += row.warning.empty() ? 0 : 1;
    if (flagged) os << flagged << " row(s) carry warnings\n";
}

int cmd_experiment(const std::string& config_path, const std::string& output_override) {
    ExperimentConfig c = load_config(config_path);
    if (!output_override.empty()) c.output = output_override;
    const std::filesystem::path dir = c.output;
    write_json_file(dir / "config.json", config_to_json(c));
    write_json_file(dir / "task.json", task_to_json(c.task));
    bool errors = false;
    if (c.kind == ExperimentKind::rate) {
        const RateReport r = run_rate_experiment(c);
        emit_report(r, dir);
        print_summary(r, std::cout);
        errors = r.has_errors();
    } else {
        const ImprovedBoundReport r = run_improved_bound_experiment(c);
        emit_improved_bound_report(r, dir);
        std::cout << "exceptional mass " << r.exceptional_mass << (r.mass_admissible ? " (admissible)\n" : " (NOT admissible)\n");
        for (const auto& p : r.paired) {
            std::cout << "n=" << p.n << "  high=" << p.mean_high << "  low=" << p.mean_low << "  z=" << p.z << '\n';
        }
        errors = r.high.has_errors() || r.low.has_errors();
    }
    if (errors) {
        std::cerr << "some fits failed; see the warning column\n";
        return kNumericalFailure;
    }
    return kOk;
}

int cmd_bench(const std::string& config_path, std::size_t repeats, const std::string& out) {
    const ExperimentConfig c = load_config(config_path);
    const TimingTable t = run_timing_benchmark(c, repeats);
    for (const auto& r : t.rows) {
        std::cout << std::left << std::setw(18) << r.estimator << " n=" << std::setw(7) << r.n << " m=" << std::setw(4)
                  << r.m << " l=" << std::setw(6) << r.l << " median " << r.median_seconds << " s\n";
    }
    for (const auto& [name, s] : t.exponents) std::cout << name << ": time ~ n^" << s.slope << '\n';
    if (!out.empty()) emit_timing_table(t, out);
    return kOk;
}

int cmd_report(const std::string& dir) {
    print_summary(read_report(dir), std::cout);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pkrls: partitioned and subsampled kernel regularized least squares"};
    app.require_subcommand(1);

    std::string task_path, out, resolved, data_path, estimator = "krls", model_path, points, config_path, dir;
    std::size_t n = 0, m = 1, l = 0, repeats = 5;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    bool labelled = false, quiet = false;
    KernelOptions ko;

    app.add_flag("-q,--quiet", quiet, "suppress library warnings");

    auto* synth = app.add_subcommand("synth", "sample a labelled data set from a task description");
    synth->add_option("--task", task_path, "task JSON")->required();
    synth->add_option("-n", n, "sample size")->required();
    synth->add_option("--seed", seed, "seed")->required();
    synth->add_option("-o,--out", out, "output CSV")->required();
    synth->add_option("--resolved", resolved, "also write the resolved task (coefficients) as JSON");

    auto* fit = app.add_subcommand("fit", "train an estimator and write the model file");
    fit->add_option("--data", data_path, "training CSV (x0..x{d-1},y)")->required();
    fit->add_option("--estimator", estimator, "krls | localized | nystrom | localized_nystrom | distributed_avg");
    fit->add_option("--lambda", lambda, "regularization parameter")->required();
    fit->add_option("--m", m, "cells or chunks");
    fit->add_option("--l", l, "landmarks (per cell for localized_nystrom)");
    fit->add_option("--seed", seed, "landmark / split seed");
    fit->add_option("-o,--out", out, "model JSON")->required();
    add_kernel_options(fit, ko);

    auto* pred = app.add_subcommand("predict", "evaluate a model file at points");
    pred->add_option("--model", model_path, "model JSON")->required();
    pred->add_option("--points", points, "points CSV")->required();
    pred->add_flag("--labelled", labelled, "the points CSV has a trailing y column");
    pred->add_option("-o,--out", out, "output CSV (default stdout)");

    auto* exp = app.add_subcommand("experiment", "run a rate or improved_bound experiment");
    exp->add_option("--config", config_path, "experiment config JSON")->required();
    exp->add_option("--output", dir, "override the config's output directory");

    auto* bench = app.add_subcommand("bench", "median-of-k fit timings over the config's n grid");
    bench->add_option("--config", config_path, "experiment config JSON")->required();
    bench->add_option("--repeats", repeats, "fits per (estimator, n)");
    bench->add_option("-o,--out", out, "timing JSON");

    auto* report = app.add_subcommand("report", "summarize a report directory");
    report->add_option("--dir", dir, "directory holding rows.csv and summary.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigFailure;
    }
    if (quiet) set_warnings_enabled(false);

    try {
        if (*synth) return cmd_synth(task_path, n, seed, out, resolved);
        if (*fit) return cmd_fit(data_path, estimator, lambda, m, l, seed, ko, out);
        if (*pred) return cmd_predict(model_path, points, labelled, out);
        if (*exp) return cmd_experiment(config_path, dir);
        if (*bench) return cmd_bench(config_path, repeats, out);
        if (*report) return cmd_report(dir);
    } catch (const IllConditionedError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const CellFitError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigFailure;
    }
    return kConfigFailure;
}

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

#ifndef PKRLS_HARNESS_HPP
#define PKRLS_HARNESS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pkrls/error.hpp"
#include "pkrls/io.hpp"

namespace pkrls {

/// Malformed or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ExperimentKind { rate, improved_bound };
enum class ScheduleMode { automatic, explicit_lists };

/// Picks the lambda constant c (lambda = c * lambda_schedule(n)) that
/// minimizes mean MISE at the smallest n of the grid.
struct Calibration {
    EstimatorKind estimator = EstimatorKind::krls;
    std::size_t replications = 1;
    std::vector<double> grid;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::rate;
    Json task_json;
    SyntheticTask task;
    std::vector<EstimatorKind> estimators;
    std::vector<std::size_t> n_grid;
    std::size_t replications = 1;
    ScheduleMode schedule = ScheduleMode::automatic;
    /// automatic mode: fixed constant, or calibrated when this is empty
    std::optional<double> lambda_scale;
    std::optional<Calibration> calibration;
    /// explicit mode: one entry per n
    std::vector<double> lambdas;
    std::vector<std::size_t> ms;
    std::vector<std::size_t> ls;
    std::size_t n_test = 1;
    std::uint64_t master_seed = 0;
    std::string output;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Every field is required; unknown fields are rejected.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
Json config_to_json(const ExperimentConfig& config);

struct RateRow {
    std::string estimator;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t l = 0;
    double lambda = 0.0;
    std::size_t rep = 0;
    double mise = 0.0;  ///< NaN when the fit failed
    double fit_seconds = 0.0;
    std::size_t min_cell_count = 0;
    std::string warning;  ///< ';'-separated tags, empty when clean
};

bool operator==(const RateRow& a, const RateRow& b);  // NaN mise compares equal to NaN

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
};

bool operator==(const SlopeFit& a, const SlopeFit& b);

struct RateReport {
    std::vector<RateRow> rows;
    /// per estimator; missing when fewer than two n values have a finite mean
    std::map<std::string, SlopeFit> slopes;
    double theoretical_exponent = 0.0;
    double lambda_scale = 1.0;
    /// schedule and sample-size diagnostics per n
    Json diagnostics = Json::object();

    bool has_errors() const;
    /// Mean MISE over replications at each n (failed rows skipped).
    std::map<std::size_t, double> mean_mise(const std::string& estimator) const;
};

bool operator==(const RateReport& a, const RateReport& b);

/// OLS of log(mise) on log(n). Needs >= 2 distinct n and positive mise.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Seed of one (estimator, n, rep) unit.
std::uint64_t unit_seed(std::uint64_t master, std::string_view estimator, std::size_t n, std::size_t rep);

/// Lambda constant for the config: the fixed one, or the calibrated one.
double resolve_lambda_scale(const ExperimentConfig& config, Smoothness which = Smoothness::global);

RateReport run_rate_experiment(const ExperimentConfig& config);

struct PairedPoint {
    std::size_t n = 0;
    double mean_high = 0.0;  ///< mean MISE, r_high schedule
    double mean_low = 0.0;   ///< mean MISE, r_low schedule
    double mean_diff = 0.0;  ///< mean of (low - high) over paired replications
    double stderr_diff = 0.0;
    double z = 0.0;  ///< mean_diff / stderr_diff
};

struct ImprovedBoundReport {
    RateReport high;
    RateReport low;
    std::vector<PairedPoint> paired;
    double exceptional_mass = 0.0;
    bool mass_admissible = false;  ///< mass condition at the largest n
};

ImprovedBoundReport run_improved_bound_experiment(const ExperimentConfig& config);

struct TimingRow {
    std::string estimator;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t l = 0;
    double median_seconds = 0.0;
    std::vector<double> samples;
};

struct TimingTable {
    std::vector<TimingRow> rows;
    std::map<std::string, SlopeFit> exponents;  ///< log-log slope of time in n
};

/// Median of `repeats` fits per (estimator, n) on the rep-0 data stream.
TimingTable run_timing_benchmark(const ExperimentConfig& config, std::size_t repeats = 5);

inline constexpr const char* kRowsHeader = "estimator,n,m,l,lambda,rep,mise,fit_seconds,min_cell_count,warning";

/// Writes dir/rows.csv and dir/summary.json, replacing existing files.
void emit_report(const RateReport& report, const std::filesystem::path& dir);
RateReport read_report(const std::filesystem::path& dir);

std::vector<RateRow> read_rows_csv(const std::filesystem::path& path);

/// high/ and low/ reports plus dir/paired.json.
void emit_improved_bound_report(const ImprovedBoundReport& report, const std::filesystem::path& dir);

void emit_timing_table(const TimingTable& table, const std::filesystem::path& path);

}  // namespace pkrls

#endif  // PKRLS_HARNESS_HPP

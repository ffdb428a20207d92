#pragma once

#include "rcthermo/metrology.hpp"
#include "rcthermo/model.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rcthermo {

// n_points values from lo to hi, evenly spaced in log10.
std::vector<double> log_space(double lo, double hi, int n_points);

struct TemperatureGrid {
    double t_min = 1e-2;
    double t_max = 1e2;
    int n_points = 100;

    [[nodiscard]] std::vector<double> values() const { return log_space(t_min, t_max, n_points); }
};

struct SweepConfig {
    int n_spins = 1;
    int boson_levels = 50;
    double delta = 1.0;
    double omega = 15.0;
    std::vector<double> lambdas{0.0};
    CouplingKind coupling = CouplingKind::X;
    TemperatureGrid grid;
    // When non-empty, replaces the log grid.
    std::vector<double> temperatures;
    SchemeSet schemes;
    // If > 0, every point is recomputed at boson_levels + convergence_step and
    // the relative change of snr_optimal is stored on the record.
    int convergence_step = 0;
    std::filesystem::path output;
    int workers = 1;
    std::size_t max_dim = kDefaultMaxDim;

    void validate() const;
    [[nodiscard]] std::vector<double> temperature_values() const;
    [[nodiscard]] ModelParams model(double lambda) const;
};

struct SweepRecord {
    ModelParams params;
    double temperature = 0.0;
    double beta = 0.0;
    SnrReport report;
    std::optional<double> convergence_delta;
    // Empty on success, otherwise the diagnostic of the failed grid point.
    std::string error;

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
    [[nodiscard]] int boson_levels_used() const noexcept { return params.boson_levels; }
};

struct SweepResult {
    // Sorted by (lambda, temperature).
    std::vector<SweepRecord> records;
    std::size_t decompositions = 0;

    [[nodiscard]] std::size_t failures() const;
};

// Worker count after applying the RCTHERMO_WORKERS environment override.
int resolve_workers(int requested);

// One eigendecomposition per lambda, shared read-only by all temperatures,
// which are evaluated on a pool of workers. Failures at a grid point are
// recorded on that record; they do not abort the sweep.
SweepResult run_sweep(const SweepConfig &config);

struct CurveChange {
    double lambda = 0.0;
    double max_relative_change = 0.0;
    double at_temperature = 0.0;
};

struct ConvergenceReport {
    int base_levels = 0;
    int refined_levels = 0;
    std::vector<CurveChange> curves;

    [[nodiscard]] double max_relative_change() const;
};

// Reruns the grid at boson_levels + delta_m and reports, per lambda, the
// largest relative change of snr_optimal over the temperature grid.
ConvergenceReport convergence_check(const SweepConfig &config, int delta_m);

// Canonical CSV: header row then one line per record; floats with 16
// significant digits. Failed records are not written (see write_error_log).
inline constexpr const char *kCsvHeader =
    "n_spins,boson_levels,delta,omega,lambda,coupling_kind,temperature,beta,snr_optimal,snr_dephased,"
    "snr_polarization,snr_weak_reference,coherence_l1";

std::string format_csv(std::span<const SweepRecord> records);
void write_csv(const std::filesystem::path &path, std::span<const SweepRecord> records);

// Writes failed records (lambda, temperature, message) next to `csv_path` as
// <stem>.errors.csv. Returns the path, or nothing if there were no failures.
std::optional<std::filesystem::path> write_error_log(const std::filesystem::path &csv_path,
                                                     std::span<const SweepRecord> records);

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

// key = value text; tool_version and timestamp are added first.
void write_manifest(const std::filesystem::path &path, const ManifestEntries &entries);

std::string format_double(double value);

} // namespace rcthermo

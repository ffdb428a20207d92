#include "rcthermo/sweep.hpp"

#include "rcthermo/error.hpp"
#include "rcthermo/thermal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace rcthermo {

std::vector<double> log_space(double lo, double hi, int n_points) {
    if (!(lo > 0.0) || !(hi >= lo))
        throw DomainError("log_space: need 0 < lo <= hi");
    if (n_points < 1)
        throw DomainError("log_space: n_points must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n_points));
    if (n_points == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n_points; ++i)
        out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n_points - 1));
    out.back() = hi;
    return out;
}

void SweepConfig::validate() const {
    model(lambdas.empty() ? 0.0 : lambdas.front()).validate();
    if (lambdas.empty())
        throw DomainError("sweep: lambda list must not be empty");
    std::set<double> seen;
    for (double l : lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l))
            throw DomainError("sweep: lambda values must be finite and >= 0");
        if (!seen.insert(l).second)
            throw DomainError("sweep: duplicate lambda " + format_double(l));
    }
    if (temperatures.empty()) {
        if (!(grid.t_min > 0.0))
            throw DomainError("sweep: t_min must be positive");
        if (!(grid.t_max >= grid.t_min))
            throw DomainError("sweep: t_max must be >= t_min");
        if (grid.n_points < 2)
            throw DomainError("sweep: n_points must be >= 2");
    } else {
        for (double t : temperatures)
            if (!(t > 0.0) || !std::isfinite(t))
                throw DomainError("sweep: temperatures must be positive and finite");
    }
    if (convergence_step < 0)
        throw DomainError("sweep: convergence_step must be >= 0");
    if (workers < 1)
        throw DomainError("sweep: workers must be >= 1");
    SpaceLayout::create(n_spins, boson_levels + convergence_step, max_dim);
}

std::vector<double> SweepConfig::temperature_values() const {
    return temperatures.empty() ? grid.values() : temperatures;
}

ModelParams SweepConfig::model(double lambda) const {
    ModelParams p;
    p.delta = delta;
    p.omega = omega;
    p.lambda = lambda;
    p.coupling = coupling;
    p.n_spins = n_spins;
    p.boson_levels = boson_levels;
    return p;
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto &r) { return !r.ok(); }));
}

int resolve_workers(int requested) {
    if (const char *env = std::getenv("RCTHERMO_WORKERS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 1)
            throw DomainError(std::string("RCTHERMO_WORKERS must be a positive integer, got '") + env + "'");
        return static_cast<int>(value);
    }
    return std::max(1, requested);
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn &&fn) {
    const auto pool_size = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
    if (pool_size <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
}

double relative_change(double base, double refined) {
    const double diff = std::abs(refined - base);
    if (diff == 0.0)
        return 0.0;
    const double scale = std::max(std::abs(base), std::abs(refined));
    return diff / scale;
}

} // namespace

SweepResult run_sweep(const SweepConfig &config) {
    config.validate();
    const auto temps = config.temperature_values();
    const int workers = resolve_workers(config.workers);

    SweepResult result;
    result.records.reserve(config.lambdas.size() * temps.size());
    for (double lambda : config.lambdas) {
        const ModelParams params = config.model(lambda);
        const SpaceLayout space = params.layout(config.max_dim);
        std::vector<SweepRecord> block(temps.size());
        for (std::size_t i = 0; i < temps.size(); ++i) {
            block[i].params = params;
            block[i].temperature = temps[i];
            block[i].beta = 1.0 / temps[i];
            block[i].report.temperature = temps[i];
        }

        std::optional<SpectralDecomposition> decomp;
        std::optional<SpectralDecomposition> refined;
        std::optional<SpaceLayout> refined_space;
        try {
            decomp = decompose_model(params, config.max_dim);
            ++result.decompositions;
            if (config.convergence_step > 0) {
                ModelParams up = params;
                up.boson_levels += config.convergence_step;
                refined_space = up.layout(config.max_dim);
                refined = decompose_model(up, config.max_dim);
                ++result.decompositions;
            }
        } catch (const std::exception &e) {
            for (auto &r : block)
                r.error = std::string("decomposition failed: ") + e.what();
            std::move(block.begin(), block.end(), std::back_inserter(result.records));
            continue;
        }

        parallel_for(temps.size(), workers, [&](std::size_t i) {
            auto &rec = block[i];
            try {
                const auto state = reduced_probe_state(*decomp, rec.beta, space);
                rec.report = evaluate_snr(state, params.n_spins, params.delta, config.schemes);
                if (refined) {
                    SchemeSet only_optimal{true, false, false, false, false};
                    const auto up = reduced_probe_state(*refined, rec.beta, *refined_space);
                    const auto up_report = evaluate_snr(up, params.n_spins, params.delta, only_optimal);
                    rec.convergence_delta = relative_change(rec.report.snr_optimal, up_report.snr_optimal);
                }
            } catch (const std::exception &e) {
                rec.error = e.what();
            }
        });
        std::move(block.begin(), block.end(), std::back_inserter(result.records));
    }
    std::stable_sort(result.records.begin(), result.records.end(), [](const auto &a, const auto &b) {
        if (a.params.lambda != b.params.lambda)
            return a.params.lambda < b.params.lambda;
        return a.temperature < b.temperature;
    });
    return result;
}

double ConvergenceReport::max_relative_change() const {
    double m = 0.0;
    for (const auto &c : curves)
        m = std::max(m, c.max_relative_change);
    return m;
}

ConvergenceReport convergence_check(const SweepConfig &config, int delta_m) {
    if (delta_m < 1)
        throw DomainError("convergence_check: delta_m must be >= 1");
    SweepConfig base = config;
    base.convergence_step = delta_m;
    base.schemes = SchemeSet{true, false, false, false, false};
    const auto result = run_sweep(base);

    ConvergenceReport report;
    report.base_levels = config.boson_levels;
    report.refined_levels = config.boson_levels + delta_m;
    for (double lambda : config.lambdas) {
        CurveChange change{lambda, 0.0, 0.0};
        for (const auto &r : result.records) {
            if (r.params.lambda != lambda)
                continue;
            if (!r.ok())
                throw NumericalError("convergence_check: grid point T = " + format_double(r.temperature) +
                                     " failed: " + r.error);
            if (r.convergence_delta && *r.convergence_delta >= change.max_relative_change) {
                change.max_relative_change = *r.convergence_delta;
                change.at_temperature = r.temperature;
            }
        }
        report.curves.push_back(change);
    }
    return report;
}

std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", value);
    return buf;
}

std::string format_csv(std::span<const SweepRecord> records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto &r : records) {
        if (!r.ok())
            continue;
        const auto &p = r.params;
        const auto &s = r.report;
        out += std::to_string(p.n_spins) + ',' + std::to_string(p.boson_levels) + ',' + format_double(p.delta) +
               ',' + format_double(p.omega) + ',' + format_double(p.lambda) + ',' + to_string(p.coupling) + ',' +
               format_double(r.temperature) + ',' + format_double(r.beta) + ',' + format_double(s.snr_optimal) +
               ',' + format_double(s.snr_dephased) + ',' + format_double(s.snr_polarization) + ',' +
               format_double(s.snr_weak_reference) + ',' + format_double(s.coherence_l1) + '\n';
    }
    return out;
}

namespace {

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw DomainError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f)
        throw DomainError("failed writing '" + path.string() + "'");
}

} // namespace

void write_csv(const std::filesystem::path &path, std::span<const SweepRecord> records) {
    write_text(path, format_csv(records));
}

std::optional<std::filesystem::path> write_error_log(const std::filesystem::path &csv_path,
                                                     std::span<const SweepRecord> records) {
    std::string text = "n_spins,boson_levels,lambda,temperature,message\n";
    bool any = false;
    for (const auto &r : records) {
        if (r.ok())
            continue;
        any = true;
        std::string msg = r.error;
        std::replace(msg.begin(), msg.end(), '"', '\'');
        text += std::to_string(r.params.n_spins) + ',' + std::to_string(r.params.boson_levels) + ',' +
                format_double(r.params.lambda) + ',' + format_double(r.temperature) + ",\"" + msg + "\"\n";
    }
    if (!any)
        return std::nullopt;
    auto path = csv_path;
    path.replace_filename(csv_path.stem().string() + ".errors.csv");
    write_text(path, text);
    return path;
}

void write_manifest(const std::filesystem::path &path, const ManifestEntries &entries) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream text;
    text << "tool_version = " << RCTHERMO_VERSION << '\n';
    text << "timestamp = " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    for (const auto &[key, value] : entries)
        text << key << " = " << value << '\n';
    write_text(path, text.str());
}

} // namespace rcthermo

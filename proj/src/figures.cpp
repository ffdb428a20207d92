#include "rcthermo/figures.hpp"

#include "rcthermo/error.hpp"

#include <algorithm>
#include <iterator>
#include <utility>

namespace rcthermo {

FigureName parse_figure_name(std::string_view name) {
    if (name == "fig2")
        return FigureName::Fig2;
    if (name == "fig3")
        return FigureName::Fig3;
    if (name == "fig4")
        return FigureName::Fig4;
    if (name == "fig5")
        return FigureName::Fig5;
    if (name == "figA1" || name == "figa1")
        return FigureName::FigA1;
    if (name == "figA2" || name == "figa2")
        return FigureName::FigA2;
    throw DomainError("unknown figure '" + std::string(name) + "' (expected fig2, fig3, fig4, fig5, figA1, figA2)");
}

std::string to_string(FigureName name) {
    switch (name) {
    case FigureName::Fig2: return "fig2";
    case FigureName::Fig3: return "fig3";
    case FigureName::Fig4: return "fig4";
    case FigureName::Fig5: return "fig5";
    case FigureName::FigA1: return "figA1";
    case FigureName::FigA2: return "figA2";
    }
    return "unknown";
}

namespace {

std::string tag(double value) {
    std::string s = format_double(value);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

SweepConfig base_config(int n_spins, int boson_levels, const TemperatureGrid &grid) {
    SweepConfig c;
    c.n_spins = n_spins;
    c.boson_levels = boson_levels;
    c.omega = 15.0;
    c.grid = grid;
    return c;
}

// Couplings used for the measurement-scheme comparison, one per probe size.
// Picked where the low-temperature optimal SNR exceeds the weak-coupling one.
// Close to the coupling that maximizes the low-temperature SNR of each probe.
double fig5_lambda(int n_spins) {
    switch (n_spins) {
    case 2: return 5.0;
    case 4: return 2.5;
    default: return 1.25;
    }
}

} // namespace

std::vector<FigureJob> figure_jobs(FigureName name, const FigureOptions &options) {
    std::vector<FigureJob> jobs;
    const auto levels = [&](int fallback) { return options.boson_levels.value_or(fallback); };
    const auto points = [&](int fallback) { return options.n_points.value_or(fallback); };

    switch (name) {
    case FigureName::Fig2:
    case FigureName::FigA1: {
        auto c = base_config(1, levels(50), {1e-2, 1e2, points(200)});
        c.lambdas = {5.0, 10.0, 15.0, 20.0};
        c.coupling = name == FigureName::Fig2 ? CouplingKind::X : CouplingKind::XZ_MIX;
        jobs.push_back({to_string(name) + ".csv", c});
        break;
    }
    case FigureName::Fig3:
        for (double lambda : {1.0, 2.5, 5.0})
            for (int n : {1, 2, 4, 6, 8}) {
                auto c = base_config(n, levels(30), {1e-2, 1e1, points(150)});
                c.lambdas = {lambda};
                jobs.push_back({"fig3_lambda" + tag(lambda) + ".csv", c});
            }
        break;
    case FigureName::Fig4:
        for (int n : {2, 4, 8}) {
            auto c = base_config(n, levels(30), {});
            c.lambdas = log_space(0.1, 20.0, points(40));
            c.temperatures = kFig4Temperatures;
            jobs.push_back({"fig4_n" + std::to_string(n) + ".csv", c});
        }
        break;
    case FigureName::Fig5:
        for (int n : {2, 4, 8}) {
            auto c = base_config(n, levels(30), {1e-2, 1e1, points(150)});
            c.lambdas = {fig5_lambda(n)};
            jobs.push_back({"fig5_n" + std::to_string(n) + ".csv", c});
        }
        break;
    case FigureName::FigA2:
        for (double omega : {2.5, 5.0, 10.0, 15.0, 20.0}) {
            auto c = base_config(2, levels(2000), {1e-2, 1e1, points(150)});
            c.omega = omega;
            c.lambdas = {5.0};
            jobs.push_back({"figA2.csv", c});
        }
        break;
    }

    std::erase_if(jobs, [&](const FigureJob &j) { return options.max_spins && j.config.n_spins > *options.max_spins; });
    for (auto &j : jobs) {
        j.config.workers = options.workers;
        j.config.max_dim = options.max_dim;
        j.config.output = options.out_dir / j.file_name;
    }
    return jobs;
}

FigureOutput figure_pipeline(FigureName name, const FigureOptions &options) {
    // Several jobs may feed the same file (one per probe size or frequency).
    std::vector<std::pair<std::filesystem::path, std::vector<SweepRecord>>> files;
    FigureOutput out;
    for (const auto &job : figure_jobs(name, options)) {
        auto result = run_sweep(job.config);
        out.records += result.records.size();
        out.failures += result.failures();
        auto it = std::find_if(files.begin(), files.end(), [&](const auto &f) { return f.first == job.config.output; });
        if (it == files.end()) {
            files.emplace_back(job.config.output, std::vector<SweepRecord>{});
            it = std::prev(files.end());
        }
        std::move(result.records.begin(), result.records.end(), std::back_inserter(it->second));
    }
    for (const auto &[path, records] : files) {
        write_csv(path, records);
        out.files.push_back(path);
        if (auto err = write_error_log(path, records))
            out.files.push_back(*err);
    }
    return out;
}

} // namespace rcthermo

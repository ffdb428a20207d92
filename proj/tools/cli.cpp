#include "cli.hpp"

#include "rcthermo/config.hpp"
#include "rcthermo/error.hpp"
#include "rcthermo/figures.hpp"
#include "rcthermo/spectral.hpp"
#include "rcthermo/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace rcthermo::cli {

namespace {

namespace fs = std::filesystem;

struct SweepFlags {
    std::string config_file;
    int n_spins = 1;
    int boson_levels = 50;
    double omega = 15.0;
    std::vector<double> lambdas{0.0};
    std::string kind = "x";
    double t_min = 1e-2;
    double t_max = 1e2;
    int points = 100;
    std::vector<double> temps;
    std::string schemes = "all";
    int convergence_step = 0;
    std::size_t max_dim = kDefaultMaxDim;
};

struct CommonFlags {
    fs::path out = ".";
    int workers = 1;
    double delta = 1.0;
};

void add_sweep_flags(CLI::App &app, SweepFlags &f) {
    app.add_option("--config", f.config_file, "Key-value sweep configuration file; flags given explicitly win");
    app.add_option("--n", f.n_spins, "Number of probe spins");
    app.add_option("--m", f.boson_levels, "Reaction-coordinate levels");
    app.add_option("--omega", f.omega, "Reaction-coordinate frequency (units of delta)");
    app.add_option("--lambda", f.lambdas, "Probe-RC coupling(s) (units of delta)")->delimiter(',');
    app.add_option("--kind", f.kind, "Coupling operator: x or xz_mix");
    app.add_option("--t-min", f.t_min, "Lowest temperature (units of delta)");
    app.add_option("--t-max", f.t_max, "Highest temperature (units of delta)");
    app.add_option("--points", f.points, "Number of log-spaced temperatures");
    app.add_option("--temps", f.temps, "Explicit temperature list, replaces the log grid")->delimiter(',');
    app.add_option("--schemes", f.schemes, "Comma-separated measurement schemes or 'all'");
    app.add_option("--convergence-step", f.convergence_step, "Also recompute at M + step and record the change");
    app.add_option("--max-dim", f.max_dim, "Cap on the composite Hilbert-space dimension");
}

void add_common_flags(CLI::App &app, CommonFlags &c) {
    app.add_option("--out", c.out, "Output directory");
    app.add_option("--workers", c.workers, "Worker threads (RCTHERMO_WORKERS overrides)");
    app.add_option("--delta", c.delta, "Spin splitting; rescales reported energies only");
}

// Config file first, then every flag the user actually passed.
SweepConfig resolve_sweep(const CLI::App &app, const SweepFlags &f, const CommonFlags &c) {
    SweepConfig cfg;
    if (!f.config_file.empty())
        cfg = load_sweep_config(f.config_file);
    const auto given = [&](const char *name) { return app.count(name) > 0; };
    if (f.config_file.empty() || given("--n"))
        cfg.n_spins = f.n_spins;
    if (f.config_file.empty() || given("--m"))
        cfg.boson_levels = f.boson_levels;
    if (f.config_file.empty() || given("--omega"))
        cfg.omega = f.omega;
    if (f.config_file.empty() || given("--lambda"))
        cfg.lambdas = f.lambdas;
    if (f.config_file.empty() || given("--kind"))
        cfg.coupling = parse_coupling_kind(f.kind);
    if (f.config_file.empty() || given("--t-min"))
        cfg.grid.t_min = f.t_min;
    if (f.config_file.empty() || given("--t-max"))
        cfg.grid.t_max = f.t_max;
    if (f.config_file.empty() || given("--points"))
        cfg.grid.n_points = f.points;
    if (given("--temps"))
        cfg.temperatures = f.temps;
    if (f.config_file.empty() || given("--schemes"))
        cfg.schemes = parse_schemes(f.schemes);
    if (f.config_file.empty() || given("--convergence-step"))
        cfg.convergence_step = f.convergence_step;
    if (f.config_file.empty() || given("--max-dim"))
        cfg.max_dim = f.max_dim;
    if (f.config_file.empty() || given("--workers"))
        cfg.workers = c.workers;
    if (!(c.delta > 0.0))
        throw DomainError("--delta must be positive");
    // The computation runs in units of delta.
    cfg.delta = 1.0;
    return cfg;
}

void rescale_units(std::vector<SweepRecord> &records, double delta) {
    if (delta == 1.0)
        return;
    for (auto &r : records) {
        r.params.delta *= delta;
        r.params.omega *= delta;
        r.params.lambda *= delta;
        r.temperature *= delta;
        r.beta /= delta;
        r.report.temperature *= delta;
    }
}

ManifestEntries manifest_for(const std::string &verb, const SweepConfig &cfg, const CommonFlags &c,
                             const std::vector<fs::path> &files) {
    ManifestEntries e{{"verb", verb}};
    auto body = sweep_config_entries(cfg);
    e.insert(e.end(), body.begin(), body.end());
    e.emplace_back("reported_delta", format_double(c.delta));
    e.emplace_back("resolved_workers", std::to_string(resolve_workers(cfg.workers)));
    for (const auto &f : files)
        e.emplace_back("output_file", f.filename().string());
    return e;
}

int finish_sweep(const std::string &verb, const std::string &file_name, SweepConfig cfg, const CommonFlags &c,
                 std::ostream &out) {
    cfg.output = c.out / file_name;
    auto result = run_sweep(cfg);
    rescale_units(result.records, c.delta);
    write_csv(cfg.output, result.records);
    std::vector<fs::path> files{cfg.output};
    if (auto err = write_error_log(cfg.output, result.records))
        files.push_back(*err);
    write_manifest(c.out / "manifest.txt", manifest_for(verb, cfg, c, files));
    out << "wrote " << cfg.output.string() << " (" << result.records.size() - result.failures() << " records, "
        << result.failures() << " failed, " << result.decompositions << " decompositions)\n";
    return result.failures() == 0 ? 0 : 1;
}

void print_error(std::ostream &err, const std::string &kind, const std::string &message,
                 const nlohmann::json &extra = nlohmann::json::object()) {
    nlohmann::json j = {{"error", kind}, {"message", message}};
    j.update(extra);
    err << j.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Thermometric sensitivity of N-spin probes coupled to a reaction coordinate", "rcthermo"};
    app.set_version_flag("--version", std::string(RCTHERMO_VERSION));
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    CommonFlags common;

    auto *snr = app.add_subcommand("snr-curve", "SNR versus temperature for one or more couplings");
    add_sweep_flags(*snr, sweep_flags);
    add_common_flags(*snr, common);

    auto *sweep_lambda = app.add_subcommand("sweep-lambda", "SNR versus coupling at fixed temperatures");
    add_sweep_flags(*sweep_lambda, sweep_flags);
    add_common_flags(*sweep_lambda, common);
    double lambda_min = 0.1, lambda_max = 20.0;
    int lambda_points = 40;
    sweep_lambda->add_option("--lambda-min", lambda_min, "Smallest coupling");
    sweep_lambda->add_option("--lambda-max", lambda_max, "Largest coupling");
    sweep_lambda->add_option("--lambda-points", lambda_points, "Number of log-spaced couplings");

    auto *figure = app.add_subcommand("figure", "Run a named figure pipeline");
    std::string figure_name;
    figure->add_option("name", figure_name, "fig2, fig3, fig4, fig5, figA1 or figA2")->required();
    add_common_flags(*figure, common);
    std::optional<int> fig_levels, fig_points, fig_max_spins;
    std::size_t fig_max_dim = kDefaultMaxDim;
    figure->add_option("--m", fig_levels, "Override reaction-coordinate levels");
    figure->add_option("--points", fig_points, "Override grid size");
    figure->add_option("--max-spins", fig_max_spins, "Skip probes with more spins");
    figure->add_option("--max-dim", fig_max_dim, "Cap on the composite Hilbert-space dimension");

    auto *converge = app.add_subcommand("converge-m", "Change of the optimal SNR when M grows");
    add_sweep_flags(*converge, sweep_flags);
    add_common_flags(*converge, common);
    int delta_m = 10;
    converge->add_option("--delta-m", delta_m, "Extra reaction-coordinate levels");

    auto *rc = app.add_subcommand("rc-params", "Reaction-coordinate frequency and coupling from J(w)");
    std::string density_kind;
    double gamma = 0.01, omega0 = 15.0, lambda0 = 5.0, cutoff = 1.0, quad_tol = 1e-10;
    std::optional<double> omega_max;
    std::optional<fs::path> rc_out;
    rc->add_option("--kind", density_kind, "brownian or ohmic")->required();
    rc->add_option("--gamma", gamma, "Width (Brownian) or amplitude (Ohmic)");
    rc->add_option("--omega0", omega0, "Brownian peak frequency");
    rc->add_option("--lambda0", lambda0, "Brownian coupling");
    rc->add_option("--cutoff", cutoff, "Ohmic cutoff");
    rc->add_option("--quad-tol", quad_tol, "Relative quadrature tolerance");
    rc->add_option("--omega-max", omega_max, "Integrate on [0, omega_max] only, no tail check");
    rc->add_option("--out", rc_out, "Directory for the manifest");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion &e) {
        out << RCTHERMO_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (snr->parsed()) {
            return finish_sweep("snr-curve", "snr_curve.csv", resolve_sweep(*snr, sweep_flags, common), common, out);
        }
        if (sweep_lambda->parsed()) {
            auto cfg = resolve_sweep(*sweep_lambda, sweep_flags, common);
            if (sweep_lambda->count("--lambda") == 0)
                cfg.lambdas = log_space(lambda_min, lambda_max, lambda_points);
            if (cfg.temperatures.empty())
                cfg.temperatures = kFig4Temperatures;
            return finish_sweep("sweep-lambda", "sweep_lambda.csv", cfg, common, out);
        }
        if (figure->parsed()) {
            FigureOptions opts;
            opts.out_dir = common.out;
            opts.workers = common.workers;
            opts.boson_levels = fig_levels;
            opts.n_points = fig_points;
            opts.max_spins = fig_max_spins;
            opts.max_dim = fig_max_dim;
            const auto name = parse_figure_name(figure_name);
            if (common.delta != 1.0)
                throw DomainError("figure pipelines report in units of delta; --delta is not supported here");
            const auto result = figure_pipeline(name, opts);
            ManifestEntries e{{"verb", "figure"}, {"figure", to_string(name)}};
            for (const auto &job : figure_jobs(name, opts)) {
                e.emplace_back("job", job.file_name);
                for (const auto &[k, v] : sweep_config_entries(job.config))
                    e.emplace_back("  " + k, v);
            }
            for (const auto &f : result.files)
                e.emplace_back("output_file", f.filename().string());
            write_manifest(common.out / ("manifest_" + to_string(name) + ".txt"), e);
            out << "wrote " << result.files.size() << " file(s) for " << to_string(name) << " ("
                << result.records - result.failures << " records, " << result.failures << " failed)\n";
            return result.failures == 0 ? 0 : 1;
        }
        if (converge->parsed()) {
            auto cfg = resolve_sweep(*converge, sweep_flags, common);
            const auto report = convergence_check(cfg, delta_m);
            const fs::path csv = common.out / "converge.csv";
            std::ostringstream text;
            text << "lambda,base_levels,refined_levels,max_relative_change,at_temperature\n";
            for (const auto &c : report.curves)
                text << format_double(c.lambda * common.delta) << ',' << report.base_levels << ','
                     << report.refined_levels << ',' << format_double(c.max_relative_change) << ','
                     << format_double(c.at_temperature * common.delta) << '\n';
            fs::create_directories(common.out);
            std::ofstream(csv, std::ios::binary) << text.str();
            auto e = manifest_for("converge-m", cfg, common, {csv});
            e.emplace_back("delta_m", std::to_string(delta_m));
            write_manifest(common.out / "manifest.txt", e);
            out << text.str();
            return 0;
        }
        if (rc->parsed()) {
            SpectralDensity density;
            if (density_kind == "brownian")
                density = BrownianDensity{gamma, omega0, lambda0};
            else if (density_kind == "ohmic")
                density = OhmicExpDensity{gamma, cutoff};
            else
                throw DomainError("unknown spectral density '" + density_kind + "' (expected brownian or ohmic)");
            const auto p = omega_max ? rc_parameters_on_window(density, *omega_max, quad_tol)
                                     : rc_parameters(density, quad_tol);
            std::ostringstream text;
            text << "lambda = " << format_double(p.lambda) << '\n'
                 << "omega = " << format_double(p.omega) << '\n'
                 << "error_estimate = " << format_double(p.error_estimate) << '\n'
                 << "omega_max = " << format_double(p.omega_max) << '\n';
            out << text.str();
            if (rc_out) {
                ManifestEntries e{{"verb", "rc-params"},       {"kind", density_kind},
                                  {"gamma", format_double(gamma)}, {"omega0", format_double(omega0)},
                                  {"lambda0", format_double(lambda0)}, {"cutoff", format_double(cutoff)},
                                  {"quad_tol", format_double(quad_tol)}};
                if (omega_max)
                    e.emplace_back("omega_max_requested", format_double(*omega_max));
                e.emplace_back("result_lambda", format_double(p.lambda));
                e.emplace_back("result_omega", format_double(p.omega));
                e.emplace_back("result_error_estimate", format_double(p.error_estimate));
                write_manifest(*rc_out / "manifest.txt", e);
            }
            return 0;
        }
    } catch (const QuadratureError &e) {
        print_error(err, "quadrature", e.what(), {{"achieved_error", e.achieved_error()}});
        return 1;
    } catch (const NumericalError &e) {
        print_error(err, "numerical", e.what());
        return 1;
    } catch (const DomainError &e) {
        print_error(err, "domain", e.what());
        return 1;
    } catch (const std::exception &e) {
        print_error(err, "internal", e.what());
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace rcthermo::cli

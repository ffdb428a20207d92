#include "rcthermo/config.hpp"

#include "rcthermo/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rcthermo {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double to_double(const std::string &key, const std::string &value) {
    double out = 0.0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw DomainError("config: '" + key + "' expects a number, got '" + value + "'");
    return out;
}

long to_integer(const std::string &key, const std::string &value) {
    long out = 0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw DomainError("config: '" + key + "' expects an integer, got '" + value + "'");
    return out;
}

std::string join(const std::vector<double> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

} // namespace

SchemeSet parse_schemes(const std::string &list) {
    SchemeSet s{false, false, false, false, false};
    for (const auto &name : split_list(list)) {
        if (name == "optimal")
            s.optimal = true;
        else if (name == "dephased")
            s.dephased = true;
        else if (name == "polarization")
            s.polarization = true;
        else if (name == "weak_reference")
            s.weak_reference = true;
        else if (name == "coherence")
            s.coherence = true;
        else if (name == "all")
            s = SchemeSet::all();
        else
            throw DomainError("config: unknown measurement scheme '" + name + "'");
    }
    return s;
}

std::string format_schemes(const SchemeSet &s) {
    std::vector<std::string> names;
    if (s.optimal)
        names.emplace_back("optimal");
    if (s.dephased)
        names.emplace_back("dephased");
    if (s.polarization)
        names.emplace_back("polarization");
    if (s.weak_reference)
        names.emplace_back("weak_reference");
    if (s.coherence)
        names.emplace_back("coherence");
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i)
        out += (i ? ", " : "") + names[i];
    return out;
}

SweepConfig parse_sweep_config(std::istream &in) {
    SweepConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "n_spins")
            cfg.n_spins = static_cast<int>(to_integer(key, value));
        else if (key == "boson_levels")
            cfg.boson_levels = static_cast<int>(to_integer(key, value));
        else if (key == "delta")
            cfg.delta = to_double(key, value);
        else if (key == "omega")
            cfg.omega = to_double(key, value);
        else if (key == "lambdas" || key == "lambda") {
            cfg.lambdas.clear();
            for (const auto &item : split_list(value))
                cfg.lambdas.push_back(to_double(key, item));
        } else if (key == "coupling_kind")
            cfg.coupling = parse_coupling_kind(value);
        else if (key == "t_min")
            cfg.grid.t_min = to_double(key, value);
        else if (key == "t_max")
            cfg.grid.t_max = to_double(key, value);
        else if (key == "n_points")
            cfg.grid.n_points = static_cast<int>(to_integer(key, value));
        else if (key == "temperatures") {
            cfg.temperatures.clear();
            for (const auto &item : split_list(value))
                cfg.temperatures.push_back(to_double(key, item));
        } else if (key == "schemes")
            cfg.schemes = parse_schemes(value);
        else if (key == "convergence_step")
            cfg.convergence_step = static_cast<int>(to_integer(key, value));
        else if (key == "output")
            cfg.output = value;
        else if (key == "workers")
            cfg.workers = static_cast<int>(to_integer(key, value));
        else if (key == "max_dim")
            cfg.max_dim = static_cast<std::size_t>(to_integer(key, value));
        else
            throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path &path) {
    std::ifstream f(path);
    if (!f)
        throw DomainError("cannot open config file '" + path.string() + "'");
    return parse_sweep_config(f);
}

ManifestEntries sweep_config_entries(const SweepConfig &c) {
    ManifestEntries e{
        {"n_spins", std::to_string(c.n_spins)},
        {"boson_levels", std::to_string(c.boson_levels)},
        {"delta", format_double(c.delta)},
        {"omega", format_double(c.omega)},
        {"lambdas", join(c.lambdas)},
        {"coupling_kind", to_string(c.coupling)},
        {"t_min", format_double(c.grid.t_min)},
        {"t_max", format_double(c.grid.t_max)},
        {"n_points", std::to_string(c.grid.n_points)},
    };
    if (!c.temperatures.empty())
        e.emplace_back("temperatures", join(c.temperatures));
    e.emplace_back("schemes", format_schemes(c.schemes));
    e.emplace_back("convergence_step", std::to_string(c.convergence_step));
    if (!c.output.empty())
        e.emplace_back("output", c.output.string());
    e.emplace_back("workers", std::to_string(c.workers));
    e.emplace_back("max_dim", std::to_string(c.max_dim));
    return e;
}

std::string format_sweep_config(const SweepConfig &config) {
    std::string out;
    for (const auto &[k, v] : sweep_config_entries(config))
        out += k + " = " + v + '\n';
    return out;
}

} // namespace rcthermo

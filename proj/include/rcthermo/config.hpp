#pragma once

#include "rcthermo/sweep.hpp"

#include <filesystem>
#include <istream>
#include <string>

namespace rcthermo {

// Key-value sweep configuration, one `key = value` per line, `#` comments.
//
//   n_spins = 2
//   boson_levels = 30
//   delta = 1
//   omega = 15
//   lambdas = 1, 2.5, 5
//   coupling_kind = x          # or xz_mix
//   t_min = 0.01
//   t_max = 10
//   n_points = 100
//   temperatures = 0.05, 0.1   # optional, replaces the log grid
//   schemes = optimal, dephased, polarization, weak_reference, coherence
//   convergence_step = 10
//   output = results/sweep.csv
//   workers = 4
//   max_dim = 20000
//
// Unknown keys are rejected.
SweepConfig parse_sweep_config(std::istream &in);
SweepConfig load_sweep_config(const std::filesystem::path &path);

// Inverse of parse_sweep_config (also used for run manifests).
ManifestEntries sweep_config_entries(const SweepConfig &config);
std::string format_sweep_config(const SweepConfig &config);

SchemeSet parse_schemes(const std::string &list);
std::string format_schemes(const SchemeSet &schemes);

} // namespace rcthermo

#pragma once

#include "rcthermo/sweep.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcthermo {

enum class FigureName { Fig2, Fig3, Fig4, Fig5, FigA1, FigA2 };

FigureName parse_figure_name(std::string_view name);
std::string to_string(FigureName name);

// Overrides for desk-scale runs. Unset fields keep the figure defaults.
struct FigureOptions {
    std::filesystem::path out_dir = ".";
    int workers = 1;
    std::optional<int> boson_levels;
    std::optional<int> n_points;
    // Drop configurations with more spins than this.
    std::optional<int> max_spins;
    std::size_t max_dim = kDefaultMaxDim;
};

// One sweep. Several jobs may write into the same CSV file.
struct FigureJob {
    std::string file_name;
    SweepConfig config;
};

// The sweeps a figure is made of, with options applied.
std::vector<FigureJob> figure_jobs(FigureName name, const FigureOptions &options);

struct FigureOutput {
    std::vector<std::filesystem::path> files;
    std::size_t records = 0;
    std::size_t failures = 0;
};

// Runs every job and writes <out_dir>/<file_name> (plus an errors file when a
// grid point failed).
FigureOutput figure_pipeline(FigureName name, const FigureOptions &options);

// Representative fixed temperatures for the coupling sweeps of fig4.
inline const std::vector<double> kFig4Temperatures{0.05, 0.1, 0.2, 0.5};

} // namespace rcthermo

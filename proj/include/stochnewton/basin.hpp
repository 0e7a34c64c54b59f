#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "stochnewton/montecarlo.hpp"

namespace stochnewton {

struct GridSpec {
    double x_min = -2.0, x_max = 2.0;
    double y_min = -2.0, y_max = 2.0;
    int nx = 64, ny = 64;
};

// Reduced per-cell tally: dominant root plus the two leak probabilities.
struct BasinCell {
    int argmax_root = -1;
    double argmax_prob = 0.0;
    double escape_prob = 0.0;
    double unresolved_prob = 0.0;
};

struct BasinGrid {
    GridSpec spec;
    int n_roots = 0;
    long runs_per_cell = 0;
    std::uint64_t seed = 0;
    std::uint64_t poly_hash = 0;
    std::string measure_config;
    // Row-major, top row first (max imaginary part).
    std::vector<BasinCell> cells;
};

// Fills the grid cell by cell with estimate_T; per-cell orbit streams are
// keyed by (cell index, run index) so any scheduling yields the same grid.
BasinGrid render_basin(const Polynomial& g, const LambdaMeasure& tau,
                       const GridSpec& spec, long runs_per_cell,
                       const std::vector<RootRecord>& roots,
                       const EngineConfig& cfg);

// CSV schema: x, y, argmax_root_index, argmax_prob, escape_prob, unresolved_prob.
void write_basin_csv(const BasinGrid& grid, std::ostream& os);

// Indexed PNG: one hue per root, lightness tracks probability mass,
// escape-dominated cells are black.
void write_basin_png(const BasinGrid& grid, const std::string& path);

}  // namespace stochnewton

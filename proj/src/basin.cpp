#include "stochnewton/basin.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "stochnewton/errors.hpp"
#include "stochnewton/hash.hpp"
#include "stochnewton/png.hpp"

namespace stochnewton {

namespace {

png::Rgb hsl_to_rgb(double h, double s, double l) {
    auto hue = [](double p, double q, double t) {
        if (t < 0) t += 1;
        if (t > 1) t -= 1;
        if (t < 1.0 / 6) return p + (q - p) * 6 * t;
        if (t < 1.0 / 2) return q;
        if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
        return p;
    };
    double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
    double p = 2 * l - q;
    auto to8 = [](double v) {
        return static_cast<std::uint8_t>(std::lround(255.0 * std::min(1.0, std::max(0.0, v))));
    };
    return {to8(hue(p, q, h + 1.0 / 3)), to8(hue(p, q, h)), to8(hue(p, q, h - 1.0 / 3))};
}

constexpr int kLevels = 16;
constexpr int kMaxHues = 15;
constexpr int kEscapeIndex = kLevels * kMaxHues;       // 240
constexpr int kUnresolvedIndex = kEscapeIndex + 1;     // 241

std::vector<png::Rgb> basin_palette() {
    std::vector<png::Rgb> pal(256, png::Rgb{0, 0, 0});
    for (int r = 0; r < kMaxHues; ++r) {
        double h = std::fmod(0.61803398875 * r, 1.0);
        for (int lvl = 0; lvl < kLevels; ++lvl) {
            double l = 0.12 + 0.58 * lvl / (kLevels - 1);
            pal[r * kLevels + lvl] = hsl_to_rgb(h, 0.85, l);
        }
    }
    pal[kEscapeIndex] = png::Rgb{0, 0, 0};
    pal[kUnresolvedIndex] = png::Rgb{80, 80, 80};
    return pal;
}

}  // namespace

BasinGrid render_basin(const Polynomial& g, const LambdaMeasure& tau,
                       const GridSpec& spec, long runs_per_cell,
                       const std::vector<RootRecord>& roots,
                       const EngineConfig& cfg) {
    if (runs_per_cell < 1)
        throw BadConfig("runs_per_cell must be at least 1");
    if (spec.nx < 1 || spec.ny < 1 ||
        static_cast<long>(spec.nx) * spec.ny > 2048L * 2048L)
        throw BadConfig("grid resolution out of range (max 2048 x 2048)");
    if (!(spec.x_min < spec.x_max && spec.y_min < spec.y_max))
        throw BadConfig("grid bounds must be a proper rectangle");

    BasinGrid grid;
    grid.spec = spec;
    grid.n_roots = static_cast<int>(roots.size());
    grid.runs_per_cell = runs_per_cell;
    grid.seed = tau.seed_base();
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (cplx c : g.coeffs()) {
            double parts[2] = {c.real(), c.imag()};
            h = fnv1a64_append(h, parts, sizeof(parts));
        }
        grid.poly_hash = h;
    }
    grid.cells.resize(static_cast<std::size_t>(spec.nx) * spec.ny);

    double dx = (spec.x_max - spec.x_min) / spec.nx;
    double dy = (spec.y_max - spec.y_min) / spec.ny;
    for (int row = 0; row < spec.ny; ++row) {
        // top row carries the largest imaginary part
        double y = spec.y_max - (row + 0.5) * dy;
        for (int col = 0; col < spec.nx; ++col) {
            double x = spec.x_min + (col + 0.5) * dx;
            std::size_t idx = static_cast<std::size_t>(row) * spec.nx + col;
            TEstimate t = estimate_T(g, tau, cplx(x, y), runs_per_cell, roots,
                                     cfg, static_cast<std::uint64_t>(idx) * runs_per_cell);
            BasinCell& cell = grid.cells[idx];
            cell.escape_prob = t.escape;
            cell.unresolved_prob = t.unresolved;
            for (std::size_t r = 0; r < t.per_root.size(); ++r)
                if (t.per_root[r] > cell.argmax_prob) {
                    cell.argmax_prob = t.per_root[r];
                    cell.argmax_root = static_cast<int>(r);
                }
        }
    }
    return grid;
}

void write_basin_csv(const BasinGrid& grid, std::ostream& os) {
    os << "x,y,argmax_root_index,argmax_prob,escape_prob,unresolved_prob\n";
    double dx = (grid.spec.x_max - grid.spec.x_min) / grid.spec.nx;
    double dy = (grid.spec.y_max - grid.spec.y_min) / grid.spec.ny;
    char buf[160];
    for (int row = 0; row < grid.spec.ny; ++row) {
        double y = grid.spec.y_max - (row + 0.5) * dy;
        for (int col = 0; col < grid.spec.nx; ++col) {
            double x = grid.spec.x_min + (col + 0.5) * dx;
            const BasinCell& c =
                grid.cells[static_cast<std::size_t>(row) * grid.spec.nx + col];
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%d,%.10g,%.10g,%.10g\n",
                          x, y, c.argmax_root, c.argmax_prob, c.escape_prob,
                          c.unresolved_prob);
            os << buf;
        }
    }
}

void write_basin_png(const BasinGrid& grid, const std::string& path) {
    std::vector<std::uint8_t> pixels(grid.cells.size(), kEscapeIndex);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const BasinCell& c = grid.cells[i];
        if (c.argmax_root < 0 || c.escape_prob > c.argmax_prob) {
            pixels[i] = kEscapeIndex;
        } else if (c.unresolved_prob > c.argmax_prob) {
            pixels[i] = kUnresolvedIndex;
        } else {
            int hue = c.argmax_root % kMaxHues;
            int lvl = static_cast<int>(std::lround(c.argmax_prob * (kLevels - 1)));
            pixels[i] = static_cast<std::uint8_t>(hue * kLevels + lvl);
        }
    }
    png::write_indexed(path, grid.spec.nx, grid.spec.ny, pixels, basin_palette());
}

}  // namespace stochnewton

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qapprox/planner.hpp"

namespace qapprox {

/// Bundled curve-family presets. Each figure pins an approximating set --
/// a fixed non-orthogonal pair (fig1), a fixed non-orthogonal triple (fig2)
/// and the +-x/+-z eigenstate square (fig3) -- and sweeps the target's
/// (a, k, phi) parameters panel by panel.
enum class Figure { Fig1, Fig2, Fig3 };

/// Which target parameter the panel sweeps; the other two are split between
/// a per-curve value and a pinned preset value.
enum class Panel { A, K, Phi };

/// Maps the command-line tokens "fig1|fig2|fig3" and "a|k|phi"; throws
/// SchemaError on anything else.
Figure figure_from_token(std::string_view token);
Panel panel_from_token(std::string_view token);

struct FigureSpec {
    Figure figure = Figure::Fig1;
    Panel panel = Panel::A;
    int samples = 101;          ///< points per curve, endpoints included
    bool with_oracle = false;   ///< add a brute-force lattice column
    double oracle_step = 0.0;   ///< 0: default for the preset's set size
};

struct FigureRow {
    double sweep = 0.0;           ///< swept parameter value
    double curve = 0.0;           ///< curve-family parameter value
    double closed = 0.0;          ///< closed-form distance
    std::optional<double> grid;   ///< lattice distance when requested
};

/// The approximating set a figure preset solves against.
std::vector<PureState> figure_states(Figure figure);

/// All rows of one panel: curve families in preset order, sweep ascending.
std::vector<FigureRow> figure_rows(const FigureSpec& spec);

/// CSV serialization: literal header `sweep_param,curve_param,distance_closed`
/// (plus `,distance_grid` with the oracle column), LF line endings, dot
/// decimal separators, shortest round-trip number formatting.
std::string figure_csv(const FigureSpec& spec);

/// Writes the CSV atomically: temp file in the target directory, then rename.
void write_figure_csv(const FigureSpec& spec, const std::filesystem::path& out);

}  // namespace qapprox

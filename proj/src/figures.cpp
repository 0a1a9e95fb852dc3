#include "qapprox/figures.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>

#include "qapprox/oracle.hpp"

namespace qapprox {

namespace {

using cd = std::complex<double>;

/// Role assignment of one panel: which target parameter is swept over which
/// range, which one labels the curves, and the pinned value of the third.
struct PanelRoles {
    char sweep = 'a';   // 'a' | 'k' | 'p'
    char curve = 'k';
    double fixed_value = 0.0;
    double sweep_from = 0.0;
    double sweep_to = 1.0;
    std::vector<double> curve_values;
};

PanelRoles panel_roles(Figure figure, Panel panel) {
    const double pi = M_PI;
    const std::vector<double> fifths{0.2, 0.4, 0.6, 0.8};
    switch (figure) {
        case Figure::Fig1:
            switch (panel) {
                case Panel::A:
                    return {'a', 'k', 0.4613 * pi, 0.0, 1.0, fifths};
                case Panel::K:
                    return {'k', 'p', 0.8468, 0.0, 1.0, {0.0, 0.5 * pi, pi, 1.5 * pi}};
                case Panel::Phi:
                    return {'p', 'a', 0.0131, 0.0, 2.0 * pi, fifths};
            }
            break;
        case Figure::Fig2:
            switch (panel) {
                case Panel::A:
                    return {'a', 'p', 0.85, 0.0, 1.0, {0.0, 0.5 * pi, 1.5 * pi, 2.0 * pi}};
                case Panel::K:
                    return {'k', 'a', 0.5318 * pi, 0.0, 1.0, fifths};
                case Panel::Phi:
                    return {'p', 'k', 0.63, 0.0, 2.0 * pi, fifths};
            }
            break;
        case Figure::Fig3:
            switch (panel) {
                case Panel::A:
                    return {'a', 'p', 0.5910, 0.0, 1.0, {0.0, 0.25 * pi, pi / 3.0, 0.5 * pi}};
                case Panel::K:
                    return {'k', 'a', 0.4047 * pi, 0.0, 1.0, fifths};
                case Panel::Phi:
                    return {'p', 'k', 0.1145, 0.0, 0.5 * pi, fifths};
            }
            break;
    }
    throw SchemaError("unknown figure/panel combination", "figure");
}

struct ParamTriple {
    double a = 0.0;
    double k = 0.0;
    double phi = 0.0;
};

void assign(ParamTriple& params, char role, double value) {
    switch (role) {
        case 'a': params.a = value; break;
        case 'k': params.k = value; break;
        default: params.phi = value; break;
    }
}

char remaining_role(const PanelRoles& roles) {
    for (char c : {'a', 'k', 'p'})
        if (c != roles.sweep && c != roles.curve) return c;
    return 'p';
}

double closed_distance(Figure figure, const std::vector<PureState>& states,
                       const TargetState& target) {
    switch (figure) {
        case Figure::Fig1:
            return solve_pair(target, states[0], states[1]).distance;
        case Figure::Fig2:
            return solve_triple(target, states[0], states[1], states[2]).distance;
        case Figure::Fig3:
            return solve_pauli_quad(target, PauliAxis::X, PauliAxis::Z).distance;
    }
    return 0.0;
}

void append_number(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

}  // namespace

Figure figure_from_token(std::string_view token) {
    if (token == "fig1") return Figure::Fig1;
    if (token == "fig2") return Figure::Fig2;
    if (token == "fig3") return Figure::Fig3;
    throw SchemaError("unknown figure '" + std::string(token) + "' (expected fig1|fig2|fig3)",
                      "figure");
}

Panel panel_from_token(std::string_view token) {
    if (token == "a") return Panel::A;
    if (token == "k") return Panel::K;
    if (token == "phi") return Panel::Phi;
    throw SchemaError("unknown panel '" + std::string(token) + "' (expected a|k|phi)", "panel");
}

std::vector<PureState> figure_states(Figure figure) {
    switch (figure) {
        case Figure::Fig1:
            return {bloch_of_pure({cd(0.5143, 0.0), cd(0.8317, 0.2091)}),
                    bloch_of_pure({cd(0.6950, 0.5523), cd(0.3633, 0.2827)})};
        case Figure::Fig2:
            return {bloch_of_pure({cd(0.5063, 0.3025), cd(0.6829, 0.4310)}),
                    bloch_of_pure({cd(0.1275, 0.5888), cd(0.5452, 0.5829)}),
                    bloch_of_pure({cd(0.0780, 0.6594), cd(0.1059, 0.7402)})};
        case Figure::Fig3: {
            const auto square = pauli_quad_states(PauliAxis::X, PauliAxis::Z);
            return {square.begin(), square.end()};
        }
    }
    return {};
}

std::vector<FigureRow> figure_rows(const FigureSpec& spec) {
    if (spec.samples < 2) throw SchemaError("samples must be at least 2", "samples");
    const PanelRoles roles = panel_roles(spec.figure, spec.panel);
    const std::vector<PureState> states = figure_states(spec.figure);
    const char fixed_role = remaining_role(roles);

    GridSpec grid;
    grid.step = spec.oracle_step > 0.0 ? spec.oracle_step : default_oracle_step(states.size());
    grid.refine_rounds = states.size() <= 3 ? 0 : 2;

    std::vector<FigureRow> rows;
    rows.reserve(roles.curve_values.size() * static_cast<std::size_t>(spec.samples));
    for (double curve_value : roles.curve_values) {
        for (int i = 0; i < spec.samples; ++i) {
            const double t = static_cast<double>(i) / (spec.samples - 1);
            const double sweep_value = roles.sweep_from + t * (roles.sweep_to - roles.sweep_from);

            ParamTriple params;
            assign(params, roles.sweep, sweep_value);
            assign(params, roles.curve, curve_value);
            assign(params, fixed_role, roles.fixed_value);
            const TargetState target = target_from_params(params.a, params.k, params.phi);

            FigureRow row;
            row.sweep = sweep_value;
            row.curve = curve_value;
            row.closed = closed_distance(spec.figure, states, target);
            if (spec.with_oracle) row.grid = grid_search(target, states, grid).distance;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string figure_csv(const FigureSpec& spec) {
    const std::vector<FigureRow> rows = figure_rows(spec);
    std::string out = spec.with_oracle
                          ? "sweep_param,curve_param,distance_closed,distance_grid\n"
                          : "sweep_param,curve_param,distance_closed\n";
    for (const FigureRow& row : rows) {
        append_number(out, row.sweep);
        out += ',';
        append_number(out, row.curve);
        out += ',';
        append_number(out, row.closed);
        if (row.grid) {
            out += ',';
            append_number(out, *row.grid);
        }
        out += '\n';
    }
    return out;
}

void write_figure_csv(const FigureSpec& spec, const std::filesystem::path& out) {
    const std::string content = figure_csv(spec);
    std::filesystem::path tmp = out;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw Error("cannot open " + tmp.string() + " for writing");
        file.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!file) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, out);
}

}  // namespace qapprox

#include "qapprox/cli_app.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qapprox/figures.hpp"
#include "qapprox/instance_io.hpp"

namespace qapprox {

namespace {

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buffer;
    if (path.empty() || path == "-") {
        buffer << in.rdbuf();
    } else {
        std::ifstream file(path, std::ios::binary);
        if (!file) throw SchemaError("cannot open input file '" + path + "'", path);
        buffer << file.rdbuf();
    }
    return buffer.str();
}

ParseOverrides make_overrides(double tol_flag, double step_flag) {
    ParseOverrides overrides;
    if (tol_flag > 0.0) overrides.tol = tol_flag;
    if (step_flag > 0.0) overrides.step = step_flag;
    return overrides;
}

}  // namespace

int verify_exit_code(const VerifyReport& report) {
    const bool ok = report.gap >= -1e-12 && report.gap <= oracle_gap_bound(report.step);
    return ok ? kExitOk : kExitRegression;
}

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"Optimal convex approximation of a qubit state by mixtures of pure states"};
    app.name("qapprox");
    app.require_subcommand(1);

    std::string solve_input = "-";
    double solve_tol = 0.0;
    CLI::App* solve = app.add_subcommand("solve", "solve an instance document");
    solve->add_option("input", solve_input, "instance JSON path, '-' for stdin");
    solve->add_option("--tol", solve_tol, "override the validation tolerance");

    std::string verify_input = "-";
    double verify_tol = 0.0;
    double verify_step = 0.0;
    CLI::App* verify =
        app.add_subcommand("verify", "compare the closed form against the lattice oracle");
    verify->add_option("input", verify_input, "instance JSON path, '-' for stdin");
    verify->add_option("--tol", verify_tol, "override the validation tolerance");
    verify->add_option("--step", verify_step, "oracle lattice step in (0, 0.5]");

    std::string figure_token;
    std::string panel_token;
    std::string figure_out;
    int figure_samples = 101;
    bool figure_oracle = false;
    double figure_step = 0.0;
    CLI::App* figure = app.add_subcommand("figure", "regenerate a preset curve family as CSV");
    figure->add_option("figure", figure_token, "fig1|fig2|fig3")->required();
    figure->add_option("panel", panel_token, "a|k|phi")->required();
    figure->add_option("--out", figure_out, "output CSV path")->required();
    figure->add_option("--n", figure_samples, "samples per curve (default 101)");
    figure->add_flag("--with-oracle", figure_oracle, "add a lattice-oracle column");
    figure->add_option("--step", figure_step, "oracle lattice step in (0, 0.5]");

    std::uint64_t random_seed = 0;
    int random_n = 2;
    CLI::App* random = app.add_subcommand("random", "emit a seeded random instance document");
    random->add_option("--seed", random_seed, "generator seed (default 0)");
    random->add_option("--n", random_n, "number of set states (default 2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitSchema;
    }

    try {
        if (solve->parsed()) {
            const Instance instance =
                parse_instance(read_input(solve_input, in), make_overrides(solve_tol, 0.0));
            out << result_document(best_approximation(instance)).dump(2) << '\n';
            return kExitOk;
        }
        if (verify->parsed()) {
            const Instance instance = parse_instance(read_input(verify_input, in),
                                                     make_overrides(verify_tol, verify_step));
            const VerifyReport report = verify_against_oracle(instance);
            out << verify_document(report).dump(2) << '\n';
            return verify_exit_code(report);
        }
        if (figure->parsed()) {
            FigureSpec spec;
            spec.figure = figure_from_token(figure_token);
            spec.panel = panel_from_token(panel_token);
            spec.samples = figure_samples;
            spec.with_oracle = figure_oracle;
            if (figure_step != 0.0) {
                if (!(figure_step > 0.0 && figure_step <= 0.5))
                    throw SchemaError("--step: must lie in (0, 0.5]", "--step");
                spec.oracle_step = figure_step;
            }
            write_figure_csv(spec, figure_out);
            return kExitOk;
        }
        if (random->parsed()) {
            if (random_n < 1) throw SchemaError("--n: must be at least 1", "--n");
            out << random_instance_document(random_seed, random_n).dump(2) << '\n';
            return kExitOk;
        }
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitState;
    }
    return kExitOk;
}

}  // namespace qapprox

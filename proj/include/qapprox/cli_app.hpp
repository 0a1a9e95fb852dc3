#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qapprox/planner.hpp"

namespace qapprox {

/// Exit-code contract of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitSchema = 2,      ///< malformed document / unknown field / bad flags
    kExitState = 3,       ///< structurally valid but physically invalid input
    kExitRegression = 4,  ///< verification gap outside [-1e-12, bound(step)]
    kExitBudget = 5,      ///< oracle evaluation budget exceeded
};

/// 0 when the report's gap lies in [-1e-12, oracle_gap_bound(report.step)],
/// kExitRegression otherwise.
int verify_exit_code(const VerifyReport& report);

/// Full command dispatch ("solve", "verify", "figure", "random"); arguments
/// exclude the program name. The streams stand in for stdin/stdout/stderr so
/// the tool is testable in-process.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace qapprox

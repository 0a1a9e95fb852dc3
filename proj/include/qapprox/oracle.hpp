#pragma once

#include <span>

#include "qapprox/closed_form.hpp"

namespace qapprox {

/// Configuration of the brute-force simplex search. The lattice places every
/// weight on multiples of 1/K with K = max(2, round(1/step)); refinement
/// rounds rerun the search on a shrinking box around the incumbent.
struct GridSpec {
    double step = 1e-3;
    int refine_rounds = 0;
    double refine_factor = 10.0;
    /// Maximum number of objective evaluations; 0 means "use default_eval_cap()".
    unsigned long long eval_cap = 0;
};

/// Evaluation cap used when GridSpec::eval_cap is 0: the value of the
/// QAPPROX_ORACLE_CAP environment variable, or 10^8.
unsigned long long default_eval_cap();

/// Number of lattice points for n weights at resolution 1/k
/// (stars and bars: C(k + n - 1, n - 1)), saturating on overflow.
unsigned long long simplex_lattice_size(int n, int k);

/// Exhaustive search over the simplex lattice, maximizing fidelity_sq_mixture.
/// Ties are broken like the closed-form solvers (smaller support, then
/// lexicographically smaller support). Throws BudgetExceeded if the lattice
/// (plus refinement boxes) would exceed the evaluation cap; the exception
/// carries the required count. `evaluations` (optional) receives the number
/// of objective evaluations performed.
SolveResult grid_search(const TargetState& target, std::span<const PureState> states,
                        const GridSpec& spec, unsigned long long* evaluations = nullptr);

/// Lattice search restricted to the box |p_i - incumbent_i| <= radius
/// intersected with the simplex, at the given step. The incumbent itself is
/// always evaluated, so the result never regresses. A nonpositive radius
/// returns the incumbent's evaluation unchanged.
SolveResult local_refine(const TargetState& target, std::span<const PureState> states,
                         std::span<const double> incumbent, double radius, double step,
                         unsigned long long eval_cap = 0,
                         unsigned long long* evaluations = nullptr);

}  // namespace qapprox

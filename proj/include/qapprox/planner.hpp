#pragma once

#include <cstddef>
#include <vector>

#include "qapprox/closed_form.hpp"

namespace qapprox {

/// Tie-breaking policy between equally distant candidates. Only one policy is
/// defined: fewer supported states first, then the lexicographically smaller
/// support index set.
enum class TieBreak { SupportThenLex };

struct SolveOptions {
    double tol = tol::validation;  ///< validation tolerance for inputs
    TieBreak tie_break = TieBreak::SupportThenLex;
    double oracle_step = 0.0;      ///< 0 = per-size default (see default_oracle_step)
};

/// A solvable problem: a validated target and a finite set of pure states.
struct Instance {
    TargetState target;
    std::vector<PureState> set;
    SolveOptions options;
};

struct PlannerReport {
    SolveResult result;                  ///< weights re-expanded to the original set size
    std::size_t candidates_evaluated = 0;  ///< subset solves performed
    bool exact_hit = false;              ///< an exact four-state decomposition fired
    std::vector<int> subset;             ///< original indices of the winning candidate subset
};

/// Optimal mixture over any finite set. Duplicate states (Bloch distance
/// below tol::duplicate) are merged onto their first occurrence. Sets of up
/// to three states go to the matching closed-form solver directly; larger
/// sets are reduced to their subsets: every 4-subset is checked for an exact
/// decomposition (early exit at distance 0; rank-deficient subsets are
/// skipped, their planar geometry being covered by the 3-subsets), then every
/// 3-subset is solved and the minimum taken. Throws EmptySet.
PlannerReport best_approximation(const Instance& instance);

struct VerifyReport {
    double closed = 0.0;  ///< closed-form distance
    double grid = 0.0;    ///< brute-force lattice distance
    double gap = 0.0;     ///< grid - closed; in [-1e-12, oracle_gap_bound(step)]
    double step = 0.0;    ///< lattice step actually used
    unsigned long long evaluations = 0;
};

/// Default oracle resolution: 0.001 for up to three states, 0.02 (with two
/// tenfold refinement rounds) for larger sets.
double default_oracle_step(std::size_t set_size);

/// Largest gap a correct solver pair can produce at the given *coarse* step:
/// bound(step) = C * step. C reflects the worst-case sensitivity of the
/// distance to moving one lattice spacing along a simplex edge (|dD/dp| is
/// bounded by ~1/2 there) plus headroom; refinement rounds only shrink the
/// real gap, never widen it.
double oracle_gap_bound(double step);

/// Runs the closed-form planner and the grid oracle on the same instance.
/// `step` of 0 picks the instance option or the per-size default.
VerifyReport verify_against_oracle(const Instance& instance, double step = 0.0);

}  // namespace qapprox

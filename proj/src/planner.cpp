#include "qapprox/planner.hpp"

#include <algorithm>
#include <limits>

#include "qapprox/oracle.hpp"

namespace qapprox {

namespace {

constexpr double kGapBoundFactor = 1.0;

/// Comparison shared with the closed-form solvers: distance, then support
/// size, then lexicographic support.
bool candidate_better(const SolveResult& a, const SolveResult& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return std::lexicographical_compare(a.support.begin(), a.support.end(), b.support.begin(),
                                        b.support.end());
}

/// Spreads a result over `indices` into a weight vector of size n.
SolveResult embed(const SolveResult& sub, std::span<const int> indices, std::size_t n) {
    SolveResult r = sub;
    r.weights.assign(n, 0.0);
    for (std::size_t i = 0; i < sub.weights.size(); ++i)
        r.weights[static_cast<std::size_t>(indices[i])] = sub.weights[i];
    for (int& idx : r.support) idx = indices[static_cast<std::size_t>(idx)];
    std::sort(r.support.begin(), r.support.end());
    return r;
}

struct Dedup {
    std::vector<PureState> reps;     ///< unique states, order of first occurrence
    std::vector<int> first_index;    ///< representative -> original index
};

Dedup deduplicate(const std::vector<PureState>& set) {
    Dedup d;
    for (std::size_t i = 0; i < set.size(); ++i) {
        bool duplicate = false;
        for (const PureState& rep : d.reps) {
            if ((set[i].bloch - rep.bloch).norm() < tol::duplicate) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            d.reps.push_back(set[i]);
            d.first_index.push_back(static_cast<int>(i));
        }
    }
    return d;
}

}  // namespace

double default_oracle_step(std::size_t set_size) { return set_size <= 3 ? 1e-3 : 0.02; }

double oracle_gap_bound(double step) { return kGapBoundFactor * step; }

PlannerReport best_approximation(const Instance& instance) {
    if (instance.set.empty()) throw EmptySet("cannot approximate with an empty state set");

    const Dedup dedup = deduplicate(instance.set);
    const std::vector<PureState>& reps = dedup.reps;
    const std::size_t n = reps.size();
    const TargetState& target = instance.target;

    PlannerReport report;
    SolveResult best;           // over representative indices
    std::vector<int> best_subset;  // representative indices of the winning candidate

    if (n == 1) {
        best = solve_single(target, reps[0]);
        best_subset = {0};
        report.candidates_evaluated = 1;
    } else if (n == 2) {
        best = solve_pair(target, reps[0], reps[1]);
        best_subset = {0, 1};
        report.candidates_evaluated = 1;
    } else if (n == 3) {
        best = solve_triple(target, reps[0], reps[1], reps[2]);
        best_subset = {0, 1, 2};
        report.candidates_evaluated = 1;
    } else {
        // Exact four-state decompositions first; the first hit is optimal.
        std::array<int, 4> quad{};
        bool exact_found = false;
        for (quad[0] = 0; quad[0] < static_cast<int>(n) - 3 && !exact_found; ++quad[0])
            for (quad[1] = quad[0] + 1; quad[1] < static_cast<int>(n) - 2 && !exact_found; ++quad[1])
                for (quad[2] = quad[1] + 1; quad[2] < static_cast<int>(n) - 1 && !exact_found; ++quad[2])
                    for (quad[3] = quad[2] + 1; quad[3] < static_cast<int>(n) && !exact_found; ++quad[3]) {
                        const std::array<PureState, 4> subset{
                            reps[static_cast<std::size_t>(quad[0])],
                            reps[static_cast<std::size_t>(quad[1])],
                            reps[static_cast<std::size_t>(quad[2])],
                            reps[static_cast<std::size_t>(quad[3])]};
                        ++report.candidates_evaluated;
                        try {
                            const ExactQuadOutcome outcome = exact_quad_decomposition(target, subset);
                            if (outcome.exact) {
                                std::vector<int> idx(quad.begin(), quad.end());
                                best = embed(*outcome.result, idx, n);
                                best_subset = idx;
                                exact_found = true;
                            }
                        } catch (const RankDeficient&) {
                            // Coplanar quadruple; its geometry is covered by the
                            // 3-subset sweep below.
                        }
                    }

        if (!exact_found) {
            best.distance = std::numeric_limits<double>::infinity();
            std::array<int, 3> tri{};
            for (tri[0] = 0; tri[0] < static_cast<int>(n) - 2; ++tri[0])
                for (tri[1] = tri[0] + 1; tri[1] < static_cast<int>(n) - 1; ++tri[1])
                    for (tri[2] = tri[1] + 1; tri[2] < static_cast<int>(n); ++tri[2]) {
                        ++report.candidates_evaluated;
                        const SolveResult sub =
                            solve_triple(target, reps[static_cast<std::size_t>(tri[0])],
                                         reps[static_cast<std::size_t>(tri[1])],
                                         reps[static_cast<std::size_t>(tri[2])]);
                        SolveResult cand = embed(sub, tri, n);
                        if (candidate_better(cand, best)) {
                            best = std::move(cand);
                            best_subset.assign(tri.begin(), tri.end());
                        }
                    }
        }
    }

    // Map representative indices back to the original set; duplicates keep
    // weight zero and the first occurrence carries the mass.
    report.result = best;
    report.result.weights.assign(instance.set.size(), 0.0);
    for (std::size_t i = 0; i < best.weights.size(); ++i)
        report.result.weights[static_cast<std::size_t>(dedup.first_index[i])] = best.weights[i];
    for (int& idx : report.result.support) idx = dedup.first_index[static_cast<std::size_t>(idx)];
    std::sort(report.result.support.begin(), report.result.support.end());
    report.subset.clear();
    for (int idx : best_subset) report.subset.push_back(dedup.first_index[static_cast<std::size_t>(idx)]);
    std::sort(report.subset.begin(), report.subset.end());
    report.exact_hit = report.result.branch == Branch::Exact;
    return report;
}

VerifyReport verify_against_oracle(const Instance& instance, double step) {
    const PlannerReport closed = best_approximation(instance);

    double resolved = step;
    if (resolved <= 0.0) resolved = instance.options.oracle_step;
    if (resolved <= 0.0) resolved = default_oracle_step(instance.set.size());

    GridSpec spec;
    spec.step = resolved;
    spec.refine_rounds = instance.set.size() <= 3 ? 0 : 2;
    spec.refine_factor = 10.0;

    VerifyReport report;
    report.step = resolved;
    const SolveResult grid = grid_search(instance.target, instance.set, spec, &report.evaluations);
    report.closed = closed.result.distance;
    report.grid = grid.distance;
    report.gap = grid.distance - closed.result.distance;
    return report;
}

}  // namespace qapprox

#include "qapprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace qapprox {

namespace {

constexpr unsigned long long kDefaultCap = 100'000'000ULL;

/// Keeps the best lattice point seen so far, applying the shared tie-break
/// (higher fidelity, then smaller support, then lexicographic support).
class BestTracker {
public:
    void consider(double f2, std::span<const double> p) {
        if (!has_best_ || f2 > f2_) {
            adopt(f2, p);
            return;
        }
        if (f2 < f2_) return;
        std::vector<int> support = support_of(p);
        if (support.size() < support_.size() ||
            (support.size() == support_.size() &&
             std::lexicographical_compare(support.begin(), support.end(), support_.begin(),
                                          support_.end()))) {
            adopt(f2, p);
        }
    }

    bool empty() const { return !has_best_; }
    double fidelity_sq() const { return f2_; }
    const std::vector<double>& weights() const { return p_; }

    SolveResult to_result() const {
        SolveResult r;
        r.weights = p_;
        r.fidelity = std::sqrt(std::clamp(f2_, 0.0, 1.0));
        r.distance = 1.0 - r.fidelity;
        r.support = support_;
        const std::size_t n = p_.size();
        if (support_.size() == 1)
            r.branch = Branch::Vertex;
        else if (support_.size() == n)
            r.branch = Branch::Interior;
        else
            r.branch = Branch::BoundaryPair;
        return r;
    }

private:
    static std::vector<int> support_of(std::span<const double> p) {
        std::vector<int> s;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > tol::support) s.push_back(static_cast<int>(i));
        return s;
    }

    void adopt(double f2, std::span<const double> p) {
        has_best_ = true;
        f2_ = f2;
        p_.assign(p.begin(), p.end());
        support_ = support_of(p);
    }

    bool has_best_ = false;
    double f2_ = -1.0;
    std::vector<double> p_;
    std::vector<int> support_;
};

unsigned long long saturating_mul(unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0;
    if (a > std::numeric_limits<unsigned long long>::max() / b)
        return std::numeric_limits<unsigned long long>::max();
    return a * b;
}

unsigned long long saturating_add(unsigned long long a, unsigned long long b) {
    if (a > std::numeric_limits<unsigned long long>::max() - b)
        return std::numeric_limits<unsigned long long>::max();
    return a + b;
}

void check_step(double step) {
    if (!(step > 0.0) || step > 0.5)
        throw ParamOutOfRange("grid step must lie in (0, 0.5]");
}

/// Recursively enumerates all weight vectors with entries k_i / k summing to 1.
void enumerate_lattice(const PairwiseCache& cache, double m, const std::vector<double>& frac,
                       std::vector<double>& p, std::size_t pos, int remaining,
                       BestTracker& best, unsigned long long& evals) {
    if (pos + 1 == p.size()) {
        p[pos] = frac[static_cast<std::size_t>(remaining)];
        ++evals;
        best.consider(fidelity_sq_mixture(cache, m, p), p);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        p[pos] = frac[static_cast<std::size_t>(k)];
        enumerate_lattice(cache, m, frac, p, pos + 1, remaining - k, best, evals);
    }
}

/// Recursively enumerates offset lattice points inside the refinement box.
void enumerate_box(const PairwiseCache& cache, double m, std::span<const double> incumbent,
                   double radius, double step, int reach, std::vector<double>& p,
                   std::size_t pos, double partial_sum, BestTracker& best,
                   unsigned long long& evals) {
    const std::size_t n = p.size();
    if (pos + 1 == n) {
        const double last = 1.0 - partial_sum;
        if (last < -1e-12 || last > 1.0 + 1e-12) return;
        if (std::abs(last - incumbent[pos]) > radius + 1e-12) return;
        p[pos] = std::clamp(last, 0.0, 1.0);
        ++evals;
        best.consider(fidelity_sq_mixture(cache, m, p), p);
        return;
    }
    for (int j = -reach; j <= reach; ++j) {
        const double w = incumbent[pos] + static_cast<double>(j) * step;
        if (w < -1e-12 || w > 1.0 + 1e-12) continue;
        p[pos] = std::clamp(w, 0.0, 1.0);
        enumerate_box(cache, m, incumbent, radius, step, reach, p, pos + 1, partial_sum + p[pos],
                      best, evals);
    }
}

unsigned long long resolve_cap(unsigned long long requested) {
    return requested == 0 ? default_eval_cap() : requested;
}

}  // namespace

unsigned long long default_eval_cap() {
    if (const char* env = std::getenv("QAPPROX_ORACLE_CAP")) {
        char* end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end != env && cap > 0) return cap;
    }
    return kDefaultCap;
}

unsigned long long simplex_lattice_size(int n, int k) {
    if (n <= 0 || k < 0) return 0;
    // C(k + n - 1, n - 1); partial products are exact integers.
    unsigned long long c = 1;
    for (int i = 1; i < n; ++i) {
        c = saturating_mul(c, static_cast<unsigned long long>(k + i));
        c /= static_cast<unsigned long long>(i);
    }
    return c;
}

SolveResult grid_search(const TargetState& target, std::span<const PureState> states,
                        const GridSpec& spec, unsigned long long* evaluations) {
    if (states.empty()) throw EmptySet("grid search requires at least one state");
    check_step(spec.step);
    if (spec.refine_rounds < 0 || (spec.refine_rounds > 0 && spec.refine_factor <= 1.0))
        throw ParamOutOfRange("refinement requires a factor > 1");

    const std::size_t n = states.size();
    const int k = std::max(2, static_cast<int>(std::llround(1.0 / spec.step)));
    const unsigned long long cap = resolve_cap(spec.eval_cap);

    // Worst-case budget: the full lattice plus every refinement box.
    unsigned long long required = simplex_lattice_size(static_cast<int>(n), k);
    const int reach = static_cast<int>(std::ceil(2.0 * spec.refine_factor));
    unsigned long long per_round = 1;
    for (std::size_t i = 0; i + 1 < n; ++i)
        per_round = saturating_mul(per_round, static_cast<unsigned long long>(2 * reach + 1));
    for (int r = 0; r < spec.refine_rounds; ++r)
        required = saturating_add(required, saturating_add(per_round, 1));
    if (required > cap) {
        std::ostringstream os;
        os << "grid search needs " << required << " evaluations, cap is " << cap;
        throw BudgetExceeded(os.str(), required);
    }

    const PairwiseCache cache = pairwise_cache(target, states);
    std::vector<double> frac(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        frac[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(k);

    BestTracker best;
    unsigned long long evals = 0;
    std::vector<double> p(n, 0.0);
    enumerate_lattice(cache, target.m, frac, p, 0, k, best, evals);

    double step = 1.0 / static_cast<double>(k);
    SolveResult result = best.to_result();
    for (int r = 0; r < spec.refine_rounds; ++r) {
        const double next_step = step / spec.refine_factor;
        unsigned long long round_evals = 0;
        result = local_refine(target, states, result.weights, 2.0 * step, next_step, cap,
                              &round_evals);
        evals += round_evals;
        step = next_step;
    }

    if (evaluations) *evaluations = evals;
    return result;
}

SolveResult local_refine(const TargetState& target, std::span<const PureState> states,
                         std::span<const double> incumbent, double radius, double step,
                         unsigned long long eval_cap, unsigned long long* evaluations) {
    if (states.empty()) throw EmptySet("grid search requires at least one state");
    if (incumbent.size() != states.size())
        throw BadWeights("incumbent size does not match the state count");

    const std::size_t n = states.size();
    const PairwiseCache cache = pairwise_cache(target, states);

    BestTracker best;
    unsigned long long evals = 1;
    std::vector<double> p(incumbent.begin(), incumbent.end());
    best.consider(fidelity_sq_mixture(cache, target.m, p), p);

    if (radius > 0.0) {
        check_step(step);
        const int reach = static_cast<int>(std::floor(radius / step + 1e-9));
        unsigned long long required = 1;
        for (std::size_t i = 0; i + 1 < n; ++i)
            required = saturating_mul(required, static_cast<unsigned long long>(2 * reach + 1));
        const unsigned long long cap = resolve_cap(eval_cap);
        if (required > cap) {
            std::ostringstream os;
            os << "refinement box needs " << required << " evaluations, cap is " << cap;
            throw BudgetExceeded(os.str(), required);
        }
        enumerate_box(cache, target.m, incumbent, radius, step, reach, p, 0, 0.0, best, evals);
    }

    if (evaluations) *evaluations = evals;
    return best.to_result();
}

}  // namespace qapprox

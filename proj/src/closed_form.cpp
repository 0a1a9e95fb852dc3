#include "qapprox/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qapprox {

namespace {

/// Radicands below this are treated as exactly degenerate: the objective is
/// weight-independent along the corresponding direction and p = 1/2 is used.
constexpr double kDegenerateRadicand = 1e-30;

std::vector<int> support_of(std::span<const double> weights) {
    std::vector<int> support;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] > tol::support) support.push_back(static_cast<int>(i));
    return support;
}

SolveResult make_result(std::vector<double> weights, double fidelity_sq, Branch branch) {
    for (double& w : weights) w = std::clamp(w, 0.0, 1.0);
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (sum > 0.0)
        for (double& w : weights) w /= sum;

    SolveResult r;
    r.fidelity = std::sqrt(std::clamp(fidelity_sq, 0.0, 1.0));
    r.distance = 1.0 - r.fidelity;
    r.support = support_of(weights);
    r.weights = std::move(weights);
    r.branch = branch;
    return r;
}

/// Ordering used everywhere a tie between candidates must be broken:
/// smaller distance, then smaller support, then lexicographically smaller
/// support index list.
bool candidate_better(const SolveResult& a, const SolveResult& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return std::lexicographical_compare(a.support.begin(), a.support.end(),
                                        b.support.begin(), b.support.end());
}

/// Embeds a result over a subset of states into `n` slots.
SolveResult embed(const SolveResult& sub, std::span<const int> indices, std::size_t n) {
    SolveResult r = sub;
    r.weights.assign(n, 0.0);
    for (std::size_t i = 0; i < sub.weights.size(); ++i)
        r.weights[static_cast<std::size_t>(indices[i])] = sub.weights[i];
    for (int& idx : r.support) idx = indices[static_cast<std::size_t>(idx)];
    std::sort(r.support.begin(), r.support.end());
    return r;
}

void attach_kkt_if_interior(SolveResult& result, const TargetState& target,
                            std::span<const PureState> states) {
    if (result.branch != Branch::Interior) return;
    try {
        result.kkt_residual = kkt_residual(target, states, result.weights);
    } catch (const BoundaryMixture&) {
        // Gradient undefined on the ball surface; leave the diagnostic absent.
    }
}

BlochVector axis_vector(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return BlochVector(1, 0, 0);
        case PauliAxis::Y: return BlochVector(0, 1, 0);
        case PauliAxis::Z: return BlochVector(0, 0, 1);
    }
    return BlochVector::Zero();
}

PureState eigenstate(PauliAxis axis, bool plus) {
    const std::complex<double> i{0.0, 1.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::Vector2cd amps;
    switch (axis) {
        case PauliAxis::X: amps << inv_sqrt2, (plus ? 1.0 : -1.0) * inv_sqrt2; break;
        case PauliAxis::Y: amps << inv_sqrt2, (plus ? i : -i) * inv_sqrt2; break;
        case PauliAxis::Z:
            if (plus)
                amps << 1.0, 0.0;
            else
                amps << 0.0, 1.0;
            break;
    }
    return bloch_of_pure(amps);
}

}  // namespace

std::string_view to_string(Branch branch) {
    switch (branch) {
        case Branch::Interior: return "interior";
        case Branch::BoundaryPair: return "boundary-pair";
        case Branch::Vertex: return "vertex";
        case Branch::Exact: return "exact";
        case Branch::PauliInterior: return "pauli-interior";
        case Branch::PauliEdge: return "pauli-edge";
    }
    return "unknown";
}

SolveResult solve_single(const TargetState& target, const PureState& s1) {
    const double f2 = 0.5 * (1.0 + target.r_o.dot(s1.bloch));
    return make_result({1.0}, f2, Branch::Vertex);
}

SolveResult solve_pair(const TargetState& target, const PureState& s1, const PureState& s2) {
    const double y12 = std::clamp(1.0 - s1.bloch.dot(s2.bloch), 0.0, 2.0);
    if (y12 < 1e-15) {
        // Identical states: any split is equivalent; report the first alone.
        SolveResult single = solve_single(target, s1);
        return embed(single, std::array<int, 1>{0}, 2);
    }

    const double d1 = target.r_o.dot(s1.bloch);
    const double d2 = target.r_o.dot(s2.bloch);
    const double m12 = d1 - d2;
    const double m_plus = 1.0 + 0.5 * (d1 + d2);
    const double radicand = 4.0 * target.m * y12 + m12 * m12;

    const double f2 = 0.25 * (2.0 * m_plus + std::sqrt(radicand));
    const double p1 =
        radicand < kDegenerateRadicand ? 0.5 : 0.5 * (1.0 + m12 / std::sqrt(radicand));

    SolveResult r = make_result({p1, 1.0 - p1}, f2, Branch::Interior);
    if (r.support.size() == 1) r.branch = Branch::Vertex;
    const std::array<PureState, 2> states{s1, s2};
    attach_kkt_if_interior(r, target, states);
    return r;
}

SolveResult solve_orthonormal_pair(const TargetState& target, const PureState& s1,
                                   const PureState& s2) {
    const double overlap = std::abs(s1.amplitudes.dot(s2.amplitudes));
    if (overlap > 1e-9) {
        std::ostringstream os;
        os << "states are not orthonormal (overlap " << overlap << ")";
        throw NotOrthonormal(os.str());
    }

    const double d1 = target.r_o.dot(s1.bloch);
    const double radicand = 2.0 * target.m + d1 * d1;
    const double f2 = 0.5 * (1.0 + std::sqrt(radicand));
    const double p1 =
        radicand < kDegenerateRadicand ? 0.5 : 0.5 * (1.0 + d1 / std::sqrt(radicand));

    SolveResult r = make_result({p1, 1.0 - p1}, f2, Branch::Interior);
    if (r.support.size() == 1) r.branch = Branch::Vertex;
    const std::array<PureState, 2> states{s1, s2};
    attach_kkt_if_interior(r, target, states);
    return r;
}

TripleIntermediates triple_intermediates(const TargetState& target, const PureState& s1,
                                         const PureState& s2, const PureState& s3) {
    const std::array<PureState, 3> states{s1, s2, s3};
    const PairwiseCache cache = pairwise_cache(target, states);
    const double y12 = cache.Y(0, 1), y13 = cache.Y(0, 2), y23 = cache.Y(1, 2);
    const double m31 = cache.M(2, 0), m32 = cache.M(2, 1);

    TripleIntermediates t;
    t.y123 = y12 - y13 - y23;
    const double denom = 4.0 * y13 * y23 - t.y123 * t.y123;
    t.kappa = m31 * m31 * y23 + m32 * m32 * y13 + m31 * m32 * t.y123 + denom * target.m;

    if (denom <= tol::degenerate || t.kappa <= tol::degenerate) {
        // Degenerate geometry; pseudo-probabilities are not defined. Mark them
        // far outside the window so callers fall back to the pair search.
        t.pseudo = {-1.0, -1.0, 3.0};
        return t;
    }

    const double root = std::sqrt(std::max(0.0, y12 * y13 * y23 / t.kappa));
    t.pseudo[0] = (y23 * (t.y123 + 2.0 * y13) - (t.y123 * m32 + 2.0 * y23 * m31) * root) / denom;
    t.pseudo[1] = (y13 * (t.y123 + 2.0 * y23) - (t.y123 * m31 + 2.0 * y13 * m32) * root) / denom;
    t.pseudo[2] = 1.0 - t.pseudo[0] - t.pseudo[1];
    return t;
}

SolveResult solve_triple(const TargetState& target, const PureState& s1, const PureState& s2,
                         const PureState& s3) {
    const std::array<PureState, 3> states{s1, s2, s3};

    if (target.m <= 0.0) {
        // Pure target: the objective is linear in the weights, so the best
        // single state wins.
        SolveResult best = embed(solve_single(target, s1), std::array<int, 1>{0}, 3);
        for (int i : {1, 2}) {
            SolveResult cand =
                embed(solve_single(target, states[static_cast<std::size_t>(i)]),
                      std::array<int, 1>{i}, 3);
            if (candidate_better(cand, best)) best = cand;
        }
        return best;
    }

    const TripleIntermediates inter = triple_intermediates(target, s1, s2, s3);
    const bool interior_valid = std::all_of(inter.pseudo.begin(), inter.pseudo.end(), [](double p) {
        return p >= -tol::pseudo_window && p <= 1.0 + tol::pseudo_window;
    });

    if (interior_valid) {
        std::vector<double> p(inter.pseudo.begin(), inter.pseudo.end());
        for (double& w : p) w = std::clamp(w, 0.0, 1.0);
        const double sum = p[0] + p[1] + p[2];
        for (double& w : p) w /= sum;
        const double f2 = fidelity_sq_mixture(target, states, p);
        SolveResult r = make_result(std::move(p), f2, Branch::Interior);
        attach_kkt_if_interior(r, target, states);
        return r;
    }

    // Optimum sits on an edge of the simplex: best of the three pair problems.
    static constexpr std::array<std::array<int, 2>, 3> kEdges{{{0, 1}, {0, 2}, {1, 2}}};
    SolveResult best;
    best.distance = std::numeric_limits<double>::infinity();
    for (const auto& edge : kEdges) {
        const SolveResult sub = solve_pair(target, states[static_cast<std::size_t>(edge[0])],
                                           states[static_cast<std::size_t>(edge[1])]);
        SolveResult cand = embed(sub, edge, 3);
        // An interior pair optimum lies on an edge of the triple's simplex; a
        // pair vertex stays a vertex.
        if (cand.branch == Branch::Interior) cand.branch = Branch::BoundaryPair;
        cand.kkt_residual.reset();
        if (candidate_better(cand, best)) best = cand;
    }
    return best;
}

Eigen::Matrix4d bloch_affine_matrix(std::span<const PureState> states) {
    if (states.size() != 4)
        throw Error("bloch_affine_matrix expects exactly four states");
    Eigen::Matrix4d a;
    for (int j = 0; j < 4; ++j) {
        const BlochVector& r = states[static_cast<std::size_t>(j)].bloch;
        a(0, j) = r.x();
        a(1, j) = r.y();
        a(2, j) = r.z();
        a(3, j) = 1.0;
    }
    return a;
}

ExactQuadOutcome exact_quad_decomposition(const TargetState& target,
                                          std::span<const PureState> states) {
    const Eigen::Matrix4d a = bloch_affine_matrix(states);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(a,
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sv_max = svd.singularValues()(0);
    const double sv_min = svd.singularValues()(3);
    if (sv_min < tol::rank_relative * sv_max) {
        std::ostringstream os;
        os << "moment matrix is rank deficient (singular values " << sv_min << " / " << sv_max
           << ")";
        throw RankDeficient(os.str());
    }

    Eigen::Vector4d rhs;
    rhs << target.r_o.x(), target.r_o.y(), target.r_o.z(), 1.0;
    const Eigen::Vector4d p = svd.solve(rhs);

    ExactQuadOutcome outcome;
    outcome.pseudo = p;
    outcome.exact = (p.minCoeff() >= -tol::pseudo_window) && (p.maxCoeff() <= 1.0 + tol::pseudo_window);
    if (outcome.exact) {
        SolveResult r = make_result({p(0), p(1), p(2), p(3)}, 1.0, Branch::Exact);
        r.distance = 0.0;
        r.fidelity = 1.0;
        outcome.result = std::move(r);
    }
    return outcome;
}

std::array<PureState, 4> pauli_quad_states(PauliAxis alpha, PauliAxis alpha_prime) {
    return {eigenstate(alpha, true), eigenstate(alpha, false), eigenstate(alpha_prime, true),
            eigenstate(alpha_prime, false)};
}

double pauli_interior_distance(double r_out_of_plane) {
    const double w = std::sqrt(std::max(0.0, 1.0 - r_out_of_plane * r_out_of_plane));
    return 1.0 - std::sqrt(0.5 * (1.0 + w));
}

double pauli_edge_distance(double x, double y, double m) {
    const double root = std::sqrt(std::max(0.0, 4.0 * m + (x - y) * (x - y)));
    return 1.0 - 0.5 * std::sqrt(std::max(0.0, 2.0 + x + y + root));
}

namespace {

struct PauliGeometry {
    double ax = 0.0;      ///< |r_o . alpha|
    double ay = 0.0;      ///< |r_o . alpha'|
    double out = 0.0;     ///< component of r_o orthogonal to the quad's plane
    bool flip_x = false;  ///< r_o . alpha < 0: the +/- alpha labels swap
    bool flip_y = false;
};

PauliGeometry pauli_geometry(const TargetState& target, PauliAxis alpha, PauliAxis alpha_prime) {
    const BlochVector ex = axis_vector(alpha);
    const BlochVector ey = axis_vector(alpha_prime);
    PauliGeometry g;
    const double x = target.r_o.dot(ex);
    const double y = target.r_o.dot(ey);
    g.ax = std::abs(x);
    g.ay = std::abs(y);
    g.flip_x = x < 0.0;
    g.flip_y = y < 0.0;
    g.out = target.r_o.dot(ex.cross(ey));
    return g;
}

}  // namespace

double pauli_t_max(const TargetState& target, PauliAxis alpha, PauliAxis alpha_prime) {
    const PauliGeometry g = pauli_geometry(target, alpha, alpha_prime);
    const double w = std::sqrt(std::max(0.0, 1.0 - g.out * g.out));
    if (w < 1e-12) return 0.5;
    return std::max(0.0, 0.5 - (g.ax + g.ay) / (2.0 * w));
}

SolveResult solve_pauli_quad(const TargetState& target, PauliAxis alpha, PauliAxis alpha_prime,
                             std::optional<double> t_opt) {
    if (alpha == alpha_prime)
        throw ParamOutOfRange("the two Pauli axes must be distinct");

    const PauliGeometry g = pauli_geometry(target, alpha, alpha_prime);
    const bool interior = g.ax * g.ay <= target.m;

    std::vector<double> p(4, 0.0);
    double dist = 0.0;
    Branch branch;

    if (interior) {
        const double w = std::sqrt(std::max(0.0, 1.0 - g.out * g.out));
        // ax, ay <= w always holds inside the ball; near w = 0 both vanish and
        // the ratios below are taken as 0.
        const double rx = w < 1e-12 ? 0.0 : g.ax / w;
        const double ry = w < 1e-12 ? 0.0 : g.ay / w;
        const double t_max = std::max(0.0, 0.5 - 0.5 * (rx + ry));
        const double t = t_opt.value_or(0.0);
        if (t < -1e-12 || t > t_max + 1e-12) {
            std::ostringstream os;
            os << "t = " << t << " outside the admissible interval [0, " << t_max << "]";
            throw TOutOfRange(os.str());
        }
        p[0] = 0.5 * (1.0 + rx - ry) - t;
        p[1] = 0.5 * (1.0 - rx - ry) - t;
        p[2] = ry + t;
        p[3] = t;
        dist = pauli_interior_distance(g.out);
        branch = Branch::PauliInterior;
    } else {
        const double t = t_opt.value_or(0.0);
        if (std::abs(t) > 1e-12) {
            throw TOutOfRange("t must be 0 on the edge branch (no mixing freedom)");
        }
        const double radicand = 4.0 * target.m + (g.ax - g.ay) * (g.ax - g.ay);
        const double p1 = radicand < kDegenerateRadicand
                              ? 0.5
                              : 0.5 * (1.0 + (g.ax - g.ay) / std::sqrt(radicand));
        p[0] = p1;
        p[2] = 1.0 - p1;
        dist = pauli_edge_distance(g.ax, g.ay, target.m);
        branch = Branch::PauliEdge;
    }

    // Fold the +- eigenstate labels back for negative target components.
    if (g.flip_x) std::swap(p[0], p[1]);
    if (g.flip_y) std::swap(p[2], p[3]);

    const double f = 1.0 - dist;
    SolveResult r = make_result(std::move(p), f * f, branch);
    r.distance = dist;
    r.fidelity = f;

    if (branch == Branch::PauliInterior) {
        const std::array<PureState, 4> states = pauli_quad_states(alpha, alpha_prime);
        try {
            r.kkt_residual = kkt_residual(target, states, r.weights);
        } catch (const BoundaryMixture&) {
        }
    }
    return r;
}

double kkt_residual(const TargetState& target, std::span<const PureState> states,
                    std::span<const double> weights) {
    if (weights.size() != states.size())
        throw BadWeights("weight count does not match the state count");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -tol::weights) throw BadWeights("negative mixture weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol::weights) throw BadWeights("mixture weights do not sum to 1");

    const PairwiseCache cache = pairwise_cache(target, states);
    const auto n = static_cast<Eigen::Index>(states.size());

    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            s += weights[static_cast<std::size_t>(i)] * weights[static_cast<std::size_t>(j)] *
                 cache.Y(i, j);
    s = std::max(0.0, 2.0 * s);
    if (s <= tol::boundary_s) {
        std::ostringstream os;
        os << "mixture lies on the Bloch-ball surface (s = " << s << "); gradient undefined";
        throw BoundaryMixture(os.str());
    }

    // Gradient of -F^2 with respect to the weights.
    const double coeff = std::sqrt(0.5 * target.m) / std::sqrt(s);
    Eigen::VectorXd grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double yp = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            yp += cache.Y(i, j) * weights[static_cast<std::size_t>(j)];
        grad(i) = -0.5 * cache.dots(i) - coeff * yp;
    }

    std::vector<int> active;
    for (Eigen::Index i = 0; i < n; ++i)
        if (weights[static_cast<std::size_t>(i)] > tol::support) active.push_back(static_cast<int>(i));

    double mean = 0.0;
    for (int i : active) mean += grad(i);
    mean /= static_cast<double>(active.size());

    double residual = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a)
        for (std::size_t b = a + 1; b < active.size(); ++b)
            residual = std::max(residual, std::abs(grad(active[a]) - grad(active[b])));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights[static_cast<std::size_t>(i)] > tol::support) continue;
        // Inactive components need grad_i >= common active value (nonnegative
        // complementary-slackness multiplier).
        residual = std::max(residual, mean - grad(i));
    }
    return residual;
}

}  // namespace qapprox

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qapprox/closed_form.hpp"
#include "test_support.hpp"

using namespace qapprox;
using cd = std::complex<double>;

namespace {

const PureState kUp = bloch_of_pure({cd(1, 0), cd(0, 0)});
const PureState kDown = bloch_of_pure({cd(0, 0), cd(1, 0)});
const PureState kPlus = bloch_of_pure({cd(1, 0), cd(1, 0)});
const PureState kPlusI = bloch_of_pure({cd(1, 0), cd(0, 1)});

TargetState maximally_mixed() { return validate_density(0.5 * Eigen::Matrix2cd::Identity()); }

TargetState transformed(const TargetState& t, const Eigen::Matrix2cd& u) {
    return validate_density(u * t.matrix * u.adjoint());
}

PureState transformed(const PureState& s, const Eigen::Matrix2cd& u) {
    return bloch_of_pure(u * s.amplitudes);
}

/// Reported weights must reproduce the reported distance through independent
/// matrix algebra.
void check_self_consistent(const TargetState& target, std::span<const PureState> states,
                           const SolveResult& result) {
    REQUIRE(result.weights.size() == states.size());
    double sum = 0.0;
    for (double w : result.weights) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0 + 1e-12);
        sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(std::abs(result.fidelity - (1.0 - result.distance)) <= 1e-15);
    const double via_matrix = support::matrix_distance(target, states, result.weights);
    CHECK(std::abs(via_matrix - result.distance) <= 1e-12);
    for (std::size_t i = 0; i < result.weights.size(); ++i) {
        const bool in_support =
            std::find(result.support.begin(), result.support.end(), static_cast<int>(i)) !=
            result.support.end();
        CHECK(in_support == (result.weights[i] > 1e-9));
    }
}

/// No random simplex point may beat the reported optimum.
void check_not_beaten(const TargetState& target, std::span<const PureState> states,
                      double dist, support::Rng& rng, int tries = 200) {
    for (int i = 0; i < tries; ++i) {
        const auto w = rng.simplex_weights(states.size());
        CHECK(support::matrix_distance(target, states, w) >= dist - 1e-12);
    }
}

}  // namespace

TEST_CASE("solve_single scores one state") {
    Eigen::Matrix2cd ket0;
    ket0 << 1, 0, 0, 0;
    const TargetState up = validate_density(ket0);

    CHECK(solve_single(up, kUp).distance == 0.0);
    CHECK(solve_single(up, kDown).distance == 1.0);
    const SolveResult plus = solve_single(up, kPlus);
    CHECK(std::abs(plus.distance - (1.0 - std::sqrt(0.5))) < 1e-15);
    CHECK(plus.branch == Branch::Vertex);
    CHECK(plus.support == std::vector<int>{0});
}

TEST_CASE("solve_pair recovers the exact basis mixture") {
    const TargetState half = maximally_mixed();
    const SolveResult r = solve_pair(half, kUp, kDown);
    CHECK(r.distance == 0.0);
    CHECK(r.weights[0] == 0.5);
    CHECK(r.weights[1] == 0.5);
    CHECK(r.branch == Branch::Interior);
    REQUIRE(r.kkt_residual.has_value());
    CHECK(*r.kkt_residual <= 1e-12);
}

TEST_CASE("solve_pair handles the weight-independent degenerate case") {
    // |+> against {|0>, |1>}: every mixture gives the same fidelity.
    const TargetState plus = validate_density(0.5 * (Eigen::Matrix2cd() << 1, 1, 1, 1).finished());
    const SolveResult r = solve_pair(plus, kUp, kDown);
    CHECK(r.weights[0] == 0.5);
    CHECK(std::abs(r.distance - (1.0 - std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("solve_pair of identical states reduces to one state") {
    support::Rng rng(21);
    const PureState s = rng.haar_state();
    const TargetState target = rng.random_target();
    const SolveResult r = solve_pair(target, s, s);
    CHECK(r.weights == std::vector<double>{1.0, 0.0});
    CHECK(r.branch == Branch::Vertex);
    CHECK(std::abs(r.distance - solve_single(target, s).distance) < 1e-15);
}

TEST_CASE("solve_pair picks the better vertex for pure targets") {
    Eigen::Matrix2cd ket0;
    ket0 << 1, 0, 0, 0;
    const TargetState up = validate_density(ket0);
    const SolveResult r = solve_pair(up, kPlus, kDown);
    CHECK(r.branch == Branch::Vertex);
    CHECK(r.weights == std::vector<double>{1.0, 0.0});
    CHECK(std::abs(r.distance - (1.0 - std::sqrt(0.5))) < 1e-15);
}

TEST_CASE("solve_pair is optimal and self-consistent on random instances") {
    support::Rng rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const TargetState target = rng.random_target();
        const auto states = rng.haar_states(2);
        const SolveResult r = solve_pair(target, states[0], states[1]);
        check_self_consistent(target, states, r);
        check_not_beaten(target, states, r.distance, rng, 100);
        if (r.branch == Branch::Interior && r.kkt_residual) CHECK(*r.kkt_residual <= 1e-8);
    }
}

TEST_CASE("solve_orthonormal_pair matches the general pair solver") {
    const TargetState t = target_from_params(0.3, 0.5, M_PI / 3.0);
    const SolveResult special = solve_orthonormal_pair(t, kUp, kDown);
    const SolveResult general = solve_pair(t, kUp, kDown);
    CHECK(std::abs(special.distance - general.distance) <= 1e-12);
    CHECK(std::abs(special.weights[0] - general.weights[0]) <= 1e-12);

    // Direct evaluation of the closed form for the computational basis.
    const double dz = t.r_o.z();
    const double expected = 1.0 - std::sqrt(0.5 * (1.0 + std::sqrt(2.0 * t.m + dz * dz)));
    CHECK(std::abs(special.distance - expected) <= 1e-12);
    const double p1 = 0.5 * (1.0 + dz / std::sqrt(2.0 * t.m + dz * dz));
    CHECK(std::abs(special.weights[0] - p1) <= 1e-12);

    CHECK_THROWS_AS(
        solve_orthonormal_pair(t, support::example_pair()[0], support::example_pair()[1]),
        NotOrthonormal);
}

TEST_CASE("solve_orthonormal_pair agrees on rotated bases") {
    support::Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Matrix2cd u = rng.haar_unitary();
        const PureState a = bloch_of_pure(u.col(0));
        const PureState b = bloch_of_pure(u.col(1));
        const TargetState target = rng.random_target();
        const SolveResult special = solve_orthonormal_pair(target, a, b);
        const SolveResult general = solve_pair(target, a, b);
        CHECK(std::abs(special.distance - general.distance) <= 1e-12);
        CHECK(std::abs(special.weights[0] - general.weights[0]) <= 1e-12);
        CHECK(std::abs(special.weights[1] - general.weights[1]) <= 1e-12);
    }
}

TEST_CASE("solve_triple finds the interior basis mixture") {
    const TargetState half = maximally_mixed();
    const SolveResult r = solve_triple(half, kUp, kDown, kPlus);
    CHECK(r.distance == 0.0);
    CHECK(r.branch == Branch::Interior);
    CHECK(r.weights[0] == 0.5);
    CHECK(r.weights[1] == 0.5);
    CHECK(r.weights[2] == 0.0);
    CHECK(r.support == std::vector<int>{0, 1});

    const TripleIntermediates inter = triple_intermediates(half, kUp, kDown, kPlus);
    CHECK(std::abs(inter.y123) < 1e-15);
    CHECK(std::abs(inter.kappa - 2.0) < 1e-12);
    CHECK(std::abs(inter.pseudo[0] - 0.5) < 1e-12);
    CHECK(std::abs(inter.pseudo[1] - 0.5) < 1e-12);
    CHECK(std::abs(inter.pseudo[2]) < 1e-12);
}

TEST_CASE("solve_triple reduces to the best vertex for pure targets") {
    // |0> is exactly representable, so m == 0 and the vertex path is exact.
    const auto extra = support::example_triple();
    Eigen::Matrix2cd ket0;
    ket0 << 1, 0, 0, 0;
    const TargetState t = validate_density(ket0);
    const SolveResult r = solve_triple(t, kUp, extra[1], extra[2]);
    CHECK(r.branch == Branch::Vertex);
    CHECK(r.distance == 0.0);
    CHECK(r.weights[0] == 1.0);

    // Generic pure targets carry ~1e-16 of representation mixedness, so the
    // solver may legitimately return an interior point a hair's width from the
    // vertex; the distance must match the best single state either way.
    support::Rng rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const TargetState pure = target_from_params(rng.uniform(), 1.0, rng.uniform(0.0, 2.0 * M_PI));
        const auto set = rng.haar_states(3);
        const SolveResult best = solve_triple(pure, set[0], set[1], set[2]);
        double best_dot = -2.0;
        for (const auto& s : set) best_dot = std::max(best_dot, pure.r_o.dot(s.bloch));
        CHECK(std::abs(best.distance - (1.0 - std::sqrt(0.5 * (1.0 + best_dot)))) <= 1e-9);
        if (best.branch != Branch::Vertex) {
            const double top = *std::max_element(best.weights.begin(), best.weights.end());
            CHECK(top >= 1.0 - 1e-6);
        }
    }
}

TEST_CASE("solve_triple with a duplicated state matches the dedup pair") {
    support::Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const auto states = rng.haar_states(2);
        const TargetState target = rng.random_target();
        const SolveResult tri = solve_triple(target, states[0], states[0], states[1]);
        const SolveResult pair = solve_pair(target, states[0], states[1]);
        CHECK(std::abs(tri.distance - pair.distance) <= 1e-12);
    }
}

TEST_CASE("solve_triple interior branch satisfies the stationarity identities") {
    support::Rng rng(26);
    int interior_seen = 0;
    for (int trial = 0; trial < 400 && interior_seen < 60; ++trial) {
        const TargetState target = rng.random_target();
        const auto s = rng.haar_states(3);
        const SolveResult r = solve_triple(target, s[0], s[1], s[2]);
        check_self_consistent(target, s, r);
        if (r.branch != Branch::Interior) continue;
        ++interior_seen;

        REQUIRE(r.kkt_residual.has_value());
        CHECK(*r.kkt_residual <= 1e-8);

        // At the stationary point, s = 2 m Y12 Y13 Y23 / kappa.
        const TripleIntermediates inter = triple_intermediates(target, s[0], s[1], s[2]);
        const PairwiseCache cache = pairwise_cache(target, s);
        double quad = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                quad += 2.0 * r.weights[static_cast<std::size_t>(i)] *
                        r.weights[static_cast<std::size_t>(j)] * cache.Y(i, j);
        const double predicted =
            2.0 * target.m * cache.Y(0, 1) * cache.Y(0, 2) * cache.Y(1, 2) / inter.kappa;
        CHECK(std::abs(quad - predicted) <= 1e-9);
    }
    CHECK(interior_seen >= 60);
}

TEST_CASE("solve_triple is never beaten by random mixtures") {
    support::Rng rng(27);
    for (int trial = 0; trial < 40; ++trial) {
        const TargetState target = rng.random_target();
        const auto s = rng.haar_states(3);
        const SolveResult r = solve_triple(target, s[0], s[1], s[2]);
        check_not_beaten(target, s, r.distance, rng, 150);
    }
}

TEST_CASE("bloch_affine_matrix stacks expectation values") {
    const std::vector<PureState> states{kUp, kDown, kPlus, kPlusI};
    const Eigen::Matrix4d a = bloch_affine_matrix(states);
    for (int j = 0; j < 4; ++j) {
        const Eigen::Vector3d via_trace =
            support::bloch_via_trace(states[static_cast<std::size_t>(j)].amplitudes);
        CHECK(std::abs(a(0, j) - via_trace.x()) < 1e-12);
        CHECK(std::abs(a(1, j) - via_trace.y()) < 1e-12);
        CHECK(std::abs(a(2, j) - via_trace.z()) < 1e-12);
        CHECK(a(3, j) == 1.0);
    }
}

TEST_CASE("exact_quad_decomposition solves the octahedron corner case") {
    const std::vector<PureState> states{kUp, kDown, kPlus, kPlusI};
    const ExactQuadOutcome outcome = exact_quad_decomposition(maximally_mixed(), states);
    REQUIRE(outcome.exact);
    const SolveResult& r = *outcome.result;
    CHECK(r.distance == 0.0);
    CHECK(r.branch == Branch::Exact);
    CHECK(std::abs(r.weights[0] - 0.5) < 1e-12);
    CHECK(std::abs(r.weights[1] - 0.5) < 1e-12);
    CHECK(std::abs(r.weights[2]) < 1e-12);
    CHECK(std::abs(r.weights[3]) < 1e-12);
}

TEST_CASE("exact_quad_decomposition flags infeasible targets") {
    // |phi> at -y is outside the hull of {up, down, plus, plus_i}.
    const PureState minus_i = bloch_of_pure({cd(1, 0), cd(0, -1)});
    const TargetState t =
        validate_density(minus_i.amplitudes * minus_i.amplitudes.adjoint());
    const std::vector<PureState> states{kUp, kDown, kPlus, kPlusI};
    const ExactQuadOutcome outcome = exact_quad_decomposition(t, states);
    CHECK_FALSE(outcome.exact);
    CHECK(outcome.pseudo.minCoeff() < -1e-9);
}

TEST_CASE("exact_quad_decomposition rejects coplanar quadruples") {
    const auto square = pauli_quad_states(PauliAxis::X, PauliAxis::Z);
    CHECK_THROWS_AS(exact_quad_decomposition(maximally_mixed(), square), RankDeficient);
}

TEST_CASE("exact_quad_decomposition recovers generated mixtures") {
    support::Rng rng(28);
    for (int trial = 0; trial < 50; ++trial) {
        const auto states = rng.haar_states(4);
        const Eigen::Matrix4d a = bloch_affine_matrix(states);
        const Eigen::JacobiSVD<Eigen::Matrix4d> svd(a);
        const double cond = svd.singularValues()(0) / svd.singularValues()(3);
        if (cond > 1e6) continue;

        const auto weights = rng.simplex_weights(4);
        const TargetState target =
            validate_density(support::mixture_density(states, weights));
        const ExactQuadOutcome outcome = exact_quad_decomposition(target, states);
        REQUIRE(outcome.exact);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(outcome.result->weights[static_cast<std::size_t>(i)] -
                           weights[static_cast<std::size_t>(i)]) <= 1e-8);
        CHECK(support::matrix_distance(target, states, outcome.result->weights) <= 1e-10);
    }
}

TEST_CASE("pauli_quad_states produce the axis-aligned square") {
    const auto states = pauli_quad_states(PauliAxis::X, PauliAxis::Z);
    CHECK((states[0].bloch - BlochVector(1, 0, 0)).norm() < 1e-15);
    CHECK((states[1].bloch - BlochVector(-1, 0, 0)).norm() < 1e-15);
    CHECK((states[2].bloch - BlochVector(0, 0, 1)).norm() < 1e-15);
    CHECK((states[3].bloch - BlochVector(0, 0, -1)).norm() < 1e-15);
}

TEST_CASE("solve_pauli_quad solves the canonical cases") {
    // Maximally mixed: interior branch, exact representation.
    const SolveResult center = solve_pauli_quad(maximally_mixed(), PauliAxis::X, PauliAxis::Z);
    CHECK(center.branch == Branch::PauliInterior);
    CHECK(center.distance == 0.0);
    CHECK(center.weights[0] == 0.5);
    CHECK(center.weights[1] == 0.5);

    // Pure state on the diagonal of the square: edge branch. The represented
    // Bloch vector sits one ulp inside the sphere, so m ~ 1e-16 rather than 0
    // and the sqrt(4m) term shifts the distance by ~1e-8; compare against the
    // formula at the represented m exactly and the ideal value loosely.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const TargetState diag = target_from_bloch(BlochVector(inv_sqrt2, 0, inv_sqrt2));
    const SolveResult edge = solve_pauli_quad(diag, PauliAxis::X, PauliAxis::Z);
    CHECK(edge.branch == Branch::PauliEdge);
    CHECK(edge.distance ==
          pauli_edge_distance(diag.r_o.x(), diag.r_o.z(), diag.m));
    CHECK(std::abs(edge.distance - (1.0 - 0.5 * std::sqrt(2.0 + std::sqrt(2.0)))) <= 1e-7);
    CHECK(edge.weights[0] == 0.5);
    CHECK(edge.weights[2] == 0.5);

    // Generic interior target.
    const TargetState inter = target_from_bloch(BlochVector(0.2, 0.5, 0.3));
    const SolveResult r = solve_pauli_quad(inter, PauliAxis::X, PauliAxis::Z);
    CHECK(r.branch == Branch::PauliInterior);
    const double expected = 1.0 - std::sqrt(0.5 * (1.0 + std::sqrt(0.75)));
    CHECK(std::abs(r.distance - expected) <= 1e-12);
    CHECK(std::abs(r.weights[0] - 0.4422650) <= 1e-6);
    CHECK(std::abs(r.weights[1] - 0.2113249) <= 1e-6);
    CHECK(std::abs(r.weights[2] - 0.3464102) <= 1e-6);
    CHECK(r.weights[3] == 0.0);
    REQUIRE(r.kkt_residual.has_value());
    CHECK(*r.kkt_residual <= 1e-8);

    CHECK_THROWS_AS(solve_pauli_quad(inter, PauliAxis::X, PauliAxis::X), ParamOutOfRange);
}

TEST_CASE("solve_pauli_quad t-freedom moves weight without changing the state") {
    const TargetState inter = target_from_bloch(BlochVector(0.2, 0.5, 0.3));
    const auto states = pauli_quad_states(PauliAxis::X, PauliAxis::Z);
    const double t_max = pauli_t_max(inter, PauliAxis::X, PauliAxis::Z);
    CHECK(t_max > 0.0);

    const double base = solve_pauli_quad(inter, PauliAxis::X, PauliAxis::Z).distance;
    for (double t : {0.0, 0.5 * t_max, t_max}) {
        const SolveResult r = solve_pauli_quad(inter, PauliAxis::X, PauliAxis::Z, t);
        CHECK(std::abs(r.distance - base) <= 1e-12);
        CHECK(std::abs(support::matrix_distance(inter, states, r.weights) - base) <= 1e-12);
    }
    CHECK_THROWS_AS(solve_pauli_quad(inter, PauliAxis::X, PauliAxis::Z, t_max + 1e-6),
                    TOutOfRange);
    CHECK_THROWS_AS(solve_pauli_quad(inter, PauliAxis::X, PauliAxis::Z, -1e-6), TOutOfRange);
}

TEST_CASE("solve_pauli_quad folds negative components onto the labels") {
    const auto states = pauli_quad_states(PauliAxis::X, PauliAxis::Z);
    support::Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const TargetState target = rng.random_target();
        const SolveResult r = solve_pauli_quad(target, PauliAxis::X, PauliAxis::Z);
        check_self_consistent(target, states, r);
        check_not_beaten(target, states, r.distance, rng, 60);
    }
}

TEST_CASE("solve_pauli_quad branches join continuously") {
    support::Rng rng(30);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = rng.uniform();
        const double y = rng.uniform() * (1.0 - x);
        const double z = std::sqrt(std::max(0.0, 1.0 - (x + y) * (x + y)));
        const double m = x * y;  // exactly on the branch surface
        const double interior = pauli_interior_distance(z);
        const double edge = pauli_edge_distance(x, y, m);
        CHECK(std::abs(interior - edge) <= 1e-9);
        CHECK(std::abs(interior - (1.0 - std::sqrt(0.5 * (1.0 + x + y)))) <= 1e-9);
    }
}

TEST_CASE("solve_pauli_quad parameter symmetries") {
    support::Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform();
        const double k = rng.uniform();
        const double phi = rng.uniform(0.0, 2.0 * M_PI);

        // a -> 1 - a flips the z component: absorbed by the +/- labels.
        const double d1 =
            solve_pauli_quad(target_from_params(a, k, phi), PauliAxis::X, PauliAxis::Z).distance;
        const double d2 =
            solve_pauli_quad(target_from_params(1.0 - a, k, phi), PauliAxis::X, PauliAxis::Z)
                .distance;
        CHECK(std::abs(d1 - d2) <= 1e-10);

        // A quarter turn about z maps the xz-problem onto the yz-problem.
        const double rotated = std::fmod(phi + 0.5 * M_PI, 2.0 * M_PI);
        const double d3 = solve_pauli_quad(target_from_params(a, k, rotated), PauliAxis::X,
                                           PauliAxis::Z)
                              .distance;
        const double d4 =
            solve_pauli_quad(target_from_params(a, k, phi), PauliAxis::Y, PauliAxis::Z).distance;
        CHECK(std::abs(d3 - d4) <= 1e-10);
    }
}

TEST_CASE("kkt_residual vanishes at optima and flags perturbations") {
    const TargetState half = maximally_mixed();
    const std::vector<PureState> basis{kUp, kDown};
    CHECK(kkt_residual(half, basis, std::vector<double>{0.5, 0.5}) <= 1e-12);

    // A fixed mixed instance whose optimum is interior but not symmetric.
    const TargetState t = target_from_params(0.3, 0.5, 0.7);
    const SolveResult opt = solve_pair(t, kUp, kPlus);
    REQUIRE(opt.branch == Branch::Interior);
    const std::vector<PureState> pair{kUp, kPlus};
    CHECK(kkt_residual(t, pair, opt.weights) <= 1e-8);
    CHECK(kkt_residual(t, pair, std::vector<double>{0.99, 0.01}) > 1e-4);

    CHECK_THROWS_AS(kkt_residual(t, pair, std::vector<double>{1.0, 0.0}), BoundaryMixture);
    CHECK_THROWS_AS(kkt_residual(t, pair, std::vector<double>{0.7, 0.2}), BadWeights);
}

TEST_CASE("solvers are covariant under global unitaries") {
    support::Rng rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Matrix2cd u = rng.haar_unitary();
        const TargetState target = rng.random_target();
        const auto s = rng.haar_states(3);

        const double pair_before = solve_pair(target, s[0], s[1]).distance;
        const double pair_after =
            solve_pair(transformed(target, u), transformed(s[0], u), transformed(s[1], u))
                .distance;
        CHECK(std::abs(pair_before - pair_after) <= 1e-10);

        const double triple_before = solve_triple(target, s[0], s[1], s[2]).distance;
        const double triple_after =
            solve_triple(transformed(target, u), transformed(s[0], u), transformed(s[1], u),
                         transformed(s[2], u))
                .distance;
        CHECK(std::abs(triple_before - triple_after) <= 1e-10);
    }
}

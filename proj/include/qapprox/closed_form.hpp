#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qapprox/bloch.hpp"

namespace qapprox {

/// Which closed-form case produced a result.
enum class Branch {
    Interior,       ///< stationary point with every candidate weight admissible
    BoundaryPair,   ///< optimum on a simplex edge, found via the pair solver
    Vertex,         ///< optimum is a single state of the set
    Exact,          ///< target decomposed exactly, distance 0
    PauliInterior,  ///< Pauli quadruple, interior branch (product condition holds)
    PauliEdge,      ///< Pauli quadruple, edge branch
};

std::string_view to_string(Branch branch);

/// Result of any solver: optimal weights over the states it was given.
struct SolveResult {
    std::vector<double> weights;
    double distance = 0.0;
    double fidelity = 0.0;
    std::vector<int> support;      ///< indices with weight > tol::support
    Branch branch = Branch::Vertex;
    std::optional<double> kkt_residual;  ///< attached to interior solutions when defined
};

/// Intermediates of the triple solver, exposed for diagnostics and tests.
struct TripleIntermediates {
    double y123 = 0.0;                      ///< Y12 - Y13 - Y23
    double kappa = 0.0;                     ///< discriminant of the stationarity system
    std::array<double, 3> pseudo{};         ///< pseudo-probabilities before windowing
};

/// Outcome of the exact-quadruple check. `exact` means the linear system's
/// solution was a valid probability vector and `result` is set (distance 0);
/// otherwise `pseudo` carries the out-of-range solution for diagnostics.
struct ExactQuadOutcome {
    bool exact = false;
    std::optional<SolveResult> result;
    Eigen::Vector4d pseudo = Eigen::Vector4d::Zero();
};

/// Best approximation by one pure state: F^2 = (1 + r_o . r_1) / 2.
SolveResult solve_single(const TargetState& target, const PureState& s1);

/// Optimal two-state mixture:
///   F^2 = (2 M_plus + sqrt(4 m Y12 + M12^2)) / 4,
///   p_1 = (1 + M12 / sqrt(4 m Y12 + M12^2)) / 2,
/// with M_plus = 1 + r_o . (r_1 + r_2) / 2 and M12 = r_o . (r_1 - r_2).
/// A vanishing radicand means F^2 is weight-independent; p_1 = 1/2 then.
/// Identical states (Y12 = 0) reduce to solve_single of the first state.
SolveResult solve_pair(const TargetState& target, const PureState& s1, const PureState& s2);

/// Specialization of solve_pair to an orthonormal pair (r_1 . r_2 = -1):
///   D = 1 - sqrt((1 + sqrt(2m + (r_o . r_1)^2)) / 2),
///   p_i = (1 + r_o . r_i / sqrt(2m + (r_o . r_i)^2)) / 2.
/// Throws NotOrthonormal when |<phi_1|phi_2>| exceeds tol::weights.
SolveResult solve_orthonormal_pair(const TargetState& target, const PureState& s1,
                                   const PureState& s2);

/// Pseudo-probabilities of the three-state stationarity system.
TripleIntermediates triple_intermediates(const TargetState& target, const PureState& s1,
                                         const PureState& s2, const PureState& s3);

/// Optimal three-state mixture. Interior stationary point when all
/// pseudo-probabilities fall in [-tol::pseudo_window, 1 + tol::pseudo_window]
/// (clamped, renormalized); otherwise the best of the three edge pairs.
/// Pure targets reduce to the best single state.
SolveResult solve_triple(const TargetState& target, const PureState& s1, const PureState& s2,
                         const PureState& s3);

/// Affine moment matrix of four pure states: rows are the sigma_x, sigma_y,
/// sigma_z expectation values of each state plus an all-ones row, so that
/// A p = (r_o, 1) encodes "the mixture reproduces the target exactly".
Eigen::Matrix4d bloch_affine_matrix(std::span<const PureState> states);

/// Attempts an exact four-state decomposition of the target by solving
/// A p = (r_o, 1). Throws RankDeficient when the smallest singular value of A
/// is below tol::rank_relative times the largest.
ExactQuadOutcome exact_quad_decomposition(const TargetState& target,
                                          std::span<const PureState> states);

enum class PauliAxis { X, Y, Z };

/// The four eigenstates (+alpha, -alpha, +alpha', -alpha') of two Pauli axes.
std::array<PureState, 4> pauli_quad_states(PauliAxis alpha, PauliAxis alpha_prime);

/// Interior-branch distance of the Pauli quadruple; depends only on the
/// component of r_o along the axis missing from the quadruple's plane.
double pauli_interior_distance(double r_out_of_plane);

/// Edge-branch distance of the Pauli quadruple for nonnegative in-plane
/// components x = r_o,alpha and y = r_o,alpha' and mixedness m.
double pauli_edge_distance(double x, double y, double m);

/// Optimal mixture of the four eigenstates of two distinct Pauli axes.
/// Interior branch when r_o,alpha * r_o,alpha' <= m (after folding signs onto
/// the +- labels), with one free parameter t in [0, t_max] shifting weight
/// between equivalent decompositions (default t = 0, TOutOfRange otherwise);
/// edge branch via the pair formula on (+alpha, +alpha') otherwise.
SolveResult solve_pauli_quad(const TargetState& target, PauliAxis alpha, PauliAxis alpha_prime,
                             std::optional<double> t = std::nullopt);

/// Largest admissible t for the interior branch of solve_pauli_quad.
double pauli_t_max(const TargetState& target, PauliAxis alpha, PauliAxis alpha_prime);

/// Stationarity defect of a weight vector for min D over the simplex:
/// the spread of the active-face gradient components plus any violation of
/// the sign condition on inactive components. Zero (to roundoff) at every
/// interior optimum. Throws BoundaryMixture when the mixture lies on the
/// ball surface (s <= tol::boundary_s), where the gradient is undefined.
double kkt_residual(const TargetState& target, std::span<const PureState> states,
                    std::span<const double> weights);

}  // namespace qapprox

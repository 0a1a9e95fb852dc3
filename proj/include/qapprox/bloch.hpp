#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qapprox/errors.hpp"

namespace qapprox {

/// Bloch vector (x, y, z). Unit norm for pure states, |r| <= 1 inside the ball.
using BlochVector = Eigen::Vector3d;

/// Tolerances shared across the library. Values are part of the public
/// contract; tests pin behaviour at these thresholds.
namespace tol {
/// Hermiticity / trace / positivity slack accepted by validate_density.
inline constexpr double validation = 1e-9;
/// Amplitude norms below this cannot be normalized.
inline constexpr double zero_norm = 1e-6;
/// Unit-norm slack for Bloch vectors that are required to be pure.
inline constexpr double pure_norm = 1e-6;
/// Weight nonnegativity / normalization slack.
inline constexpr double weights = 1e-9;
/// Entries below this do not count towards the support of a mixture.
inline constexpr double support = 1e-9;
/// Degeneracy guard for the triple solver denominators.
inline constexpr double degenerate = 1e-10;
/// Acceptance window half-width for pseudo-probabilities.
inline constexpr double pseudo_window = 1e-9;
/// Relative singular-value cutoff for rank decisions on moment matrices.
inline constexpr double rank_relative = 1e-10;
/// Bloch distance below which two pure states are considered duplicates.
inline constexpr double duplicate = 1e-9;
/// Mixtures with s below this sit on the ball surface for KKT purposes.
inline constexpr double boundary_s = 1e-9;
}  // namespace tol

/// A normalized pure qubit state with its cached Bloch vector.
struct PureState {
    Eigen::Vector2cd amplitudes;
    BlochVector bloch;
};

/// A validated qubit density matrix with cached Bloch vector r_o and
/// mixedness m = 1 - Tr(rho^2) = (1 - |r_o|^2) / 2.
struct TargetState {
    Eigen::Matrix2cd matrix;
    BlochVector r_o;
    double m = 0.0;
};

/// Pairwise geometry of a target against a set of pure states:
///   dots(i) = r_o . r_i
///   Y(i, j) = 1 - r_i . r_j          (in [0, 2], zero diagonal)
///   M(i, j) = dots(i) - dots(j)      (antisymmetric)
struct PairwiseCache {
    Eigen::VectorXd dots;
    Eigen::MatrixXd Y;
    Eigen::MatrixXd M;
};

/// The Pauli matrices sigma_x, sigma_y, sigma_z.
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

/// Validates a 2x2 matrix as a density operator. Hermitian defects and trace
/// deviations within `tol` are repaired (symmetrize, renormalize); larger
/// defects throw NotHermitian / NotUnitTrace, and eigenvalues below -tol
/// throw NotPositive. Returns the repaired state with cached r_o and m.
TargetState validate_density(const Eigen::Matrix2cd& matrix, double tolerance = tol::validation);

/// Builds the target family
///   rho(a, k, phi) = [[1-a, k*sqrt(a(1-a))*e^{-i phi}],
///                     [k*sqrt(a(1-a))*e^{+i phi}, a]]
/// for a, k in [0, 1] and phi in [0, 2*pi]; throws ParamOutOfRange otherwise.
TargetState target_from_params(double a, double k, double phi);

/// Builds a target from a Bloch vector with |r| <= 1 (validated).
TargetState target_from_bloch(const BlochVector& r, double tolerance = tol::validation);

/// Normalizes amplitudes (ZeroVector if the norm is below tol::zero_norm)
/// and computes the Bloch vector (2 Re a*b, 2 Im a*b, |a|^2 - |b|^2).
PureState bloch_of_pure(const Eigen::Vector2cd& amplitudes);

/// Reconstructs amplitudes from a unit Bloch vector (NotPureState if the
/// norm deviates from 1 by more than tol::pure_norm).
PureState pure_from_bloch(const BlochVector& r);

/// Precomputes the pairwise geometry used by every solver and the oracle.
PairwiseCache pairwise_cache(const TargetState& target, std::span<const PureState> states);

/// Squared fidelity between the target and the mixture sum_i p_i |phi_i><phi_i|:
///   F^2 = 1/2 + sum_i p_i dots(i) / 2 + sqrt(m/2) * sqrt(s),   s = p^T Y p.
/// Weights must be nonnegative and sum to 1 within tol::weights (BadWeights).
double fidelity_sq_mixture(const TargetState& target, std::span<const PureState> states,
                           std::span<const double> weights);

/// Same formula evaluated from a prebuilt cache without weight validation;
/// this is the oracle's hot path. `m` is the target mixedness.
double fidelity_sq_mixture(const PairwiseCache& cache, double m, std::span<const double> weights);

/// Distance D = 1 - sqrt(F^2), with F^2 clipped into [0, 1] first.
double distance(double fidelity_sq);

}  // namespace qapprox

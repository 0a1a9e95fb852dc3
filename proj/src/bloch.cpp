#include "qapprox/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace qapprox {

using std::complex;

namespace {

constexpr complex<double> kI{0.0, 1.0};

std::string describe(const char* what, double magnitude) {
    std::ostringstream os;
    os << what << " (magnitude " << magnitude << ")";
    return os.str();
}

}  // namespace

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd s;
    s << 0, 1, 1, 0;
    return s;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd s;
    s << 0, -kI, kI, 0;
    return s;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd s;
    s << 1, 0, 0, -1;
    return s;
}

TargetState validate_density(const Eigen::Matrix2cd& matrix, double tolerance) {
    const double herm_defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tolerance)
        throw NotHermitian(describe("density matrix is not Hermitian", herm_defect));

    Eigen::Matrix2cd h = 0.5 * (matrix + matrix.adjoint());
    const double trace = h.trace().real();
    if (std::abs(trace - 1.0) > tolerance)
        throw NotUnitTrace(describe("density matrix trace differs from 1", std::abs(trace - 1.0)));
    h /= trace;

    TargetState t;
    t.matrix = h;
    t.r_o = BlochVector(2.0 * h(0, 1).real(), -2.0 * h(0, 1).imag(),
                        (h(0, 0) - h(1, 1)).real());

    // Eigenvalues of a unit-trace 2x2 Hermitian matrix are (1 +- |r|) / 2.
    const double radius = t.r_o.norm();
    const double min_eig = 0.5 * (1.0 - radius);
    if (min_eig < -tolerance)
        throw NotPositive(describe("density matrix has a negative eigenvalue", -min_eig));

    t.m = std::max(0.0, 0.5 * (1.0 - t.r_o.squaredNorm()));
    return t;
}

TargetState target_from_params(double a, double k, double phi) {
    constexpr double slack = 1e-12;
    if (a < -slack || a > 1.0 + slack)
        throw ParamOutOfRange(describe("parameter a outside [0, 1]", a));
    if (k < -slack || k > 1.0 + slack)
        throw ParamOutOfRange(describe("parameter k outside [0, 1]", k));
    const double two_pi = 2.0 * M_PI;
    if (phi < -slack || phi > two_pi + slack)
        throw ParamOutOfRange(describe("parameter phi outside [0, 2*pi]", phi));

    a = std::clamp(a, 0.0, 1.0);
    k = std::clamp(k, 0.0, 1.0);
    phi = std::clamp(phi, 0.0, two_pi);

    const double off = k * std::sqrt(a * (1.0 - a));
    TargetState t;
    t.r_o = BlochVector(2.0 * off * std::cos(phi), 2.0 * off * std::sin(phi), 1.0 - 2.0 * a);
    t.matrix << 1.0 - a, off * std::exp(-kI * phi), off * std::exp(kI * phi), a;
    t.m = std::max(0.0, 0.5 * (1.0 - t.r_o.squaredNorm()));
    return t;
}

TargetState target_from_bloch(const BlochVector& r, double tolerance) {
    Eigen::Matrix2cd rho;
    rho << 0.5 * (1.0 + r.z()), 0.5 * complex<double>(r.x(), -r.y()),
           0.5 * complex<double>(r.x(), r.y()), 0.5 * (1.0 - r.z());
    return validate_density(rho, tolerance);
}

PureState bloch_of_pure(const Eigen::Vector2cd& amplitudes) {
    const double norm = amplitudes.norm();
    if (norm < tol::zero_norm)
        throw ZeroVector(describe("amplitude vector is numerically zero", norm));

    PureState s;
    s.amplitudes = amplitudes / norm;

    const complex<double> cross = std::conj(s.amplitudes(0)) * s.amplitudes(1);
    s.bloch = BlochVector(2.0 * cross.real(), 2.0 * cross.imag(),
                          std::norm(s.amplitudes(0)) - std::norm(s.amplitudes(1)));
    s.bloch /= s.bloch.norm();  // polish away last-ulp drift
    return s;
}

PureState pure_from_bloch(const BlochVector& r) {
    const double norm = r.norm();
    if (std::abs(norm - 1.0) > tol::pure_norm)
        throw NotPureState(describe("Bloch vector of a pure state must be unit length", norm));

    const BlochVector u = r / norm;
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double phi = std::atan2(u.y(), u.x());
    Eigen::Vector2cd amps(std::cos(0.5 * theta), std::exp(kI * phi) * std::sin(0.5 * theta));
    return bloch_of_pure(amps);
}

PairwiseCache pairwise_cache(const TargetState& target, std::span<const PureState> states) {
    const auto n = static_cast<Eigen::Index>(states.size());
    PairwiseCache cache;
    cache.dots.resize(n);
    cache.Y.resize(n, n);
    cache.M.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        cache.dots(i) = target.r_o.dot(states[static_cast<std::size_t>(i)].bloch);
    for (Eigen::Index i = 0; i < n; ++i) {
        cache.Y(i, i) = 0.0;
        cache.M(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double y = 1.0 - states[static_cast<std::size_t>(i)].bloch.dot(
                                       states[static_cast<std::size_t>(j)].bloch);
            cache.Y(i, j) = cache.Y(j, i) = std::clamp(y, 0.0, 2.0);
            cache.M(i, j) = cache.dots(i) - cache.dots(j);
            cache.M(j, i) = -cache.M(i, j);
        }
    }
    return cache;
}

double fidelity_sq_mixture(const TargetState& target, std::span<const PureState> states,
                           std::span<const double> weights) {
    if (weights.size() != states.size())
        throw BadWeights("weight count does not match the state count");
    double sum = 0.0;
    for (double w : weights) {
        if (w < -tol::weights)
            throw BadWeights(describe("negative mixture weight", w));
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol::weights)
        throw BadWeights(describe("mixture weights do not sum to 1", std::abs(sum - 1.0)));

    std::vector<double> p(weights.begin(), weights.end());
    for (double& w : p) w = std::max(w, 0.0);
    return fidelity_sq_mixture(pairwise_cache(target, states), target.m, p);
}

double fidelity_sq_mixture(const PairwiseCache& cache, double m, std::span<const double> weights) {
    const auto n = static_cast<Eigen::Index>(weights.size());
    double linear = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) linear += weights[static_cast<std::size_t>(i)] * cache.dots(i);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            s += weights[static_cast<std::size_t>(i)] * weights[static_cast<std::size_t>(j)] * cache.Y(i, j);
    s = std::max(0.0, 2.0 * s);
    const double f2 = 0.5 + 0.5 * linear + std::sqrt(0.5 * m) * std::sqrt(s);
    return std::clamp(f2, 0.0, 1.0);
}

double distance(double fidelity_sq) {
    return 1.0 - std::sqrt(std::clamp(fidelity_sq, 0.0, 1.0));
}

}  // namespace qapprox

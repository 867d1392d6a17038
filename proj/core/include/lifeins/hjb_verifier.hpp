#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lifeins/lifecycle/controls.hpp"

namespace lifeins::hjb {

/// V and its partial derivatives at one (t, x).
struct ValueDerivatives {
    double V = 0.0;
    double Vt = 0.0;
    double Vx = 0.0;
    double Vxx = 0.0;
};

enum class DerivativeSource { Analytic, FiniteDifference };

/// Derivatives of the ansatz V = a/gamma (x+b)^gamma with a', b' taken from
/// their ODE right-hand sides.
ValueDerivatives analytic_derivatives(const StrategyCoefficients& coef, double t, double x);
/// Central differences of value_function (one-sided three-point at t = 0, T).
/// Steps follow the cube-root-of-epsilon rule: the wealth step is scaled by
/// x + b, the time step by min(max(1, t), (x + b) / |b'|).
ValueDerivatives finite_difference_derivatives(const StrategyCoefficients& coef, double t, double x);

/// The four additive pieces of the Hamiltonian.
struct HamiltonianTerms {
    double drift = 0.0;      ///< (i - c - p + (r + theta.alpha) x) Vx
    double diffusion = 0.0;  ///< x^2/2 |sigma^T theta|^2 Vxx
    double bequest = 0.0;    ///< lambda B(x + p/eta, t); absent without insurance
    double utility = 0.0;    ///< U(c, t)
    /// Largest magnitude among the individual summands (each drift piece separately).
    double scale = 0.0;

    double total() const noexcept { return drift + diffusion + bequest + utility; }
};

HamiltonianTerms hamiltonian_terms(const StrategyCoefficients& coef, double t, double x,
                                   const ControlAction& action, double Vx, double Vxx);

/// H(t, x; c, p, theta) with the supplied Vx, Vxx.
double hamiltonian(const StrategyCoefficients& coef, double t, double x, const ControlAction& action,
                   double Vx, double Vxx);

struct Residual {
    double value = 0.0;      ///< Vt - lambda V + H
    double scale = 0.0;      ///< largest individual term magnitude
    double relative = 0.0;   ///< |value| / scale
    double lambda_V = 0.0;   ///< lambda V, for the |value| / (1 + |lambda V|) normalisation

    double relative_to_lambda_V() const noexcept;
};

/// HJB residual at the closed-form controls.
Residual hjb_residual(const StrategyCoefficients& coef, double t, double x,
                      DerivativeSource source = DerivativeSource::Analytic);
/// HJB residual with an arbitrary action in place of the supremum.
Residual hjb_residual(const StrategyCoefficients& coef, double t, double x, const ControlAction& action,
                      DerivativeSource source = DerivativeSource::Analytic);

/// |V(T, x) - W(x)|.
double terminal_boundary_gap(const StrategyCoefficients& coef, double x);

/// Relative gaps of the three first-order conditions at the closed form.
struct FocGaps {
    double consumption = 0.0;  ///< |U_c - Vx| / |Vx|
    /// |p - p_foc| / (eta (|x| + Z_foc)), where Z_foc solves lambda/eta B_Z = Vx
    /// and p_foc = eta (Z_foc - x).
    double premium = 0.0;
    double portfolio = 0.0;  ///< norm of the vector condition over |x Vx alpha|
};

FocGaps foc_gaps(const StrategyCoefficients& coef, double t, double x);

/// Second-order conditions: U_cc < 0, (lambda/eta^2) B_ZZ < 0 and
/// x^2 Vxx sigma sigma^T negative definite. vxx_override replaces the
/// analytic Vxx (test hook for the negated case).
bool hessian_check(const StrategyCoefficients& coef, double t, double x,
                   std::optional<double> vxx_override = std::nullopt);

/// Maximises the Hamiltonian directly: Newton on each of the decoupled
/// consumption, premium and portfolio problems, started from half the
/// closed form. Throws OracleFailure after 100 iterations without convergence.
ControlAction numeric_hamiltonian_argmax(const StrategyCoefficients& coef, double t, double x);

struct VerificationOptions {
    std::size_t time_points = 51;
    std::size_t wealth_points = 51;
    double x_min = 1e3;
    double x_max = 3e6;
    double analytic_tolerance = 1e-8;
    double fd_tolerance = 1e-4;
    double foc_tolerance = 1e-10;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct VerificationPoint {
    double t = 0.0;
    double x = 0.0;
    double residual = 0.0;
    double relative_residual = 0.0;     ///< analytic, term-scale normalised
    double lambda_v_residual = 0.0;     ///< analytic, |res| / (1 + |lambda V|)
    double fd_relative_residual = 0.0;  ///< finite-difference derivatives
    FocGaps foc;
    bool hessian_ok = false;
};

struct VerificationReport {
    std::vector<VerificationPoint> points;
    double max_abs_residual = 0.0;
    double max_relative_residual = 0.0;
    double max_lambda_v_residual = 0.0;
    double max_fd_relative_residual = 0.0;
    double max_foc_gap = 0.0;
    double boundary_gap = 0.0;
    bool all_hessian_ok = true;
    bool passed = false;

    std::string summary() const;
};

/// Evaluates every check on a time x wealth grid; points are computed in
/// parallel and stored in row-major (t, x) order.
VerificationReport verify(const StrategyCoefficients& coef, const VerificationOptions& options = {});

}  // namespace lifeins::hjb

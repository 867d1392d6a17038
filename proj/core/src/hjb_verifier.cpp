#include "lifeins/hjb_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lifeins/errors.hpp"
#include "lifeins/lifecycle/preferences.hpp"
#include "lifeins/numerics/linalg.hpp"
#include "lifeins/parallel.hpp"

namespace lifeins::hjb {

namespace {

const double kCubeRootEps = std::cbrt(std::numeric_limits<double>::epsilon());

bool insured(const StrategyCoefficients& coef) { return coef.variant() == Variant::WithInsurance; }

// Below zero, utility for gamma < 0 is the -inf sentinel instead of an error.
double crra_or_sentinel(double u(const Preferences&, double, double), const Preferences& prefs, double arg, double t) {
    if (arg < 0.0 && prefs.gamma < 0.0) return -std::numeric_limits<double>::infinity();
    return u(prefs, arg, t);
}

void check_region(const StrategyCoefficients& coef, double t, double x) {
    if (!(x > 0.0)) throw DomainError("verification requires x > 0");
    if (!(x + coef.human_capital(t) > 0.0)) throw DomainError("verification requires x + b(t) > 0");
}

}  // namespace

ValueDerivatives analytic_derivatives(const StrategyCoefficients& coef, double t, double x) {
    const CoefficientsAt c = coef.at(t);
    const double g = coef.scenario().prefs.gamma;
    const double y = x + c.b;
    if (!(y > 0.0)) throw DomainError("analytic_derivatives requires x + b(t) > 0");
    const double y_gm1 = std::pow(y, g - 1.0);
    ValueDerivatives d;
    d.V = c.a * y_gm1 * y / g;
    d.Vt = c.a_rate * y_gm1 * y / g + c.a * y_gm1 * c.b_rate;
    d.Vx = c.a * y_gm1;
    d.Vxx = (g - 1.0) * c.a * y_gm1 / y;
    return d;
}

ValueDerivatives finite_difference_derivatives(const StrategyCoefficients& coef, double t, double x) {
    const double T = coef.horizon();
    auto V = [&](double tt, double xx) { return value_function(coef, tt, xx); };
    ValueDerivatives d;
    d.V = V(t, x);

    // Near T with little wealth, b(t) moves full wealth on a much shorter
    // time scale than t itself.
    const double y = x + coef.human_capital(t);
    const double b_rate = std::abs(coef.human_capital_rate(t));
    double time_scale = std::max(1.0, std::abs(t));
    if (b_rate > 0.0) time_scale = std::min(time_scale, y / b_rate);
    const double ht = kCubeRootEps * time_scale;
    if (t - ht < 0.0)
        d.Vt = (-3.0 * d.V + 4.0 * V(t + ht, x) - V(t + 2.0 * ht, x)) / (2.0 * ht);
    else if (t + ht > T)
        d.Vt = (3.0 * d.V - 4.0 * V(t - ht, x) + V(t - 2.0 * ht, x)) / (2.0 * ht);
    else
        d.Vt = (V(t + ht, x) - V(t - ht, x)) / (2.0 * ht);

    const double hx = kCubeRootEps * y;
    const double up = V(t, x + hx), down = V(t, x - hx);
    d.Vx = (up - down) / (2.0 * hx);
    d.Vxx = (up - 2.0 * d.V + down) / (hx * hx);
    return d;
}

HamiltonianTerms hamiltonian_terms(const StrategyCoefficients& coef, double t, double x,
                                   const ControlAction& action, double Vx, double Vxx) {
    if (!(x >= 0.0)) throw DomainError("hamiltonian requires x >= 0");
    const Scenario& s = coef.scenario();
    const CoefficientsAt c = coef.at(t);
    if (action.theta.size() != c.alpha.size()) throw DomainError("hamiltonian: theta has wrong dimension");
    const Eigen::MatrixXd sigma = s.market.volatility(c.t);

    HamiltonianTerms h;
    const double excess = action.theta.dot(c.alpha) * x;
    const double pieces[] = {c.income * Vx, -action.c * Vx, -action.p * Vx, c.r * x * Vx, excess * Vx};
    for (double p : pieces) {
        h.drift += p;
        h.scale = std::max(h.scale, std::abs(p));
    }
    h.diffusion = 0.5 * x * x * (sigma.transpose() * action.theta).squaredNorm() * Vxx;
    h.scale = std::max(h.scale, std::abs(h.diffusion));
    if (insured(coef)) {
        h.bequest = c.lambda * crra_or_sentinel(utility_B, s.prefs, legacy_value(x, action.p, c.eta), c.t);
        h.scale = std::max(h.scale, std::abs(h.bequest));
    } else if (action.p != 0.0) {
        throw DomainError("hamiltonian: premium must be 0 without insurance");
    }
    h.utility = crra_or_sentinel(utility_U, s.prefs, action.c, c.t);
    h.scale = std::max(h.scale, std::abs(h.utility));
    return h;
}

double hamiltonian(const StrategyCoefficients& coef, double t, double x, const ControlAction& action, double Vx,
                   double Vxx) {
    return hamiltonian_terms(coef, t, x, action, Vx, Vxx).total();
}

double Residual::relative_to_lambda_V() const noexcept { return std::abs(value) / (1.0 + std::abs(lambda_V)); }

Residual hjb_residual(const StrategyCoefficients& coef, double t, double x, const ControlAction& action,
                      DerivativeSource source) {
    check_region(coef, t, x);
    const ValueDerivatives d = source == DerivativeSource::Analytic ? analytic_derivatives(coef, t, x)
                                                                    : finite_difference_derivatives(coef, t, x);
    const double lambda = coef.scenario().mortality.hazard(std::clamp(t, 0.0, coef.horizon()));
    const HamiltonianTerms h = hamiltonian_terms(coef, t, x, action, d.Vx, d.Vxx);
    Residual r;
    r.lambda_V = lambda * d.V;
    r.value = d.Vt - r.lambda_V + h.total();
    r.scale = std::max({std::abs(d.Vt), std::abs(r.lambda_V), h.scale});
    r.relative = r.scale > 0.0 ? std::abs(r.value) / r.scale : std::abs(r.value);
    return r;
}

Residual hjb_residual(const StrategyCoefficients& coef, double t, double x, DerivativeSource source) {
    check_region(coef, t, x);
    return hjb_residual(coef, t, x, optimal_control(coef, t, x), source);
}

double terminal_boundary_gap(const StrategyCoefficients& coef, double x) {
    return std::abs(value_function(coef, coef.horizon(), x) - utility_W(coef.scenario().prefs, x));
}

FocGaps foc_gaps(const StrategyCoefficients& coef, double t, double x) {
    check_region(coef, t, x);
    const Scenario& s = coef.scenario();
    const CoefficientsAt c = coef.at(t);
    const ValueDerivatives d = analytic_derivatives(coef, t, x);
    const ControlAction a = optimal_control(coef, t, x);

    FocGaps gaps;
    gaps.consumption = std::abs(-d.Vx + marginal_utility(s.prefs, a.c, c.t)) / std::abs(d.Vx);
    if (insured(coef)) {
        // Estate solving lambda/eta B_Z(Z) = Vx, compared in premium units so
        // that Z = x + p/eta is never formed by cancellation.
        const double g = s.prefs.gamma;
        const double Z_foc = std::pow(c.eta * d.Vx * std::exp(s.prefs.rho * c.t) / c.lambda, 1.0 / (g - 1.0));
        const double p_foc = c.eta * (Z_foc - x);
        gaps.premium = std::abs(a.p - p_foc) / (c.eta * (std::abs(x) + Z_foc));
    }
    const Eigen::MatrixXd sigma = s.market.volatility(c.t);
    const Eigen::VectorXd first = x * d.Vx * c.alpha;
    const Eigen::VectorXd second = x * x * d.Vxx * (sigma * sigma.transpose()) * a.theta;
    const double denom = first.norm();
    gaps.portfolio = denom > 0.0 ? (first + second).norm() / denom : second.norm();
    return gaps;
}

bool hessian_check(const StrategyCoefficients& coef, double t, double x, std::optional<double> vxx_override) {
    check_region(coef, t, x);
    const Scenario& s = coef.scenario();
    const CoefficientsAt c = coef.at(t);
    const ControlAction a = optimal_control(coef, t, x);
    const double Vxx = vxx_override.value_or(analytic_derivatives(coef, t, x).Vxx);

    if (!(utility_curvature(s.prefs, a.c, c.t) < 0.0)) return false;
    if (insured(coef)) {
        const double Z = legacy_value(x, a.p, c.eta);
        if (!(c.lambda / (c.eta * c.eta) * utility_curvature(s.prefs, Z, c.t) < 0.0)) return false;
    }
    const Eigen::MatrixXd sigma = s.market.volatility(c.t);
    return numerics::is_negative_definite(x * x * Vxx * (sigma * sigma.transpose()));
}

ControlAction numeric_hamiltonian_argmax(const StrategyCoefficients& coef, double t, double x) {
    check_region(coef, t, x);
    constexpr int kMaxIter = 100;
    constexpr double kStepTol = 1e-14;
    const Scenario& s = coef.scenario();
    const CoefficientsAt c = coef.at(t);
    const ValueDerivatives d = analytic_derivatives(coef, t, x);
    const ControlAction start = optimal_control(coef, t, x);
    const double g = s.prefs.gamma;
    const double disc = std::exp(-s.prefs.rho * c.t);

    ControlAction out;

    // sup_c U(c,t) - c Vx
    double cc = 0.5 * start.c;
    bool done = false;
    for (int it = 0; it < kMaxIter && !done; ++it) {
        const double grad = disc * std::pow(cc, g - 1.0) - d.Vx;
        const double curv = (g - 1.0) * disc * std::pow(cc, g - 2.0);
        double next = cc - grad / curv;
        if (!(next > 0.0)) next = 0.5 * cc;
        done = std::abs(next - cc) <= kStepTol * cc;
        cc = next;
    }
    if (!done) throw OracleFailure("consumption Newton did not converge");
    out.c = cc;

    // sup_p lambda B(x + p/eta, t) - p Vx
    if (insured(coef)) {
        double p = 0.5 * start.p;
        done = false;
        for (int it = 0; it < kMaxIter && !done; ++it) {
            const double Z = x + p / c.eta;
            const double grad = c.lambda / c.eta * disc * std::pow(Z, g - 1.0) - d.Vx;
            const double curv = c.lambda / (c.eta * c.eta) * (g - 1.0) * disc * std::pow(Z, g - 2.0);
            double next = p - grad / curv;
            if (!(x + next / c.eta > 0.0)) next = c.eta * (0.5 * Z - x);
            done = std::abs(next - p) <= kStepTol * c.eta * Z;
            p = next;
        }
        if (!done) throw OracleFailure("premium Newton did not converge");
        out.p = p;
    }

    // sup_theta x^2/2 |sigma^T theta|^2 Vxx + x theta.alpha Vx
    const Eigen::MatrixXd sigma = s.market.volatility(c.t);
    const Eigen::MatrixXd hess = x * x * d.Vxx * (sigma * sigma.transpose());
    const numerics::SpdFactor neg_hess(-hess);
    Eigen::VectorXd theta = 0.5 * start.theta;
    done = false;
    for (int it = 0; it < kMaxIter && !done; ++it) {
        const Eigen::VectorXd grad = x * d.Vx * c.alpha + hess * theta;
        const Eigen::VectorXd step = neg_hess.solve(grad);
        theta += step;
        done = step.norm() <= kStepTol * std::max(theta.norm(), 1e-300);
    }
    if (!done) throw OracleFailure("portfolio Newton did not converge");
    out.theta = theta;
    out.theta0 = 1.0 - theta.sum();
    return out;
}

std::string VerificationReport::summary() const {
    std::ostringstream os;
    os.precision(3);
    os << (passed ? "PASS" : "FAIL") << ": " << points.size() << " points, max relative HJB residual "
       << std::scientific << max_relative_residual << " (1+|lambda V| normalised " << max_lambda_v_residual
       << "), finite-difference " << max_fd_relative_residual << ", max FOC gap " << max_foc_gap
       << ", boundary gap " << boundary_gap << ", hessian " << (all_hessian_ok ? "ok" : "FAILED");
    return os.str();
}

VerificationReport verify(const StrategyCoefficients& coef, const VerificationOptions& options) {
    if (options.time_points < 2 || options.wealth_points < 2)
        throw InputError("verification grid needs at least 2 points per axis");
    if (!(options.x_min > 0.0 && options.x_max > options.x_min))
        throw InputError("verification wealth range must satisfy 0 < x_min < x_max");
    const double T = coef.horizon();
    const std::size_t nt = options.time_points, nx = options.wealth_points;

    VerificationReport report;
    report.points.resize(nt * nx);
    parallel_for(nt * nx, options.threads, [&](std::size_t idx) {
        const std::size_t i = idx / nx, j = idx % nx;
        VerificationPoint& p = report.points[idx];
        p.t = i + 1 == nt ? T : T * static_cast<double>(i) / static_cast<double>(nt - 1);
        p.x = j + 1 == nx ? options.x_max
                          : options.x_min + (options.x_max - options.x_min) * static_cast<double>(j) /
                                                static_cast<double>(nx - 1);
        const Residual analytic = hjb_residual(coef, p.t, p.x, DerivativeSource::Analytic);
        p.residual = analytic.value;
        p.relative_residual = analytic.relative;
        p.lambda_v_residual = analytic.relative_to_lambda_V();
        p.fd_relative_residual = hjb_residual(coef, p.t, p.x, DerivativeSource::FiniteDifference).relative;
        p.foc = foc_gaps(coef, p.t, p.x);
        p.hessian_ok = hessian_check(coef, p.t, p.x);
    });

    for (const auto& p : report.points) {
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(p.residual));
        report.max_relative_residual = std::max(report.max_relative_residual, p.relative_residual);
        report.max_lambda_v_residual = std::max(report.max_lambda_v_residual, p.lambda_v_residual);
        report.max_fd_relative_residual = std::max(report.max_fd_relative_residual, p.fd_relative_residual);
        report.max_foc_gap = std::max({report.max_foc_gap, p.foc.consumption, p.foc.premium, p.foc.portfolio});
        report.all_hessian_ok = report.all_hessian_ok && p.hessian_ok;
    }
    for (std::size_t j = 0; j < nx; ++j)
        report.boundary_gap = std::max(report.boundary_gap, terminal_boundary_gap(coef, report.points[j].x));
    report.passed = report.max_relative_residual < options.analytic_tolerance &&
                    report.max_lambda_v_residual < options.analytic_tolerance &&
                    report.max_fd_relative_residual < options.fd_tolerance &&
                    report.max_foc_gap < options.foc_tolerance && report.all_hessian_ok && report.boundary_gap == 0.0;
    return report;
}

}  // namespace lifeins::hjb

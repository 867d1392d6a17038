#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "lifeins/mortality.hpp"
#include "lifeins/numerics/quadrature.hpp"

namespace oracle {

/// e(t) and b(t) of the reference scenario from their integral forms,
/// with H and K rebuilt from the raw parameters rather than the library.
struct Figure1Integrals {
    lifeins::MortalityModel m = lifeins::MortalityModel::gompertz_makeham(0.001, std::exp(-9.5), 0.1);
    double gamma = -3.0, rho = 0.03, r = 0.04, loading = 1.05, T = 40.0;
    double i0 = 50000.0, growth = 0.03;
    bool insured = true;
    double Sigma = 0.0;

    explicit Figure1Integrals(bool with_insurance = true) : insured(with_insurance) {
        Eigen::Matrix2d s;
        s << 0.19, 0.15, 0.17, 0.21;
        const Eigen::Matrix2d A = s * s.transpose();
        const Eigen::Vector2d alpha(0.03, 0.07);
        const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        const Eigen::Vector2d xa((A(1, 1) * alpha[0] - A(0, 1) * alpha[1]) / det,
                                 (A(0, 0) * alpha[1] - A(1, 0) * alpha[0]) / det);
        Sigma = 0.5 * alpha.dot(xa);
    }

    double eta(double t) const { return insured ? loading * m.hazard(t) : 0.0; }

    double H(double t) const {
        const double l = m.hazard(t);
        return (l + rho) / (1 - gamma) - gamma * Sigma / ((1 - gamma) * (1 - gamma)) - gamma / (1 - gamma) * (r + eta(t));
    }

    double K(double t) const {
        if (!insured) return 1.0;
        const double l = m.hazard(t);
        return std::pow(l, 1 / (1 - gamma)) / std::pow(eta(t), gamma / (1 - gamma)) + 1;
    }

    double e(double t) const {
        using lifeins::numerics::integrate_adaptive;
        auto intH = [&](double s) { return integrate_adaptive([&](double u) { return H(u); }, t, s, 1e-13); };
        return std::exp(-intH(T)) + integrate_adaptive([&](double s) { return std::exp(-intH(s)) * K(s); }, t, T, 1e-12);
    }

    double b(double t) const {
        using lifeins::numerics::integrate_adaptive;
        return integrate_adaptive(
            [&](double s) {
                const double discount = r * (s - t) + (insured ? loading * m.cumulative_hazard(t, s) : 0.0);
                return i0 * std::exp(growth * s - discount);
            },
            t, T, 1e-13);
    }
};

}  // namespace oracle

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lifeins/numerics/curve.hpp"

namespace lifeins {

/// Derived algebra of the market at one instant.
struct MarketAlgebra {
    Eigen::VectorXd alpha;     ///< risk premium mu - r, 1/yr
    Eigen::MatrixXd xi;        ///< (sigma sigma^T)^{-1}
    Eigen::VectorXd xi_alpha;  ///< xi * alpha
    double Sigma = 0.0;        ///< alpha^T xi alpha - |sigma^T xi alpha|^2 / 2
};

/// Deterministic-coefficient market with one riskless asset and N risky
/// assets driven by M Brownian motions, on the horizon [0, T].
///
/// Coefficients are piecewise-linear curves (one-knot curves are constants).
/// Construction checks r > 0 and that sigma sigma^T is well conditioned at
/// every knot.
class MarketModel {
public:
    MarketModel(double horizon, numerics::Curve rate, std::vector<numerics::Curve> appreciation,
                std::vector<std::vector<numerics::Curve>> volatility);

    static MarketModel constant(double horizon, double rate, const Eigen::VectorXd& appreciation,
                                const Eigen::MatrixXd& volatility);

    int assets() const noexcept { return static_cast<int>(mu_.size()); }
    int drivers() const noexcept { return static_cast<int>(sigma_.front().size()); }
    double horizon() const noexcept { return horizon_; }
    bool is_constant() const noexcept { return cached_.has_value(); }
    /// Largest condition number of sigma sigma^T over the coefficient knots.
    double max_condition_number() const noexcept { return max_condition_; }

    double rate(double t) const;
    Eigen::VectorXd appreciation(double t) const;
    Eigen::MatrixXd volatility(double t) const;

    Eigen::VectorXd risk_premium(double t) const;
    Eigen::VectorXd xi_alpha(double t) const;
    double sigma_quadratic(double t) const;
    /// Least-norm pi with sigma pi = alpha, i.e. sigma^T (sigma sigma^T)^{-1} alpha.
    Eigen::VectorXd market_price_of_risk(double t) const;
    MarketAlgebra algebra(double t) const;

    /// Union of all coefficient knots inside [0, T], plus the endpoints.
    std::vector<double> knot_times() const;

    const numerics::Curve& rate_curve() const noexcept { return r_; }
    const std::vector<numerics::Curve>& appreciation_curves() const noexcept { return mu_; }
    const std::vector<std::vector<numerics::Curve>>& volatility_curves() const noexcept { return sigma_; }

private:
    void check_time(double t, const char* what) const;
    MarketAlgebra compute_algebra(double t) const;

    double horizon_;
    numerics::Curve r_;
    std::vector<numerics::Curve> mu_;
    std::vector<std::vector<numerics::Curve>> sigma_;
    std::optional<MarketAlgebra> cached_;
    double max_condition_ = 1.0;
};

/// The two-term Sigma formula from its ingredients.
double sigma_quadratic(const Eigen::VectorXd& alpha, const Eigen::VectorXd& xi_alpha,
                       const Eigen::MatrixXd& volatility);

}  // namespace lifeins

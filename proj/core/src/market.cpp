#include "lifeins/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"
#include "lifeins/numerics/linalg.hpp"

namespace lifeins {

MarketModel::MarketModel(double horizon, numerics::Curve rate, std::vector<numerics::Curve> appreciation,
                         std::vector<std::vector<numerics::Curve>> volatility)
    : horizon_(horizon), r_(std::move(rate)), mu_(std::move(appreciation)), sigma_(std::move(volatility)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw InputError("market horizon must be > 0");
    if (mu_.empty()) throw InputError("market needs at least one risky asset");
    if (sigma_.size() != mu_.size()) throw InputError("volatility matrix must have one row per risky asset");
    const std::size_t m = sigma_.front().size();
    if (m == 0) throw InputError("volatility matrix needs at least one Brownian driver");
    for (const auto& row : sigma_)
        if (row.size() != m) throw InputError("volatility matrix rows must have equal length");

    auto covers = [&](const numerics::Curve& c) { return c.contains(0.0) && c.contains(horizon_); };
    bool all_constant = r_.is_constant();
    if (!covers(r_)) throw InputError("interest-rate curve must cover [0, T]");
    for (const auto& c : mu_) {
        if (!covers(c)) throw InputError("appreciation curve must cover [0, T]");
        all_constant = all_constant && c.is_constant();
    }
    for (const auto& row : sigma_)
        for (const auto& c : row) {
            if (!covers(c)) throw InputError("volatility curve must cover [0, T]");
            all_constant = all_constant && c.is_constant();
        }

    for (double t : knot_times()) {
        if (!(this->rate(t) > 0.0)) {
            std::ostringstream os;
            os << "interest rate must be positive (r(" << t << ") = " << this->rate(t) << ")";
            throw InputError(os.str());
        }
        const Eigen::MatrixXd s = this->volatility(t);
        max_condition_ = std::max(max_condition_, numerics::SpdFactor(s * s.transpose()).condition_number());
    }
    if (all_constant) cached_ = compute_algebra(0.0);
}

MarketModel MarketModel::constant(double horizon, double rate, const Eigen::VectorXd& appreciation,
                                  const Eigen::MatrixXd& volatility) {
    if (volatility.rows() != appreciation.size())
        throw InputError("volatility matrix must have one row per risky asset");
    std::vector<numerics::Curve> mu;
    std::vector<std::vector<numerics::Curve>> sigma(static_cast<std::size_t>(volatility.rows()));
    for (Eigen::Index n = 0; n < appreciation.size(); ++n) {
        mu.push_back(numerics::Curve::constant(appreciation(n)));
        for (Eigen::Index m = 0; m < volatility.cols(); ++m)
            sigma[static_cast<std::size_t>(n)].push_back(numerics::Curve::constant(volatility(n, m)));
    }
    return MarketModel(horizon, numerics::Curve::constant(rate), std::move(mu), std::move(sigma));
}

void MarketModel::check_time(double t, const char* what) const {
    const double slack = 1e-10 * horizon_;
    if (!(t >= -slack && t <= horizon_ + slack)) {
        std::ostringstream os;
        os << what << ": t=" << t << " outside market horizon [0, " << horizon_ << "]";
        throw DomainError(os.str());
    }
}

double MarketModel::rate(double t) const {
    check_time(t, "rate");
    return r_(std::clamp(t, 0.0, horizon_));
}

Eigen::VectorXd MarketModel::appreciation(double t) const {
    check_time(t, "appreciation");
    t = std::clamp(t, 0.0, horizon_);
    Eigen::VectorXd mu(assets());
    for (int n = 0; n < assets(); ++n) mu(n) = mu_[static_cast<std::size_t>(n)](t);
    return mu;
}

Eigen::MatrixXd MarketModel::volatility(double t) const {
    check_time(t, "volatility");
    t = std::clamp(t, 0.0, horizon_);
    Eigen::MatrixXd s(assets(), drivers());
    for (int n = 0; n < assets(); ++n)
        for (int m = 0; m < drivers(); ++m)
            s(n, m) = sigma_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)](t);
    return s;
}

Eigen::VectorXd MarketModel::risk_premium(double t) const {
    return appreciation(t) - Eigen::VectorXd::Constant(assets(), rate(t));
}

MarketAlgebra MarketModel::compute_algebra(double t) const {
    MarketAlgebra out;
    out.alpha = risk_premium(t);
    const Eigen::MatrixXd s = volatility(t);
    const numerics::SpdFactor factor(s * s.transpose());
    out.xi = factor.inverse();
    out.xi_alpha = factor.solve(out.alpha);
    out.Sigma = lifeins::sigma_quadratic(out.alpha, out.xi_alpha, s);
    return out;
}

MarketAlgebra MarketModel::algebra(double t) const {
    if (cached_) {
        check_time(t, "algebra");
        return *cached_;
    }
    return compute_algebra(t);
}

Eigen::VectorXd MarketModel::xi_alpha(double t) const { return algebra(t).xi_alpha; }

double MarketModel::sigma_quadratic(double t) const { return algebra(t).Sigma; }

Eigen::VectorXd MarketModel::market_price_of_risk(double t) const {
    return volatility(t).transpose() * xi_alpha(t);
}

std::vector<double> MarketModel::knot_times() const {
    std::vector<double> times{0.0, horizon_};
    auto add = [&](const numerics::Curve& c) {
        if (c.is_constant()) return;
        for (double k : c.knots())
            if (k > 0.0 && k < horizon_) times.push_back(k);
    };
    add(r_);
    for (const auto& c : mu_) add(c);
    for (const auto& row : sigma_)
        for (const auto& c : row) add(c);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

double sigma_quadratic(const Eigen::VectorXd& alpha, const Eigen::VectorXd& xi_alpha,
                       const Eigen::MatrixXd& volatility) {
    return alpha.dot(xi_alpha) - 0.5 * (volatility.transpose() * xi_alpha).squaredNorm();
}

}  // namespace lifeins

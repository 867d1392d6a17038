#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lifeins/errors.hpp"
#include "lifeins/market.hpp"
#include "market_oracles.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using lifeins::MarketModel;
using lifeins::numerics::Curve;
using testing_support::rel_err;

namespace {

MarketModel reference() {
    Eigen::MatrixXd s(2, 2);
    s << 0.19, 0.15, 0.17, 0.21;
    return MarketModel::constant(40.0, 0.04, Eigen::Vector2d(0.07, 0.11), s);
}

MarketModel scalar(double mu = 0.07, double sigma = 0.2) {
    return MarketModel::constant(10.0, 0.04, Eigen::VectorXd::Constant(1, mu), Eigen::MatrixXd::Constant(1, 1, sigma));
}

}  // namespace

TEST(RiskPremium, ReferenceValues) {
    const Eigen::VectorXd a = reference().risk_premium(0.0);
    EXPECT_NEAR(a[0], 0.03, 1e-16);
    EXPECT_NEAR(a[1], 0.07, 1e-16);
}

TEST(RiskPremium, ZeroWhenDriftEqualsRate) {
    EXPECT_EQ(scalar(0.04).risk_premium(3.0)[0], 0.0);
}

TEST(RiskPremium, ScalarCase) { EXPECT_NEAR(scalar(0.05).risk_premium(1.0)[0], 0.01, 1e-16); }

TEST(RiskPremium, OutsideHorizonIsDomainError) {
    EXPECT_THROW(reference().risk_premium(-1.0), lifeins::DomainError);
    EXPECT_THROW(reference().risk_premium(40.5), lifeins::DomainError);
}

TEST(XiAlpha, ScalarCase) { EXPECT_NEAR(scalar().xi_alpha(0.0)[0], 0.75, 1e-14); }

TEST(XiAlpha, IdentityVolatility) {
    const MarketModel m = MarketModel::constant(1.0, 0.04, Eigen::Vector2d(0.07, 0.11), Eigen::Matrix2d::Identity());
    EXPECT_NEAR(m.xi_alpha(0.5)[0], 0.03, 1e-16);
    EXPECT_NEAR(m.xi_alpha(0.5)[1], 0.07, 1e-16);
}

TEST(XiAlpha, ReferenceMatchesAdjugateOracle) {
    const MarketModel m = reference();
    const Eigen::VectorXd xa = m.xi_alpha(12.0);
    EXPECT_LT(rel_err(xa[0], oracle::xi_alpha_1), 1e-12);
    EXPECT_LT(rel_err(xa[1], oracle::xi_alpha_2), 1e-12);
    EXPECT_NEAR(xa[0], -10.98, 0.005);
    EXPECT_NEAR(xa[1], 10.55, 0.005);
    const Eigen::MatrixXd s = m.volatility(0.0);
    EXPECT_LE((s * s.transpose() * xa - m.risk_premium(0.0)).norm(), 1e-10 * m.risk_premium(0.0).norm());
}

TEST(XiAlpha, SingularMarketRejected) {
    Eigen::Matrix2d s;
    s << 0.2, 0.1, 0.4, 0.2;
    EXPECT_THROW(MarketModel::constant(1.0, 0.04, Eigen::Vector2d(0.07, 0.11), s), lifeins::SingularMatrixError);
}

TEST(XiAlpha, TooFewDriversRejected) {
    // N = 2 assets on one Brownian motion: sigma sigma^T has rank 1
    EXPECT_THROW(MarketModel::constant(1.0, 0.04, Eigen::Vector2d(0.07, 0.11), Eigen::Vector2d(0.2, 0.3)),
                 lifeins::SingularMatrixError);
}

TEST(SigmaQuadratic, ScalarCase) { EXPECT_NEAR(scalar().sigma_quadratic(0.0), 0.01125, 1e-16); }

TEST(SigmaQuadratic, ZeroPremium) { EXPECT_EQ(scalar(0.04).sigma_quadratic(0.0), 0.0); }

TEST(SigmaQuadratic, ReferenceEqualsHalfAlphaXiAlpha) {
    const MarketModel m = reference();
    EXPECT_LT(rel_err(m.sigma_quadratic(0.0), oracle::half_alpha_xi_alpha(m, 0.0)), 1e-12);
    EXPECT_LT(rel_err(m.sigma_quadratic(0.0), oracle::Sigma), 1e-12);
}

TEST(SigmaQuadratic, IdentityOnRandomMarkets) {
    std::mt19937_64 gen(20240917);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const int m = n + (trial / 4) % 3;
        const MarketModel market = oracle::random_market(gen, n, m);
        const lifeins::MarketAlgebra alg = market.algebra(1.0);
        EXPECT_LT(rel_err(alg.Sigma, oracle::half_alpha_xi_alpha(market, 1.0)), 1e-12)
            << "trial " << trial << " condition " << market.max_condition_number();
        EXPECT_GE(alg.Sigma, 0.0);
        EXPECT_LT((alg.xi - alg.xi.transpose()).norm(), 1e-10 * alg.xi.norm());
        EXPECT_EQ(alg.xi.llt().info(), Eigen::Success);
    }
}

TEST(MarketPriceOfRisk, ScalarCase) { EXPECT_NEAR(scalar().market_price_of_risk(0.0)[0], 0.15, 1e-15); }

TEST(MarketPriceOfRisk, ZeroPremium) { EXPECT_EQ(scalar(0.04).market_price_of_risk(0.0).norm(), 0.0); }

TEST(MarketPriceOfRisk, ReferenceMatchesMatrixProduct) {
    const Eigen::VectorXd pi = reference().market_price_of_risk(0.0);
    EXPECT_LT(rel_err(pi[0], oracle::price_of_risk_1), 1e-12);
    EXPECT_LT(rel_err(pi[1], oracle::price_of_risk_2), 1e-12);
}

TEST(MarketPriceOfRisk, LeastNormSolutionWithExtraDrivers) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const MarketModel m = oracle::random_market(gen, 2, 4);
        const Eigen::VectorXd pi = m.market_price_of_risk(0.0);
        const Eigen::MatrixXd s = m.volatility(0.0);
        const Eigen::VectorXd alpha = m.risk_premium(0.0);
        EXPECT_LT((s * pi - alpha).norm(), 1e-10 * alpha.norm());
        // least norm: pi lies in the row space of sigma
        const Eigen::VectorXd ls = s.completeOrthogonalDecomposition().solve(alpha);
        EXPECT_LT((pi - ls).norm(), 1e-10 * ls.norm());
    }
}

TEST(MarketAlgebra, DriverPermutationInvariance) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const MarketModel m = oracle::random_market(gen, 3, 3);
        Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
        perm.indices() << 2, 0, 1;
        const Eigen::MatrixXd permuted = m.volatility(0.0) * perm;
        const MarketModel mp = MarketModel::constant(5.0, 0.03, m.appreciation(0.0), permuted);
        EXPECT_LT((mp.xi_alpha(0.0) - m.xi_alpha(0.0)).norm(), 1e-12 * m.xi_alpha(0.0).norm());
        EXPECT_LT(rel_err(mp.sigma_quadratic(0.0), m.sigma_quadratic(0.0)), 1e-12);
    }
}

TEST(MarketAlgebra, DoublingVolatility) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const MarketModel m = oracle::random_market(gen, 2, 2);
        const MarketModel m2 = MarketModel::constant(5.0, 0.03, m.appreciation(0.0), 2.0 * m.volatility(0.0));
        EXPECT_LT((4.0 * m2.xi_alpha(0.0) - m.xi_alpha(0.0)).norm(), 1e-12 * m.xi_alpha(0.0).norm());
        EXPECT_LT(rel_err(4.0 * m2.sigma_quadratic(0.0), m.sigma_quadratic(0.0)), 1e-12);
    }
}

TEST(MarketModel, TimeVaryingCoefficients) {
    const Curve r = Curve::linear({0, 10}, {0.02, 0.06});
    const MarketModel m(10.0, r, {Curve::linear({0, 10}, {0.05, 0.09})}, {{Curve::constant(0.2)}});
    EXPECT_FALSE(m.is_constant());
    EXPECT_NEAR(m.rate(5.0), 0.04, 1e-16);
    EXPECT_NEAR(m.risk_premium(5.0)[0], 0.03, 1e-16);
    EXPECT_NEAR(m.xi_alpha(5.0)[0], 0.75, 1e-14);
}

TEST(MarketModel, InvalidInputsRejected) {
    EXPECT_THROW(MarketModel::constant(10.0, 0.0, Eigen::VectorXd::Constant(1, 0.05), Eigen::MatrixXd::Constant(1, 1, 0.2)),
                 lifeins::InputError);
    EXPECT_THROW(MarketModel::constant(0.0, 0.04, Eigen::VectorXd::Constant(1, 0.05), Eigen::MatrixXd::Constant(1, 1, 0.2)),
                 lifeins::InputError);
    EXPECT_THROW(MarketModel::constant(10.0, 0.04, Eigen::Vector2d(0.05, 0.06), Eigen::MatrixXd::Constant(1, 1, 0.2)),
                 lifeins::InputError);
    // rate curve that does not cover the horizon
    EXPECT_THROW(MarketModel(10.0, Curve::linear({0, 5}, {0.03, 0.04}), {Curve::constant(0.06)}, {{Curve::constant(0.2)}}),
                 lifeins::InputError);
    // rate that turns negative at an interior knot
    EXPECT_THROW(MarketModel(10.0, Curve::linear({0, 5, 10}, {0.03, -0.01, 0.04}), {Curve::constant(0.06)},
                             {{Curve::constant(0.2)}}),
                 lifeins::InputError);
}

TEST(MarketModel, ConditionNumberReported) {
    EXPECT_NEAR(MarketModel::constant(1.0, 0.04, Eigen::Vector2d(0.07, 0.11), Eigen::Matrix2d::Identity()).max_condition_number(),
                1.0, 1e-12);
    EXPECT_GT(reference().max_condition_number(), 1.0);
}

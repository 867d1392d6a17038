#pragma once

#include <Eigen/Dense>

namespace lifeins::numerics {

inline constexpr double kMaxConditionNumber = 1e12;

/// Cholesky factorisation of a symmetric positive-definite matrix with a
/// spectral condition-number guard.
class SpdFactor {
public:
    /// Throws SingularMatrixError if A is not symmetric, not positive definite,
    /// or has condition number above max_condition.
    explicit SpdFactor(const Eigen::MatrixXd& A, double max_condition = kMaxConditionNumber);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd inverse() const;
    double condition_number() const noexcept { return condition_; }

private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double condition_ = 1.0;
};

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs);

/// True iff -A admits a Cholesky factorisation (A symmetric negative definite).
bool is_negative_definite(const Eigen::MatrixXd& A);

}  // namespace lifeins::numerics

#include "lifeins/numerics/linalg.hpp"

#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins::numerics {

SpdFactor::SpdFactor(const Eigen::MatrixXd& A, double max_condition) {
    if (A.rows() != A.cols() || A.rows() == 0) throw SingularMatrixError("SPD solve needs a non-empty square matrix");
    if (!A.allFinite()) throw SingularMatrixError("matrix has non-finite entries");
    const double scale = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
        throw SingularMatrixError("matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw SingularMatrixError("matrix is not positive definite");
    condition_ = hi / lo;
    if (condition_ > max_condition) {
        std::ostringstream os;
        os << "matrix condition number " << condition_ << " exceeds " << max_condition;
        throw SingularMatrixError(os.str());
    }
    llt_.compute(A);
    if (llt_.info() != Eigen::Success) throw SingularMatrixError("Cholesky factorisation failed");
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != llt_.rows()) throw SingularMatrixError("right-hand side has wrong dimension");
    return llt_.solve(rhs);
}

Eigen::MatrixXd SpdFactor::inverse() const {
    return llt_.solve(Eigen::MatrixXd::Identity(llt_.rows(), llt_.cols()));
}

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
    return SpdFactor(A).solve(rhs);
}

bool is_negative_definite(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || !A.allFinite()) return false;
    Eigen::LLT<Eigen::MatrixXd> llt(-A);
    return llt.info() == Eigen::Success;
}

}  // namespace lifeins::numerics

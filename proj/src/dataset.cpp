#include "orthantpath/dataset.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace orthantpath {

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, bool centered, double scale_factor)
    : x_(std::move(x)), y_(std::move(y)), centered_(centered), scale_factor_(scale_factor) {
    if (x_.rows() < 1 || x_.cols() < 1) {
        throw DimensionMismatch("dataset needs at least one row and one column");
    }
    if (x_.rows() != y_.size()) {
        throw DimensionMismatch("X row count and Y length differ");
    }
    if (!(scale_factor_ > 0.0)) {
        throw std::invalid_argument("scale factor must be positive");
    }
    if (centered_) {
        for (Eigen::Index j = 0; j < x_.cols(); ++j) {
            double tol = 1e-10 * std::max(1.0, x_.col(j).cwiseAbs().maxCoeff());
            if (std::abs(x_.col(j).mean()) > tol) {
                throw std::invalid_argument("dataset flagged centered but a column mean is nonzero");
            }
        }
        double ytol = 1e-10 * std::max(1.0, y_.cwiseAbs().maxCoeff());
        if (std::abs(y_.mean()) > ytol) {
            throw std::invalid_argument("dataset flagged centered but the response mean is nonzero");
        }
    }
    Eigen::MatrixXd gram = x_.transpose() * x_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw RankDeficient("eigenvalue check on XtX failed");
    }
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * hi)) {
        throw RankDeficient("design matrix has numerically dependent columns");
    }
    yty_ = y_.squaredNorm();
}

GramMask GramMask::from(const Dataset& data) {
    GramMask gm;
    gm.gram = data.x().transpose() * data.x();
    gm.xty = data.x().transpose() * data.y();
    return gm;
}

}  // namespace orthantpath

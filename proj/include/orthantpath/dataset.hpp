#pragma once

#include <Eigen/Dense>

#include "orthantpath/errors.hpp"

namespace orthantpath {

// Design matrix and response, with provenance flags for centering/scaling.
// Construction runs the rank check: the smallest eigenvalue of XtX must be
// at least 1e-12 times the largest.
class Dataset {
public:
    Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, bool centered = true,
            double scale_factor = 1.0);

    const Eigen::MatrixXd& x() const { return x_; }
    const Eigen::VectorXd& y() const { return y_; }
    bool centered() const { return centered_; }
    double scale_factor() const { return scale_factor_; }

    Eigen::Index n() const { return x_.rows(); }
    Eigen::Index p() const { return x_.cols(); }
    double yty() const { return yty_; }

private:
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    bool centered_;
    double scale_factor_;
    double yty_;
};

// XtX and XtY, computed once per fit and shared by all path steps.
struct GramMask {
    Eigen::MatrixXd gram;
    Eigen::VectorXd xty;

    static GramMask from(const Dataset& data);
};

}  // namespace orthantpath

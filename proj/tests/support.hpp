#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "orthantpath/dataset.hpp"

namespace testsupport {

// Small centered 7x3 design with integer entries; every fixture value in the
// test suite (breakpoints, criteria, candidate lambdas) was derived from this
// dataset with exact arithmetic or a frozen high-precision reference run.
inline Eigen::MatrixXd design_a() {
    Eigen::MatrixXd x(7, 3);
    x << 0, 0, -1,
        -1, 1, 0,
        0, -1, -1,
        -1, 0, 0,
        -1, 1, 0,
        -1, -1, -1,
        4, 0, 3;
    return x;
}

inline Eigen::VectorXd response_a() {
    Eigen::VectorXd y(7);
    y << 1, 1, 0, -1, 1, 1, -3;
    return y;
}

inline orthantpath::Dataset dataset_a() { return {design_a(), response_a()}; }

// Companion 6x3 design used for the shrink-candidate screening cases.
inline Eigen::MatrixXd design_b() {
    Eigen::MatrixXd x(6, 3);
    x << -1, 1, 0,
        -1, 1, -1,
        0, 0, -1,
        0, 1, -1,
        1, -1, 1,
        1, -2, 2;
    return x;
}

inline Eigen::VectorXd response_b() {
    Eigen::VectorXd y(6);
    y << 1, 1, 0, -1, 0, -1;
    return y;
}

inline orthantpath::Dataset dataset_b() { return {design_b(), response_b()}; }

// One-predictor problem: gram 20, XtY -14, so the whole path is available in
// closed form: beta(lambda) = (-14 + lambda) / 20 up to lambda_max = 14.
inline orthantpath::Dataset dataset_scalar() {
    return {design_a().col(0), response_a()};
}

inline void center_columns(Eigen::MatrixXd& x, Eigen::VectorXd& y) {
    x.rowwise() -= x.colwise().mean();
    y.array() -= y.mean();
}

// Well-conditioned random regression problem; resamples until the gram
// matrix has relative smallest eigenvalue above 1e-6.
inline orthantpath::Dataset random_dataset(std::mt19937& rng, int n, int p) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Eigen::MatrixXd x(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) x(i, j) = gauss(rng);
        Eigen::VectorXd beta(p);
        for (int j = 0; j < p; ++j) beta[j] = (j % 2 == 0) ? 1.5 : -2.0;
        Eigen::VectorXd y = x * beta;
        for (int i = 0; i < n; ++i) y[i] += 0.5 * gauss(rng);
        center_columns(x, y);
        Eigen::MatrixXd g = x.transpose() * x;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        double lo = es.eigenvalues().minCoeff();
        double hi = es.eigenvalues().maxCoeff();
        if (lo > 1e-6 * hi) return {std::move(x), std::move(y)};
    }
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Largest violation of the subgradient optimality conditions at (beta, c):
// active coordinates need gradient + penalty slope exactly zero, inactive
// ones need the gradient inside the penalty interval.
inline double lasso_stationarity_gap(const orthantpath::GramMask& gm,
                                     const orthantpath::OrthantSign& c,
                                     const Eigen::VectorXd& beta, double lambda,
                                     const Eigen::VectorXd& w) {
    Eigen::VectorXd g = gm.gram * beta - gm.xty;
    double gap = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (c[i] != 0) {
            gap = std::max(gap, std::abs(g[i] + lambda * w[i] * c[i]));
        } else {
            gap = std::max(gap, std::abs(g[i]) - lambda * w[i]);
        }
    }
    return gap;
}

inline double enet_stationarity_gap(const orthantpath::GramMask& gm,
                                    const orthantpath::OrthantSign& c,
                                    const Eigen::VectorXd& beta, double lambda,
                                    double alpha) {
    Eigen::VectorXd g = gm.gram * beta - gm.xty;
    double gap = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (c[i] != 0) {
            gap = std::max(gap,
                           std::abs(g[i] + lambda * (1.0 - alpha) * beta[i] + alpha * lambda * c[i]));
        } else {
            gap = std::max(gap, std::abs(g[i]) - alpha * lambda);
        }
    }
    return gap;
}

}  // namespace testsupport

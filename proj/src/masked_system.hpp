#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

#include "orthantpath/errors.hpp"
#include "orthantpath/orthant.hpp"

namespace orthantpath::detail {

// Factorization of the active block of S = C*gram*C (+ ridge on the
// diagonal), solving S- * rhs without materializing the p x p inverse:
// S-_act = D * A^-1 * D with A the unsigned active submatrix and D the
// active signs.
class MaskedSystem {
public:
    MaskedSystem(const Eigen::MatrixXd& gram, const OrthantSign& c, double ridge)
        : p_(gram.rows()), act_(c.active()) {
        if (gram.cols() != p_) throw DimensionMismatch("gram matrix must be square");
        if (c.size() != p_) throw DimensionMismatch("sign vector length and gram size differ");
        const Eigen::Index m = static_cast<Eigen::Index>(act_.size());
        signs_.resize(m);
        Eigen::MatrixXd sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            signs_[a] = c[act_[static_cast<std::size_t>(a)]];
            for (Eigen::Index b = 0; b < m; ++b) {
                sub(a, b) = gram(act_[static_cast<std::size_t>(a)],
                                 act_[static_cast<std::size_t>(b)]);
            }
            sub(a, a) += ridge;
        }
        if (m > 0) {
            llt_.compute(sub);
            if (llt_.info() != Eigen::Success) {
                throw SingularSubmatrix("active submatrix is not positive definite");
            }
        }
    }

    Eigen::Index active_count() const { return static_cast<Eigen::Index>(act_.size()); }

    // S- * rhs; exact zeros at zero-sign coordinates.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(p_);
        const Eigen::Index m = active_count();
        if (m == 0) return out;
        Eigen::VectorXd t(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            t[a] = signs_[a] * rhs[act_[static_cast<std::size_t>(a)]];
        }
        Eigen::VectorXd u = llt_.solve(t);
        for (Eigen::Index a = 0; a < m; ++a) {
            out[act_[static_cast<std::size_t>(a)]] = signs_[a] * u[a];
        }
        return out;
    }

private:
    Eigen::Index p_;
    std::vector<Eigen::Index> act_;
    Eigen::VectorXi signs_{};
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline double tau_sign_for(const Eigen::VectorXd& xty) {
    return 1e-9 * std::max(1.0, xty.size() ? xty.cwiseAbs().maxCoeff() : 0.0);
}

// (1/2)*||Y - X*beta||^2 from gram quantities.
inline double half_rss_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty, double yty,
                            const Eigen::VectorXd& beta) {
    return 0.5 * (yty - 2.0 * beta.dot(xty) + beta.dot(gram * beta));
}

}  // namespace orthantpath::detail

#include "orthantpath/linalg.hpp"

#include <Eigen/Cholesky>

namespace orthantpath {

namespace {

Eigen::MatrixXd masked_inverse_impl(const Eigen::MatrixXd& gram, const OrthantSign& c,
                                    double ridge) {
    const Eigen::Index p = gram.rows();
    if (gram.cols() != p) throw DimensionMismatch("gram matrix must be square");
    if (c.size() != p) throw DimensionMismatch("sign vector length and gram size differ");

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
    const std::vector<Eigen::Index> act = c.active();
    const Eigen::Index m = static_cast<Eigen::Index>(act.size());
    if (m == 0) return out;

    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            sub(a, b) = gram(act[static_cast<std::size_t>(a)], act[static_cast<std::size_t>(b)]);
        }
        sub(a, a) += ridge;
    }

    Eigen::LLT<Eigen::MatrixXd> llt(sub);
    if (llt.info() != Eigen::Success) {
        throw SingularSubmatrix("active submatrix is not positive definite");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m, m));

    for (Eigen::Index a = 0; a < m; ++a) {
        const Eigen::Index ia = act[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < m; ++b) {
            const Eigen::Index ib = act[static_cast<std::size_t>(b)];
            out(ia, ib) = c[ia] * inv(a, b) * c[ib];
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXd masked_pseudo_inverse(const Eigen::MatrixXd& gram, const OrthantSign& c) {
    return masked_inverse_impl(gram, c, 0.0);
}

Eigen::MatrixXd masked_pseudo_inverse_ridge(const Eigen::MatrixXd& gram, const OrthantSign& c,
                                            double lambda, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidAlpha("alpha must be in (0, 1]");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("lambda must be nonnegative");
    }
    return masked_inverse_impl(gram, c, lambda * (1.0 - alpha));
}

}  // namespace orthantpath

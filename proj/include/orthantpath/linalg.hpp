#pragma once

#include <Eigen/Dense>

#include "orthantpath/orthant.hpp"

namespace orthantpath {

// Generalized inverse S- of S = C*gram*C: zero outside the active block, the
// active block is the sign-conjugated inverse of the unsigned active
// submatrix. Satisfies S*S- = S-*S = C^2 and the Moore-Penrose identities.
Eigen::MatrixXd masked_pseudo_inverse(const Eigen::MatrixXd& gram, const OrthantSign& c);

// Elastic-net variant for S(lambda) = C*gram*C + lambda*(1-alpha)*C^2.
// Reduces to masked_pseudo_inverse when alpha = 1 or lambda = 0.
Eigen::MatrixXd masked_pseudo_inverse_ridge(const Eigen::MatrixXd& gram, const OrthantSign& c,
                                            double lambda, double alpha);

}  // namespace orthantpath

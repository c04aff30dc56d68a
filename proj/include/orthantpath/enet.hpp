#pragma once

#include <Eigen/Dense>
#include <optional>

#include "orthantpath/dataset.hpp"
#include "orthantpath/path.hpp"

namespace orthantpath {

enum class RootSolver { Bisection, Secant };

struct EnetConfig {
    double alpha = 1.0;          // in (0, 1]
    double tol = 1e-8;           // absolute lambda tolerance for root solving
    RootSolver solver = RootSolver::Bisection;
    int max_iters = 200;

    EnetConfig() = default;
    EnetConfig(double a, double t = 1e-8, RootSolver s = RootSolver::Bisection,
               int iters = 200);
};

// C^2*u = S(lambda)-*(C*XtY - alpha*lambda*C^2*1).
Eigen::VectorXd c2u_enet(const OrthantSign& c, double lambda, const GramMask& gm,
                         const EnetConfig& cfg);

Eigen::VectorXd beta_hat_enet(const OrthantSign& c, double lambda, const GramMask& gm,
                              const EnetConfig& cfg);

// (1/2)*||Y - X*beta||^2 + lambda*alpha*||beta||_1 + lambda*(1-alpha)/2*||beta||^2
double criterion_E(const Dataset& data, double lambda, double alpha,
                   const Eigen::VectorXd& beta);

// f_i(lambda) = (C^2*u(lambda))_i; a root is a candidate orthant-exit lambda
// for coordinate i. Affine in lambda when alpha = 1.
double breakpoint_function(const OrthantSign& c, Eigen::Index i, double lambda,
                           const GramMask& gm, const EnetConfig& cfg);

// Root of f_i over (lambda_current, lambda_max]: first sign change on a
// coarse 64-point scan, refined by bisection (default) or secant with
// bisection fallback. Same screening as the lasso shrink step. Empty when
// f_i has no sign change over the bracket.
std::optional<ShrinkCandidate> solve_breakpoint(const OrthantSign& c, Eigen::Index i,
                                                double lambda_current, const GramMask& gm,
                                                double yty, const EnetConfig& cfg);

// Same move structure as lasso_path with solve_breakpoint replacing the
// closed-form step; terminates at lambda_max = max_i |XtY_i| / alpha.
RegPath enet_path(const Dataset& data, const EnetConfig& cfg, MoveLedger* ledger = nullptr);

double lambda_max_enet(const GramMask& gm, double alpha);

Eigen::VectorXd path_beta_at(const RegPath& path, double lambda, const GramMask& gm,
                             const EnetConfig& cfg);

}  // namespace orthantpath

#pragma once

#include <Eigen/Dense>
#include <optional>

#include "orthantpath/dataset.hpp"
#include "orthantpath/path.hpp"

namespace orthantpath {

// L1 penalty weights; all ones for the plain lasso.
struct PenaltyWeights {
    Eigen::VectorXd w;
    std::optional<double> gamma;  // set when derived from OLS magnitudes

    explicit PenaltyWeights(Eigen::VectorXd weights, std::optional<double> g = std::nullopt);
    static PenaltyWeights ones(Eigen::Index p);
};

Eigen::VectorXd ols_fit(const Dataset& data);

// C^2*u = S-*(C*XtY - lambda*C^2*w); exactly zero at zero-sign coordinates.
Eigen::VectorXd c2u_lasso(const OrthantSign& c, double lambda, const GramMask& gm,
                          const PenaltyWeights& w);

// beta = apply_sign(c, c2u_lasso(...)).
Eigen::VectorXd beta_hat_lasso(const OrthantSign& c, double lambda, const GramMask& gm,
                               const PenaltyWeights& w);

// (1/2)*||Y - X*beta||^2 + lambda * sum_j w_j*|beta_j|
double criterion_L(const Dataset& data, double lambda, const Eigen::VectorXd& beta,
                   const PenaltyWeights& w);

// Closed-form per-orthant optimal value; a degree-2 polynomial in lambda.
double criterion_Lhat(const OrthantSign& c, double lambda, const GramMask& gm, double yty,
                      const PenaltyWeights& w);

// Shrinkage step for coordinate i of orthant c_prime: lambda*_i =
// (S-*C*XtY)_i / (S-*C^2*w)_i, screened against the zero denominator,
// lambda*_i <= lambda_current, and negative entries of C^2*u at lambda*_i.
std::optional<ShrinkCandidate> shrink_step(const OrthantSign& c_prime, Eigen::Index i,
                                           double lambda_current, const GramMask& gm,
                                           double yty, const PenaltyWeights& w);

// Sequential shrink/reactivate path tracer. Starts at (0, OLS), ends at
// (lambda_max, 0). Candidate evaluations within a step run concurrently;
// the minimum-lambda reduction is deterministic. Pass a ledger to record
// every candidate evaluation with its verdict.
RegPath lasso_path(const Dataset& data, const PenaltyWeights& w, MoveLedger* ledger = nullptr);

// w_i = |ols_i|^(-gamma); ZeroOlsCoefficient if any |ols_i| < 1e-12.
PenaltyWeights adaptive_weights(const Dataset& data, double gamma);

double lambda_max_lasso(const GramMask& gm, const PenaltyWeights& w);

// Path position at any lambda: linear interpolation on the segment formula.
// Zero vector for lambda past the last breakpoint.
Eigen::VectorXd path_beta_at(const RegPath& path, double lambda, const GramMask& gm,
                             const PenaltyWeights& w);

}  // namespace orthantpath

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "orthantpath/orthant.hpp"

namespace orthantpath {

// One shrinkage evaluation: coordinate i of orthant c_prime driven to zero.
struct ShrinkCandidate {
    double lambda_hat = 0.0;
    Eigen::VectorXd beta_hat;
    double criterion = 0.0;
    OrthantSign orthant_from;   // the C' the shrink was evaluated in
    Eigen::Index coordinate = 0;  // i that was driven to zero
};

struct PathBreakpoint {
    double lambda = 0.0;
    Eigen::VectorXd beta;
    double criterion = 0.0;
    // Orthant traversed on the segment ending at this breakpoint; all-zero
    // for the first breakpoint, which has no predecessor segment.
    OrthantSign segment_orthant;
};

enum class Method { Lasso, AdaptiveLasso, ElasticNet };

struct RegPath {
    Method method = Method::Lasso;
    double alpha = 1.0;                  // elastic-net mixing; 1 for lasso
    std::optional<double> gamma;         // adaptive-weight provenance
    std::vector<PathBreakpoint> breakpoints;
};

// Instrumentation record for one candidate evaluation of the tracer.
enum class MoveVerdict {
    Accepted,
    RejectedNegative,     // negative entry in C^2*u at lambda_hat
    RejectedLambda,       // lambda_hat <= lambda_current
    RejectedNotMinimum,   // valid, but another candidate had smaller lambda_hat
    NoDenominator,        // lasso: (S-*C^2*w)_i == 0
    NoBracket,            // enet: no sign change over the bracket
};

struct MoveRecord {
    OrthantSign from;           // current C when the evaluation ran
    double lambda_current = 0.0;
    OrthantSign eval_orthant;   // C' the shrink was evaluated in
    Eigen::Index coordinate = 0;
    std::optional<double> lambda_hat;  // absent when no value was computable
    MoveVerdict verdict = MoveVerdict::NoDenominator;
};

using MoveLedger = std::vector<MoveRecord>;

}  // namespace orthantpath

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "orthantpath/dataset.hpp"
#include "orthantpath/enet.hpp"
#include "orthantpath/lasso.hpp"

namespace orthantpath {

// Strictly increasing grid within [0, lambda_max].
struct LambdaGrid {
    std::vector<double> values;

    LambdaGrid(std::vector<double> vals, double lambda_max);
};

struct OrthantFit {
    double lambda = 0.0;
    OrthantSign orthant;
    Eigen::VectorXd beta;
    double criterion = 0.0;
    bool valid = false;  // all C^2*u entries >= -tau_sign
};

// Which criterion the oracle minimizes per orthant.
struct OracleMode {
    enum class Kind { Lasso, Enet } kind = Kind::Lasso;
    PenaltyWeights weights = PenaltyWeights::ones(0);  // lasso mode
    EnetConfig cfg;                                    // enet mode

    static OracleMode lasso(PenaltyWeights w);
    static OracleMode enet(EnetConfig cfg);
};

inline constexpr Eigen::Index kOracleDefaultCap = 14;

// Exhaustive 3^p search for the valid criterion-minimizing orthant at one
// lambda. Ties (within 1e-12 relative of the minimum) broken by fewest
// nonzero signs, then lexicographic orthant order. OpenMP kernel; the
// _serial variant is the reference implementation kept for testing.
OrthantFit all_orthant_fit(const Dataset& data, double lambda, const OracleMode& mode,
                           Eigen::Index cap = kOracleDefaultCap);
OrthantFit all_orthant_fit_serial(const Dataset& data, double lambda, const OracleMode& mode,
                                  Eigen::Index cap = kOracleDefaultCap);

std::vector<OrthantFit> all_orthant_path(const Dataset& data, const LambdaGrid& grid,
                                         const OracleMode& mode,
                                         Eigen::Index cap = kOracleDefaultCap);
std::vector<OrthantFit> all_orthant_path_serial(const Dataset& data, const LambdaGrid& grid,
                                                const OracleMode& mode,
                                                Eigen::Index cap = kOracleDefaultCap);

struct OrthantMove {
    OrthantSign from;
    OrthantSign to;
    double lambda = 0.0;
    Eigen::Index coordinate = 0;
};

// Every shrink evaluation over all orthant/coordinate pairs, screened by
// lambda >= 0 and nonnegative C^2*u at the candidate lambda.
std::vector<OrthantMove> enumerate_valid_moves(const Dataset& data, const OracleMode& mode,
                                               Eigen::Index cap = kOracleDefaultCap);

}  // namespace orthantpath

#include "orthantpath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "masked_system.hpp"
#include "orthantpath/errors.hpp"

namespace orthantpath {

namespace {

std::int64_t pow3(Eigen::Index p) {
    std::int64_t t = 1;
    for (Eigen::Index i = 0; i < p; ++i) t *= 3;
    return t;
}

void check_cap(Eigen::Index p, Eigen::Index cap) {
    if (p > cap) {
        throw DimensionCap("column count " + std::to_string(p) +
                           " exceeds the all-orthant cap " + std::to_string(cap));
    }
}

void check_mode(const OracleMode& mode, Eigen::Index p) {
    if (mode.kind == OracleMode::Kind::Lasso && mode.weights.w.size() != p) {
        throw DimensionMismatch("penalty weight length and column count differ");
    }
}

Eigen::VectorXd mode_c2u(const OrthantSign& c, double lambda, const GramMask& gm,
                         const OracleMode& mode) {
    if (mode.kind == OracleMode::Kind::Lasso) {
        return c2u_lasso(c, lambda, gm, mode.weights);
    }
    return c2u_enet(c, lambda, gm, mode.cfg);
}

double mode_criterion(const GramMask& gm, double yty, double lambda,
                      const Eigen::VectorXd& beta, const OracleMode& mode) {
    const double half_rss = detail::half_rss_gram(gm.gram, gm.xty, yty, beta);
    if (mode.kind == OracleMode::Kind::Lasso) {
        return half_rss + lambda * mode.weights.w.dot(beta.cwiseAbs());
    }
    const double alpha = mode.cfg.alpha;
    return half_rss + lambda * alpha * beta.lpNorm<1>() +
           0.5 * lambda * (1.0 - alpha) * beta.squaredNorm();
}

// (criterion, valid) for one orthant; beta is left to the caller.
struct OrthantEval {
    double criterion = 0.0;
    bool valid = false;
};

OrthantEval eval_orthant(const OrthantSign& c, double lambda, const GramMask& gm, double yty,
                         double tau, const OracleMode& mode) {
    OrthantEval ev;
    const Eigen::VectorXd c2u = mode_c2u(c, lambda, gm, mode);
    for (Eigen::Index k = 0; k < c2u.size(); ++k) {
        if (c2u[k] < -tau) return ev;
    }
    ev.valid = true;
    ev.criterion = mode_criterion(gm, yty, lambda, apply_sign(c, c2u), mode);
    return ev;
}

// Exhaustive search in two order-independent passes: the exact minimum
// criterion over valid orthants, then the (fewest nonzero signs, lowest
// orthant index) winner among orthants within 1e-12 relative of it. Both
// reductions commute, so the threaded and serial results are identical.
OrthantFit fit_impl(const Dataset& data, double lambda, const OracleMode& mode,
                    Eigen::Index cap, bool parallel) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    check_cap(data.p(), cap);
    check_mode(mode, data.p());
    const GramMask gm = GramMask::from(data);
    const double yty = data.yty();
    const double tau = detail::tau_sign_for(gm.xty);
    const std::int64_t total = pow3(data.p());

    double best_crit = std::numeric_limits<double>::infinity();
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static) reduction(min : best_crit) if (parallel)
    for (std::int64_t k = 0; k < total; ++k) {
        try {
            const OrthantSign c =
                OrthantSign::from_index(static_cast<std::uint64_t>(k), data.p());
            const OrthantEval ev = eval_orthant(c, lambda, gm, yty, tau, mode);
            if (ev.valid && ev.criterion < best_crit) best_crit = ev.criterion;
        } catch (...) {
#pragma omp critical(orthantpath_oracle_fit)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    if (!std::isfinite(best_crit)) {
        throw NoValidCandidate("no orthant is valid at lambda " + std::to_string(lambda));
    }

    const double band = best_crit + 1e-12 * (1.0 + std::abs(best_crit));
    std::int64_t win_nnz = std::numeric_limits<std::int64_t>::max();
    std::int64_t win_k = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel if (parallel)
    {
        std::int64_t loc_nnz = std::numeric_limits<std::int64_t>::max();
        std::int64_t loc_k = std::numeric_limits<std::int64_t>::max();
#pragma omp for schedule(static) nowait
        for (std::int64_t k = 0; k < total; ++k) {
            try {
                const OrthantSign c =
                    OrthantSign::from_index(static_cast<std::uint64_t>(k), data.p());
                const std::int64_t nnz = c.nonzero_count();
                if (nnz > loc_nnz || (nnz == loc_nnz && k > loc_k)) continue;
                const OrthantEval ev = eval_orthant(c, lambda, gm, yty, tau, mode);
                if (!ev.valid || ev.criterion > band) continue;
                loc_nnz = nnz;
                loc_k = k;
            } catch (...) {
#pragma omp critical(orthantpath_oracle_fit)
                if (!err) err = std::current_exception();
            }
        }
#pragma omp critical(orthantpath_oracle_pick)
        if (loc_nnz < win_nnz || (loc_nnz == win_nnz && loc_k < win_k)) {
            win_nnz = loc_nnz;
            win_k = loc_k;
        }
    }
    if (err) std::rethrow_exception(err);

    OrthantFit fit;
    fit.lambda = lambda;
    fit.orthant = OrthantSign::from_index(static_cast<std::uint64_t>(win_k), data.p());
    const Eigen::VectorXd c2u = mode_c2u(fit.orthant, lambda, gm, mode);
    fit.beta = apply_sign(fit.orthant, c2u);
    fit.criterion = mode_criterion(gm, yty, lambda, fit.beta, mode);
    fit.valid = true;
    return fit;
}

}  // namespace

LambdaGrid::LambdaGrid(std::vector<double> vals, double lambda_max) : values(std::move(vals)) {
    if (values.empty()) throw std::invalid_argument("lambda grid is empty");
    double prev = -1.0;
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0 || v > lambda_max) {
            throw std::invalid_argument("lambda grid values must lie in [0, lambda_max]");
        }
        if (v <= prev) throw std::invalid_argument("lambda grid must be strictly increasing");
        prev = v;
    }
}

OracleMode OracleMode::lasso(PenaltyWeights w) {
    OracleMode m;
    m.kind = Kind::Lasso;
    m.weights = std::move(w);
    return m;
}

OracleMode OracleMode::enet(EnetConfig cfg) {
    OracleMode m;
    m.kind = Kind::Enet;
    m.cfg = cfg;
    return m;
}

OrthantFit all_orthant_fit(const Dataset& data, double lambda, const OracleMode& mode,
                           Eigen::Index cap) {
    return fit_impl(data, lambda, mode, cap, true);
}

OrthantFit all_orthant_fit_serial(const Dataset& data, double lambda, const OracleMode& mode,
                                  Eigen::Index cap) {
    return fit_impl(data, lambda, mode, cap, false);
}

std::vector<OrthantFit> all_orthant_path(const Dataset& data, const LambdaGrid& grid,
                                         const OracleMode& mode, Eigen::Index cap) {
    std::vector<OrthantFit> fits;
    fits.reserve(grid.values.size());
    for (double lambda : grid.values) {
        fits.push_back(all_orthant_fit(data, lambda, mode, cap));
    }
    return fits;
}

std::vector<OrthantFit> all_orthant_path_serial(const Dataset& data, const LambdaGrid& grid,
                                                const OracleMode& mode, Eigen::Index cap) {
    std::vector<OrthantFit> fits;
    fits.reserve(grid.values.size());
    for (double lambda : grid.values) {
        fits.push_back(all_orthant_fit_serial(data, lambda, mode, cap));
    }
    return fits;
}

std::vector<OrthantMove> enumerate_valid_moves(const Dataset& data, const OracleMode& mode,
                                               Eigen::Index cap) {
    check_cap(data.p(), cap);
    check_mode(mode, data.p());
    const GramMask gm = GramMask::from(data);
    const double yty = data.yty();
    const std::int64_t total = pow3(data.p());

    std::vector<OrthantMove> moves;
    constexpr std::int64_t kBlock = 8192;
    std::vector<std::vector<OrthantMove>> slots(
        static_cast<std::size_t>(std::min(kBlock, total)));
    for (std::int64_t base = 0; base < total; base += kBlock) {
        const std::int64_t stop = std::min(total, base + kBlock);
        for (auto& s : slots) s.clear();
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = base; k < stop; ++k) {
            try {
                const OrthantSign c =
                    OrthantSign::from_index(static_cast<std::uint64_t>(k), data.p());
                if (c.all_zero()) continue;
                std::vector<OrthantMove>& local = slots[static_cast<std::size_t>(k - base)];
                for (Eigen::Index i : c.active()) {
                    const std::optional<ShrinkCandidate> cand =
                        mode.kind == OracleMode::Kind::Lasso
                            ? shrink_step(c, i, 0.0, gm, yty, mode.weights)
                            : solve_breakpoint(c, i, 0.0, gm, yty, mode.cfg);
                    if (!cand) continue;
                    local.push_back({c, OrthantSign::sign_of(cand->beta_hat, 0.0),
                                     cand->lambda_hat, i});
                }
            } catch (...) {
#pragma omp critical(orthantpath_oracle_moves)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        for (std::int64_t k = base; k < stop; ++k) {
            auto& s = slots[static_cast<std::size_t>(k - base)];
            moves.insert(moves.end(), s.begin(), s.end());
        }
    }
    return moves;
}

}  // namespace orthantpath

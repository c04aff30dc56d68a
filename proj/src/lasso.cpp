#include "orthantpath/lasso.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "masked_system.hpp"
#include "orthantpath/errors.hpp"
#include "tracer.hpp"

namespace orthantpath {

namespace {

void check_weights(const GramMask& gm, const PenaltyWeights& w) {
    if (w.w.size() != gm.gram.rows()) {
        throw DimensionMismatch("penalty weight length and gram size differ");
    }
}

// C^2*w: penalty weights masked to the active coordinates.
Eigen::VectorXd masked_weights(const OrthantSign& c, const Eigen::VectorXd& w) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (c[k] != 0) out[k] = w[k];
    }
    return out;
}

struct OrthantSolve {
    Eigen::VectorXd s_xty;  // S- * C * XtY
    Eigen::VectorXd s_cw;   // S- * C^2 * w
};

OrthantSolve solve_orthant(const GramMask& gm, const OrthantSign& c, const PenaltyWeights& w) {
    detail::MaskedSystem sys(gm.gram, c, 0.0);
    return {sys.solve(apply_sign(c, gm.xty)), sys.solve(masked_weights(c, w.w))};
}

}  // namespace

PenaltyWeights::PenaltyWeights(Eigen::VectorXd weights, std::optional<double> g)
    : w(std::move(weights)), gamma(g) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] <= 0.0) {
            throw std::invalid_argument("penalty weights must be positive and finite");
        }
    }
}

PenaltyWeights PenaltyWeights::ones(Eigen::Index p) {
    return PenaltyWeights(Eigen::VectorXd::Ones(p));
}

Eigen::VectorXd ols_fit(const Dataset& data) {
    const GramMask gm = GramMask::from(data);
    Eigen::LLT<Eigen::MatrixXd> llt(gm.gram);
    if (llt.info() != Eigen::Success) {
        throw SingularSubmatrix("XtX is not positive definite");
    }
    return llt.solve(gm.xty);
}

Eigen::VectorXd c2u_lasso(const OrthantSign& c, double lambda, const GramMask& gm,
                          const PenaltyWeights& w) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    check_weights(gm, w);
    detail::MaskedSystem sys(gm.gram, c, 0.0);
    return sys.solve(apply_sign(c, gm.xty) - lambda * masked_weights(c, w.w));
}

Eigen::VectorXd beta_hat_lasso(const OrthantSign& c, double lambda, const GramMask& gm,
                               const PenaltyWeights& w) {
    return apply_sign(c, c2u_lasso(c, lambda, gm, w));
}

double criterion_L(const Dataset& data, double lambda, const Eigen::VectorXd& beta,
                   const PenaltyWeights& w) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (beta.size() != data.p()) {
        throw DimensionMismatch("beta length and column count differ");
    }
    if (w.w.size() != data.p()) {
        throw DimensionMismatch("penalty weight length and column count differ");
    }
    const double rss = (data.y() - data.x() * beta).squaredNorm();
    return 0.5 * rss + lambda * w.w.dot(beta.cwiseAbs());
}

double criterion_Lhat(const OrthantSign& c, double lambda, const GramMask& gm, double yty,
                      const PenaltyWeights& w) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    check_weights(gm, w);
    detail::MaskedSystem sys(gm.gram, c, 0.0);
    const Eigen::VectorXd cxty = apply_sign(c, gm.xty);
    const Eigen::VectorXd cw = masked_weights(c, w.w);
    const Eigen::VectorXd s_xty = sys.solve(cxty);
    const Eigen::VectorXd s_cw = sys.solve(cw);
    const double t1 = cxty.dot(s_xty);
    const double t2 = cw.dot(s_xty);
    const double t3 = cw.dot(s_cw);
    return 0.5 * (yty - t1) + lambda * t2 - 0.5 * lambda * lambda * t3;
}

std::optional<ShrinkCandidate> shrink_step(const OrthantSign& c_prime, Eigen::Index i,
                                           double lambda_current, const GramMask& gm,
                                           double yty, const PenaltyWeights& w) {
    check_weights(gm, w);
    if (i < 0 || i >= c_prime.size()) throw std::invalid_argument("coordinate out of range");
    if (c_prime[i] == 0) throw std::invalid_argument("coordinate to shrink must be active");
    const OrthantSolve sol = solve_orthant(gm, c_prime, w);
    if (sol.s_cw[i] == 0.0) return std::nullopt;
    const double ls = sol.s_xty[i] / sol.s_cw[i];
    if (!std::isfinite(ls)) return std::nullopt;
    const double tau = detail::tau_sign_for(gm.xty);
    Eigen::VectorXd c2u = sol.s_xty - ls * sol.s_cw;
    c2u[i] = 0.0;
    for (Eigen::Index k = 0; k < c2u.size(); ++k) {
        if (c2u[k] < -tau) return std::nullopt;
    }
    if (ls <= lambda_current + 1e-12 * (1.0 + lambda_current)) return std::nullopt;

    ShrinkCandidate cand;
    cand.lambda_hat = ls;
    Eigen::VectorXd beta = apply_sign(c_prime, c2u);
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        if (std::abs(beta[k]) <= tau) beta[k] = 0.0;
    }
    cand.criterion =
        detail::half_rss_gram(gm.gram, gm.xty, yty, beta) + ls * w.w.dot(beta.cwiseAbs());
    cand.beta_hat = std::move(beta);
    cand.orthant_from = c_prime;
    cand.coordinate = i;
    return cand;
}

RegPath lasso_path(const Dataset& data, const PenaltyWeights& w, MoveLedger* ledger) {
    const GramMask gm = GramMask::from(data);
    check_weights(gm, w);
    const Eigen::VectorXd ols = ols_fit(data);
    const OrthantSign c0 = OrthantSign::sign_of(ols, 0.0);
    const double tau = detail::tau_sign_for(gm.xty);

    // The closed-form step only needs the two solve vectors of the
    // evaluation orthant, so they are cached per orthant for the lifetime
    // of this call. An orthant revisited at a later step (or probed by
    // several reactivations within one step) reuses the factorization.
    std::unordered_map<std::string, OrthantSolve> memo;

    auto evaluate = [&](const std::vector<detail::TraceEntry>& entries, double,
                        std::vector<detail::RawEval>& raw) {
        std::vector<std::string> keys(entries.size());
        std::vector<std::pair<std::string, const OrthantSign*>> missing;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            keys[e] = entries[e].c_prime.str();
            if (memo.count(keys[e]) > 0) continue;
            bool queued = false;
            for (const auto& m : missing) {
                if (m.first == keys[e]) { queued = true; break; }
            }
            if (!queued) missing.emplace_back(keys[e], &entries[e].c_prime);
        }

        std::vector<OrthantSolve> solved(missing.size());
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(missing.size()); ++m) {
            try {
                solved[static_cast<std::size_t>(m)] =
                    solve_orthant(gm, *missing[static_cast<std::size_t>(m)].second, w);
            } catch (...) {
#pragma omp critical(orthantpath_lasso_solve)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        for (std::size_t m = 0; m < missing.size(); ++m) {
            memo.emplace(missing[m].first, std::move(solved[m]));
        }

        for (std::size_t e = 0; e < entries.size(); ++e) {
            const OrthantSolve& sol = memo.at(keys[e]);
            const Eigen::Index i = entries[e].i;
            if (sol.s_cw[i] == 0.0) continue;
            const double ls = sol.s_xty[i] / sol.s_cw[i];
            if (!std::isfinite(ls)) continue;
            raw[e].lambda_star = ls;
            raw[e].c2u = sol.s_xty - ls * sol.s_cw;
        }
    };

    auto criterion = [&](double lambda, const Eigen::VectorXd& beta) {
        return criterion_L(data, lambda, beta, w);
    };

    RegPath path;
    path.method = w.gamma ? Method::AdaptiveLasso : Method::Lasso;
    path.alpha = 1.0;
    path.gamma = w.gamma;
    path.breakpoints = detail::trace_path(c0, ols, tau, evaluate, criterion, ledger);
    return path;
}

PenaltyWeights adaptive_weights(const Dataset& data, double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0) {
        throw std::invalid_argument("gamma must be nonnegative");
    }
    const Eigen::VectorXd ols = ols_fit(data);
    Eigen::VectorXd w(ols.size());
    for (Eigen::Index i = 0; i < ols.size(); ++i) {
        const double mag = std::abs(ols[i]);
        if (mag < 1e-12) {
            throw ZeroOlsCoefficient("OLS coefficient " + std::to_string(i + 1) +
                                     " is zero; adaptive weights are undefined");
        }
        w[i] = std::pow(mag, -gamma);
    }
    return PenaltyWeights(std::move(w), gamma);
}

double lambda_max_lasso(const GramMask& gm, const PenaltyWeights& w) {
    check_weights(gm, w);
    double m = 0.0;
    for (Eigen::Index i = 0; i < gm.xty.size(); ++i) {
        m = std::max(m, std::abs(gm.xty[i]) / w.w[i]);
    }
    return m;
}

Eigen::VectorXd path_beta_at(const RegPath& path, double lambda, const GramMask& gm,
                             const PenaltyWeights& w) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (path.breakpoints.empty()) throw std::invalid_argument("path has no breakpoints");
    const Eigen::Index p = gm.xty.size();
    if (lambda >= path.breakpoints.back().lambda) return Eigen::VectorXd::Zero(p);
    for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
        if (lambda <= path.breakpoints[k].lambda) {
            return beta_hat_lasso(path.breakpoints[k].segment_orthant, lambda, gm, w);
        }
    }
    return Eigen::VectorXd::Zero(p);
}

}  // namespace orthantpath

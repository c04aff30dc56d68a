#include "orthantpath/enet.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "masked_system.hpp"
#include "orthantpath/errors.hpp"
#include "orthantpath/lasso.hpp"
#include "tracer.hpp"

namespace orthantpath {

namespace {

void check_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
        throw InvalidAlpha("alpha must be in (0, 1]");
    }
}

// Active block of one orthant, kept unsigned so the ridge term can be added
// per lambda without rebuilding the submatrix. With A(lambda) u =
// XtY_act - alpha*lambda*signs, the solution u is beta on the active set and
// C^2*u scatters as signs[k]*u[k].
struct ActiveSystem {
    std::vector<Eigen::Index> act;
    Eigen::VectorXd signs;
    Eigen::MatrixXd sub;
    Eigen::VectorXd xty_act;
    Eigen::Index p = 0;

    ActiveSystem(const GramMask& gm, const OrthantSign& c) : act(c.active()), p(gm.gram.rows()) {
        const Eigen::Index m = static_cast<Eigen::Index>(act.size());
        signs.resize(m);
        xty_act.resize(m);
        sub.resize(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            const Eigen::Index ia = act[static_cast<std::size_t>(a)];
            signs[a] = static_cast<double>(c[ia]);
            xty_act[a] = gm.xty[ia];
            for (Eigen::Index b = 0; b < m; ++b) {
                sub(a, b) = gm.gram(ia, act[static_cast<std::size_t>(b)]);
            }
        }
    }

    Eigen::VectorXd solve_u(double lambda, double alpha) const {
        Eigen::MatrixXd m = sub;
        m.diagonal().array() += lambda * (1.0 - alpha);
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            throw SingularSubmatrix("active submatrix is not positive definite");
        }
        return llt.solve(xty_act - (alpha * lambda) * signs);
    }

    Eigen::VectorXd scatter_c2u(const Eigen::VectorXd& u) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
        for (std::size_t k = 0; k < act.size(); ++k) {
            out[act[k]] = signs[static_cast<Eigen::Index>(k)] * u[static_cast<Eigen::Index>(k)];
        }
        return out;
    }
};

constexpr int kScanIntervals = 64;

// First sign change of f over [lo, hi] on a 64-interval scan, refined to
// cfg.tol. The secant solver keeps the bracket and alternates secant
// proposals with bisection steps, so the width halves at least every other
// iteration. Both solvers finish with one secant interpolation inside the
// final bracket, which makes affine f (alpha = 1) essentially exact.
template <class F>
std::optional<double> bracketed_root(F&& f, double lo, double hi, const EnetConfig& cfg) {
    double a = lo;
    double fa = f(a);
    if (fa == 0.0) return a;
    double b = 0.0;
    double fb = 0.0;
    bool found = false;
    for (int k = 1; k <= kScanIntervals; ++k) {
        const double t = lo + (hi - lo) * (static_cast<double>(k) / kScanIntervals);
        const double ft = f(t);
        if (ft == 0.0) return t;
        if ((fa > 0.0) != (ft > 0.0)) {
            b = t;
            fb = ft;
            found = true;
            break;
        }
        a = t;
        fa = ft;
    }
    if (!found) return std::nullopt;

    int iters = 0;
    while (b - a > cfg.tol) {
        if (iters >= cfg.max_iters) {
            throw ConvergenceFailure("root refinement did not reach tol within max_iters");
        }
        double x = 0.5 * (a + b);
        if (cfg.solver == RootSolver::Secant && (iters % 2 == 0) && fb != fa) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b) x = s;
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fa > 0.0) != (fx > 0.0)) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        ++iters;
    }
    if (fb != fa) {
        const double x = a - fa * (b - a) / (fb - fa);
        if (std::isfinite(x) && x >= a && x <= b) return x;
    }
    return 0.5 * (a + b);
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool ok = false;
};

// Scan window (lambda_current + delta, lambda_max*(1 + 1e-9)]. The left
// shift skips the root just crossed at lambda_current; the right extension
// keeps a root at exactly lambda_max strictly inside the window.
Bracket scan_window(double lambda_current, double lambda_max, const EnetConfig& cfg) {
    Bracket br;
    br.hi = lambda_max * (1.0 + 1e-9);
    if (br.hi <= lambda_current) return br;
    double delta = std::max(cfg.tol, 1e-12 * (1.0 + lambda_current));
    delta = std::min(delta, 0.25 * (br.hi - lambda_current));
    br.lo = lambda_current + delta;
    br.ok = br.lo < br.hi;
    return br;
}

double criterion_gram(const GramMask& gm, double yty, double lambda, double alpha,
                      const Eigen::VectorXd& beta) {
    return detail::half_rss_gram(gm.gram, gm.xty, yty, beta) +
           lambda * alpha * beta.lpNorm<1>() +
           0.5 * lambda * (1.0 - alpha) * beta.squaredNorm();
}

}  // namespace

EnetConfig::EnetConfig(double a, double t, RootSolver s, int iters)
    : alpha(a), tol(t), solver(s), max_iters(iters) {
    check_alpha(alpha);
    if (!std::isfinite(tol) || tol <= 0.0) {
        throw std::invalid_argument("tol must be positive");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("max_iters must be at least 1");
    }
}

Eigen::VectorXd c2u_enet(const OrthantSign& c, double lambda, const GramMask& gm,
                         const EnetConfig& cfg) {
    check_alpha(cfg.alpha);
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    detail::MaskedSystem sys(gm.gram, c, lambda * (1.0 - cfg.alpha));
    Eigen::VectorXd ones_mask = Eigen::VectorXd::Zero(gm.xty.size());
    for (Eigen::Index k = 0; k < gm.xty.size(); ++k) {
        if (c[k] != 0) ones_mask[k] = 1.0;
    }
    return sys.solve(apply_sign(c, gm.xty) - (cfg.alpha * lambda) * ones_mask);
}

Eigen::VectorXd beta_hat_enet(const OrthantSign& c, double lambda, const GramMask& gm,
                              const EnetConfig& cfg) {
    return apply_sign(c, c2u_enet(c, lambda, gm, cfg));
}

double criterion_E(const Dataset& data, double lambda, double alpha,
                   const Eigen::VectorXd& beta) {
    check_alpha(alpha);
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (beta.size() != data.p()) {
        throw DimensionMismatch("beta length and column count differ");
    }
    const double rss = (data.y() - data.x() * beta).squaredNorm();
    return 0.5 * rss + lambda * alpha * beta.lpNorm<1>() +
           0.5 * lambda * (1.0 - alpha) * beta.squaredNorm();
}

double breakpoint_function(const OrthantSign& c, Eigen::Index i, double lambda,
                           const GramMask& gm, const EnetConfig& cfg) {
    if (i < 0 || i >= c.size()) throw std::invalid_argument("coordinate out of range");
    if (c[i] == 0) throw std::invalid_argument("coordinate must be active");
    return c2u_enet(c, lambda, gm, cfg)[i];
}

std::optional<ShrinkCandidate> solve_breakpoint(const OrthantSign& c, Eigen::Index i,
                                                double lambda_current, const GramMask& gm,
                                                double yty, const EnetConfig& cfg) {
    check_alpha(cfg.alpha);
    if (i < 0 || i >= c.size()) throw std::invalid_argument("coordinate out of range");
    if (c[i] == 0) throw std::invalid_argument("coordinate to shrink must be active");
    if (lambda_current < 0.0) throw std::invalid_argument("lambda must be nonnegative");

    const double lmax = lambda_max_enet(gm, cfg.alpha);
    const Bracket br = scan_window(lambda_current, lmax, cfg);
    if (!br.ok) return std::nullopt;

    ActiveSystem sys(gm, c);
    std::size_t idx = 0;
    while (sys.act[idx] != i) ++idx;
    const double sgn = sys.signs[static_cast<Eigen::Index>(idx)];
    auto f = [&](double lam) {
        return sgn * sys.solve_u(lam, cfg.alpha)[static_cast<Eigen::Index>(idx)];
    };

    const std::optional<double> root = bracketed_root(f, br.lo, br.hi, cfg);
    if (!root) return std::nullopt;
    const double ls = std::min(*root, lmax);

    const double tau = detail::tau_sign_for(gm.xty);
    Eigen::VectorXd c2u = sys.scatter_c2u(sys.solve_u(ls, cfg.alpha));
    c2u[i] = 0.0;
    for (Eigen::Index k = 0; k < c2u.size(); ++k) {
        if (c2u[k] < -tau) return std::nullopt;
    }
    if (ls <= lambda_current + 1e-12 * (1.0 + lambda_current)) return std::nullopt;

    ShrinkCandidate cand;
    cand.lambda_hat = ls;
    Eigen::VectorXd beta = apply_sign(c, c2u);
    for (Eigen::Index k = 0; k < beta.size(); ++k) {
        if (std::abs(beta[k]) <= tau) beta[k] = 0.0;
    }
    cand.criterion = criterion_gram(gm, yty, ls, cfg.alpha, beta);
    cand.beta_hat = std::move(beta);
    cand.orthant_from = c;
    cand.coordinate = i;
    return cand;
}

RegPath enet_path(const Dataset& data, const EnetConfig& cfg, MoveLedger* ledger) {
    check_alpha(cfg.alpha);
    const GramMask gm = GramMask::from(data);
    const Eigen::VectorXd ols = ols_fit(data);
    const OrthantSign c0 = OrthantSign::sign_of(ols, 0.0);
    const double tau = detail::tau_sign_for(gm.xty);
    const double lmax = lambda_max_enet(gm, cfg.alpha);

    auto evaluate = [&](const std::vector<detail::TraceEntry>& entries, double lambda_c,
                        std::vector<detail::RawEval>& raw) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(entries.size()); ++e) {
            try {
                const detail::TraceEntry& ent = entries[static_cast<std::size_t>(e)];
                detail::RawEval& out = raw[static_cast<std::size_t>(e)];
                const Bracket br = scan_window(lambda_c, lmax, cfg);
                if (!br.ok) {
                    out.empty_kind = MoveVerdict::NoBracket;
                    continue;
                }
                ActiveSystem sys(gm, ent.c_prime);
                std::size_t idx = 0;
                while (sys.act[idx] != ent.i) ++idx;
                const double sgn = sys.signs[static_cast<Eigen::Index>(idx)];
                auto f = [&](double lam) {
                    return sgn * sys.solve_u(lam, cfg.alpha)[static_cast<Eigen::Index>(idx)];
                };
                const std::optional<double> root = bracketed_root(f, br.lo, br.hi, cfg);
                if (!root) {
                    out.empty_kind = MoveVerdict::NoBracket;
                    continue;
                }
                const double ls = std::min(*root, lmax);
                out.lambda_star = ls;
                out.c2u = sys.scatter_c2u(sys.solve_u(ls, cfg.alpha));
            } catch (...) {
#pragma omp critical(orthantpath_enet_solve)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    };

    auto criterion = [&](double lambda, const Eigen::VectorXd& beta) {
        return criterion_E(data, lambda, cfg.alpha, beta);
    };

    RegPath path;
    path.method = Method::ElasticNet;
    path.alpha = cfg.alpha;
    path.breakpoints = detail::trace_path(c0, ols, tau, evaluate, criterion, ledger);
    return path;
}

double lambda_max_enet(const GramMask& gm, double alpha) {
    check_alpha(alpha);
    if (gm.xty.size() == 0) return 0.0;
    return gm.xty.cwiseAbs().maxCoeff() / alpha;
}

Eigen::VectorXd path_beta_at(const RegPath& path, double lambda, const GramMask& gm,
                             const EnetConfig& cfg) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (path.breakpoints.empty()) throw std::invalid_argument("path has no breakpoints");
    const Eigen::Index p = gm.xty.size();
    if (lambda >= path.breakpoints.back().lambda) return Eigen::VectorXd::Zero(p);
    for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
        if (lambda <= path.breakpoints[k].lambda) {
            return beta_hat_enet(path.breakpoints[k].segment_orthant, lambda, gm, cfg);
        }
    }
    return Eigen::VectorXd::Zero(p);
}

}  // namespace orthantpath

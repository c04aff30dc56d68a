#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "orthantpath/errors.hpp"
#include "orthantpath/path.hpp"

namespace orthantpath::detail {

struct TraceEntry {
    OrthantSign c_prime;
    Eigen::Index i = 0;
    Eigen::Index reactivated = -1;  // coordinate flipped from 0, or -1 for a shrink move
};

// One raw shrink evaluation before screening. Absent lambda_star means the
// candidate value was not computable (zero denominator / no bracketed root);
// c2u is the solution at lambda_star otherwise.
struct RawEval {
    std::optional<double> lambda_star;
    Eigen::VectorXd c2u;
    MoveVerdict empty_kind = MoveVerdict::NoDenominator;
};

inline bool tied_lambda(double a, double b) {
    return std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b));
}

inline Eigen::Index zero_count(const Eigen::VectorXd& v) {
    Eigen::Index n = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) n += (v[i] == 0.0);
    return n;
}

// Candidate order under the tie-break rule: smaller lambda_hat wins; within
// a 1e-10 relative tie, more zeros in beta_hat, then lower coordinate index.
inline bool candidate_better(const ShrinkCandidate& a, const ShrinkCandidate& b) {
    if (!tied_lambda(a.lambda_hat, b.lambda_hat)) return a.lambda_hat < b.lambda_hat;
    const Eigen::Index za = zero_count(a.beta_hat);
    const Eigen::Index zb = zero_count(b.beta_hat);
    if (za != zb) return za > zb;
    return a.coordinate < b.coordinate;
}

// Shrink moves for every active coordinate of C; for every zero coordinate j
// both sign reactivations C', each shrunk over all active coordinates of C'.
inline std::vector<TraceEntry> step_entries(const OrthantSign& c) {
    std::vector<TraceEntry> entries;
    const Eigen::Index p = c.size();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (c[j] == 0) {
            for (int k : {-1, +1}) {
                const OrthantSign cp = c.with(j, k);
                for (Eigen::Index i : cp.active()) {
                    entries.push_back({cp, i, j});
                }
            }
        } else {
            entries.push_back({c, j, -1});
        }
    }
    return entries;
}

// Sequential tracer shared by the lasso and elastic-net paths. The evaluator
// fills one RawEval per entry (entries are independent; evaluation may run
// concurrently, results land in entry order). criterion(lambda, beta)
// supplies candidate and breakpoint criterion values.
template <class Evaluator, class CriterionFn>
std::vector<PathBreakpoint> trace_path(const OrthantSign& c0, const Eigen::VectorXd& beta0,
                                       double tau_sign, Evaluator&& evaluate,
                                       CriterionFn&& criterion, MoveLedger* ledger) {
    const Eigen::Index p = c0.size();
    std::vector<PathBreakpoint> bps;
    bps.push_back({0.0, beta0, criterion(0.0, beta0), OrthantSign::zeros(p)});

    OrthantSign c = c0;
    double lambda_c = 0.0;
    const double accept_bound = std::pow(3.0, static_cast<double>(p)) + 1.0;
    double accepted = 0.0;

    while (!c.all_zero()) {
        const std::vector<TraceEntry> entries = step_entries(c);
        std::vector<RawEval> raw(entries.size());
        evaluate(entries, lambda_c, raw);

        std::vector<std::optional<ShrinkCandidate>> valid(entries.size());
        std::vector<MoveVerdict> verdicts(entries.size());
        std::size_t best = entries.size();
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const TraceEntry& ent = entries[e];
            RawEval& r = raw[e];
            if (!r.lambda_star) {
                verdicts[e] = r.empty_kind;
                continue;
            }
            const double ls = *r.lambda_star;
            r.c2u[ent.i] = 0.0;
            bool negative = false;
            for (Eigen::Index k = 0; k < p; ++k) {
                if (r.c2u[k] < -tau_sign) { negative = true; break; }
            }
            if (negative) {
                verdicts[e] = MoveVerdict::RejectedNegative;
                continue;
            }
            if (ls <= lambda_c + 1e-12 * (1.0 + lambda_c)) {
                verdicts[e] = MoveVerdict::RejectedLambda;
                continue;
            }
            ShrinkCandidate cand;
            cand.lambda_hat = ls;
            Eigen::VectorXd beta = apply_sign(ent.c_prime, r.c2u);
            for (Eigen::Index k = 0; k < p; ++k) {
                if (std::abs(beta[k]) <= tau_sign) beta[k] = 0.0;
            }
            cand.beta_hat = std::move(beta);
            cand.criterion = criterion(ls, cand.beta_hat);
            cand.orthant_from = ent.c_prime;
            cand.coordinate = ent.i;
            verdicts[e] = MoveVerdict::RejectedNotMinimum;
            valid[e] = std::move(cand);
            if (best == entries.size() || candidate_better(*valid[e], *valid[best])) {
                best = e;
            }
        }

        if (best == entries.size()) {
            throw NoValidCandidate("no valid shrink or reactivation candidate at lambda " +
                                   std::to_string(lambda_c));
        }
        verdicts[best] = MoveVerdict::Accepted;

        if (ledger) {
            for (std::size_t e = 0; e < entries.size(); ++e) {
                ledger->push_back({c, lambda_c, entries[e].c_prime, entries[e].i,
                                   raw[e].lambda_star, verdicts[e]});
            }
        }

        const ShrinkCandidate& acc = *valid[best];
        const TraceEntry& ent = entries[best];
        // Segment ending at this breakpoint: the current orthant for a shrink
        // move and for a reactivation that re-zeroes its own coordinate (the
        // path only enters C' after the breakpoint); the reactivated C'
        // otherwise.
        OrthantSign segment = (ent.reactivated == -1 || ent.reactivated == ent.i)
                                  ? c
                                  : ent.c_prime;
        bps.push_back({acc.lambda_hat, acc.beta_hat, acc.criterion, std::move(segment)});

        lambda_c = acc.lambda_hat;
        c = OrthantSign::sign_of(acc.beta_hat, 0.0);
        accepted += 1.0;
        if (accepted > accept_bound) {
            throw NoValidCandidate("path did not terminate within the orthant-count bound");
        }
    }
    return bps;
}

}  // namespace orthantpath::detail

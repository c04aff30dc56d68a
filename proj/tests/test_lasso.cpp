#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "orthantpath/lasso.hpp"
#include "orthantpath/linalg.hpp"
#include "support.hpp"

using namespace orthantpath;
using testsupport::dataset_a;
using testsupport::dataset_b;
using testsupport::max_abs_diff;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

// Breakpoint table of the plain fit on dataset A, frozen from a
// high-precision reference run.
const double kLambdaA[6] = {0.0, 0.11764705882352941, 1.0 / 3.0, 1.4186046511627908,
                            5.4285714285714286, 14.0};
const Eigen::VectorXd kBetaA[6] = {
    vec3(0.11428571428571428, 0.8714285714285714, -1.1857142857142857),
    vec3(0.0, 0.7352941176470589, -1.0294117647058822),
    vec3(0.0, 2.0 / 3.0, -1.0),
    vec3(-0.37209302325581395, 0.0, -0.3953488372093023),
    vec3(-0.42857142857142855, 0.0, 0.0),
    vec3(0.0, 0.0, 0.0)};
const double kCritA[6] = {0.8428571, 1.0743945, 1.4444444, 2.7652785, 5.1632653, 7.0};
const char* kSegA[6] = {"000", "++-", "0+-", "-+-", "-0-", "-00"};

}  // namespace

TEST_CASE("least squares baseline") {
    CHECK(max_abs_diff(ols_fit(dataset_a()), kBetaA[0]) < 1e-12);
    CHECK(max_abs_diff(ols_fit(dataset_b()), vec3(-1.25, -1.0 / 3.0, 1.0 / 12.0)) < 1e-12);
}

TEST_CASE("per-orthant solution is affine in lambda with exact zeros off the active set") {
    Dataset data = dataset_a();
    GramMask gm = GramMask::from(data);
    PenaltyWeights w = PenaltyWeights::ones(3);

    OrthantSign c({-1, 1, -1});
    Eigen::VectorXd b0 = beta_hat_lasso(c, 0.0, gm, w);
    Eigen::VectorXd b1 = beta_hat_lasso(c, 1.0, gm, w);
    Eigen::VectorXd b2 = beta_hat_lasso(c, 2.0, gm, w);
    CHECK(max_abs_diff(b0, kBetaA[0]) < 1e-12);
    CHECK(max_abs_diff(b1, vec3(-8.0 / 35.0, 9.0 / 35.0, -22.0 / 35.0)) < 1e-12);
    CHECK(max_abs_diff(b2, b0 - 2.0 * (b0 - b1)) < 1e-11);

    Eigen::VectorXd c2u = c2u_lasso(OrthantSign({0, 1, -1}), 0.7, gm, w);
    CHECK(c2u[0] == 0.0);

    // Same numbers as the dense masked-inverse formula.
    std::mt19937 rng(3);
    for (int t = 0; t < 10; ++t) {
        OrthantSign cr = OrthantSign::from_index(rng() % 27, 3);
        double lam = 0.3 * static_cast<double>(t);
        Eigen::MatrixXd sm = masked_pseudo_inverse(gm.gram, cr);
        Eigen::VectorXd mask(3);
        for (Eigen::Index i = 0; i < 3; ++i) mask[i] = cr[i] * cr[i];
        Eigen::VectorXd dense = sm * (apply_sign(cr, gm.xty) - lam * mask);
        CHECK(max_abs_diff(c2u_lasso(cr, lam, gm, w), dense) < 1e-10);
    }
}

TEST_CASE("closed-form criterion agrees with the residual form") {
    Dataset data = dataset_a();
    GramMask gm = GramMask::from(data);
    PenaltyWeights w = PenaltyWeights::ones(3);

    // The closed form evaluates the per-orthant quadratic at its stationary
    // point, so it matches the residual form only while the masked solution
    // stays inside the orthant; each orthant is sampled within that range.
    struct Sample {
        const char* s;
        std::vector<double> lams;
    };
    const std::vector<Sample> samples = {{"0+-", {0.2, 1.0 / 3.0, 2.0}},
                                         {"-0-", {0.2, 1.0 / 3.0, 2.0}},
                                         {"-+-", {1.0 / 3.0, 0.7, 1.4}},
                                         {"++-", {0.0, 0.06, 0.117}}};
    for (const Sample& sample : samples) {
        std::vector<int> signs;
        for (const char ch : std::string(sample.s))
            signs.push_back(ch == '0' ? 0 : (ch == '+' ? 1 : -1));
        OrthantSign c(signs);
        for (double lam : sample.lams) {
            REQUIRE(c2u_lasso(c, lam, gm, w).minCoeff() >= -1e-12);
            Eigen::VectorXd beta = beta_hat_lasso(c, lam, gm, w);
            CHECK(criterion_L(data, lam, beta, w) ==
                  doctest::Approx(criterion_Lhat(c, lam, gm, data.yty(), w)).epsilon(1e-10));
        }
    }
    // Outside the range the residual form exceeds the quadratic, which is
    // what the negativity screen protects against.
    OrthantSign early({1, 1, -1});
    Eigen::VectorXd outside = beta_hat_lasso(early, 1.0, gm, w);
    CHECK(criterion_L(data, 1.0, outside, w) >
          criterion_Lhat(early, 1.0, gm, data.yty(), w) + 1e-6);
    CHECK(criterion_Lhat(OrthantSign({0, 1, -1}), 1.0 / 3.0, gm, data.yty(), w) ==
          doctest::Approx(1.4444444444444444).epsilon(1e-12));
    CHECK(criterion_Lhat(OrthantSign({-1, 0, -1}), 38.0 / 7.0, gm, data.yty(), w) ==
          doctest::Approx(5.163265306122449).epsilon(1e-12));
}

TEST_CASE("shrink candidates are screened") {
    Dataset data = dataset_b();
    GramMask gm = GramMask::from(data);
    PenaltyWeights w = PenaltyWeights::ones(3);
    OrthantSign c({-1, -1, 1});

    // Coordinate 0 reaches zero at a positive lambda but leaves another
    // coordinate negative there; coordinate 2 only reaches zero at a
    // negative lambda. Only coordinate 1 survives the screen.
    CHECK_FALSE(shrink_step(c, 0, 0.0, gm, data.yty(), w).has_value());
    CHECK_FALSE(shrink_step(c, 2, 0.0, gm, data.yty(), w).has_value());

    auto cand = shrink_step(c, 1, 0.0, gm, data.yty(), w);
    REQUIRE(cand.has_value());
    CHECK(cand->lambda_hat == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(max_abs_diff(cand->beta_hat, vec3(-0.85, 0.0, 0.15)) < 1e-12);
    CHECK(cand->coordinate == 1);
    CHECK(cand->orthant_from.str() == "--+");
    CHECK(cand->criterion ==
          doctest::Approx(criterion_L(data, cand->lambda_hat, cand->beta_hat, w)).epsilon(1e-12));

    // Terminal move of the dataset A path.
    Dataset da = dataset_a();
    GramMask gma = GramMask::from(da);
    auto last = shrink_step(OrthantSign({-1, 0, 0}), 0, 5.43, gma, da.yty(), w);
    REQUIRE(last.has_value());
    CHECK(last->lambda_hat == doctest::Approx(14.0).epsilon(1e-12));
    CHECK(last->beta_hat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(last->criterion == doctest::Approx(7.0).epsilon(1e-12));

    CHECK_THROWS_AS(shrink_step(OrthantSign({-1, 0, -1}), 1, 0.0, gma, da.yty(), w),
                    std::invalid_argument);
    CHECK_THROWS_AS(shrink_step(c, 5, 0.0, gm, data.yty(), w), std::invalid_argument);
}

TEST_CASE("breakpoint table on dataset A") {
    Dataset data = dataset_a();
    RegPath path = lasso_path(data, PenaltyWeights::ones(3));
    PenaltyWeights w = PenaltyWeights::ones(3);

    REQUIRE(path.breakpoints.size() == 6);
    CHECK(path.method == Method::Lasso);
    CHECK(path.alpha == 1.0);
    CHECK_FALSE(path.gamma.has_value());
    for (int k = 0; k < 6; ++k) {
        const PathBreakpoint& bp = path.breakpoints[static_cast<std::size_t>(k)];
        CHECK(bp.lambda == doctest::Approx(kLambdaA[k]).epsilon(1e-9));
        CHECK(max_abs_diff(bp.beta, kBetaA[k]) < 1e-9);
        CHECK(bp.criterion == doctest::Approx(kCritA[k]).epsilon(1e-6));
        CHECK(bp.criterion ==
              doctest::Approx(criterion_L(data, bp.lambda, bp.beta, w)).epsilon(1e-12));
        CHECK(bp.segment_orthant.str() == kSegA[k]);
    }
    CHECK(lambda_max_lasso(GramMask::from(data), w) == 14.0);
}

TEST_CASE("scalar problem has the closed-form path") {
    Dataset data = testsupport::dataset_scalar();
    GramMask gm = GramMask::from(data);
    PenaltyWeights w = PenaltyWeights::ones(1);
    RegPath path = lasso_path(data, w);

    REQUIRE(path.breakpoints.size() == 2);
    CHECK(path.breakpoints[0].lambda == 0.0);
    CHECK(path.breakpoints[0].beta[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(path.breakpoints[1].lambda == doctest::Approx(14.0).epsilon(1e-12));
    CHECK(path.breakpoints[1].beta[0] == 0.0);
    CHECK(path.breakpoints[1].segment_orthant.str() == "-");

    for (double lam : {0.0, 3.5, 7.0, 10.5, 13.999}) {
        Eigen::VectorXd b = path_beta_at(path, lam, gm, w);
        CHECK(b[0] == doctest::Approx((-14.0 + lam) / 20.0).epsilon(1e-12));
    }
    CHECK(path_beta_at(path, 14.0, gm, w)[0] == 0.0);
    CHECK(path_beta_at(path, 99.0, gm, w)[0] == 0.0);
}

TEST_CASE("weighted path with gamma 0.25") {
    Dataset data = dataset_a();
    PenaltyWeights w = adaptive_weights(data, 0.25);
    CHECK(w.w[0] == doctest::Approx(1.7198953141).epsilon(1e-9));
    REQUIRE(w.gamma.has_value());
    CHECK(*w.gamma == 0.25);

    RegPath path = lasso_path(data, w);
    REQUIRE(path.breakpoints.size() == 6);
    CHECK(path.method == Method::AdaptiveLasso);

    const double lam[6] = {0.0, 0.09594962751887289, 1.038733248855968, 2.0706191400882896,
                           3.0559569906835189, 11.478567653349934};
    const Eigen::VectorXd beta[6] = {kBetaA[0],
                                     vec3(0.0, 0.7414636914, -1.0325815095),
                                     vec3(0.0, 0.4342734164, -0.9060933951),
                                     vec3(-0.1135323398, 0.0, -0.6283157729),
                                     vec3(0.0, 0.0, -0.6726210686),
                                     vec3(0.0, 0.0, 0.0)};
    const double crit[6] = {0.8428571, 1.0343591, 2.4837663, 3.5750757, 4.2854854, 7.0};
    const char* seg[6] = {"000", "++-", "0+-", "-+-", "-0-", "00-"};
    for (int k = 0; k < 6; ++k) {
        const PathBreakpoint& bp = path.breakpoints[static_cast<std::size_t>(k)];
        CHECK(bp.lambda == doctest::Approx(lam[k]).epsilon(1e-9));
        CHECK(max_abs_diff(bp.beta, beta[k]) < 1e-9);
        CHECK(bp.criterion == doctest::Approx(crit[k]).epsilon(1e-6));
        CHECK(bp.segment_orthant.str() == seg[k]);
    }
    CHECK(lambda_max_lasso(GramMask::from(data), w) ==
          doctest::Approx(lam[5]).epsilon(1e-12));
}

TEST_CASE("weighted path with gamma 1") {
    Dataset data = dataset_a();
    RegPath path = lasso_path(data, adaptive_weights(data, 1.0));
    REQUIRE(path.breakpoints.size() == 4);

    const double lam[4] = {0.0, 0.033744686257479832, 2.1996166624073603, 13.042857142857144};
    const Eigen::VectorXd beta[4] = {kBetaA[0], vec3(0.0, 0.7608727347, -1.0411071746),
                                     vec3(0.0, 0.0, -0.7620751342), vec3(0.0, 0.0, 0.0)};
    const char* seg[4] = {"000", "++-", "0+-", "00-"};
    for (int k = 0; k < 4; ++k) {
        const PathBreakpoint& bp = path.breakpoints[static_cast<std::size_t>(k)];
        CHECK(bp.lambda == doctest::Approx(lam[k]).epsilon(1e-9));
        CHECK(max_abs_diff(bp.beta, beta[k]) < 1e-9);
        CHECK(bp.segment_orthant.str() == seg[k]);
    }
}

TEST_CASE("gamma zero reduces to the plain fit") {
    Dataset data = dataset_a();
    PenaltyWeights w0 = adaptive_weights(data, 0.0);
    CHECK((w0.w.array() == 1.0).all());
    RegPath weighted = lasso_path(data, w0);
    RegPath plain = lasso_path(data, PenaltyWeights::ones(3));
    REQUIRE(weighted.breakpoints.size() == plain.breakpoints.size());
    for (std::size_t k = 0; k < plain.breakpoints.size(); ++k) {
        CHECK(weighted.breakpoints[k].lambda == plain.breakpoints[k].lambda);
        CHECK((weighted.breakpoints[k].beta - plain.breakpoints[k].beta)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("weight construction failure modes") {
    Dataset data = dataset_a();
    CHECK_THROWS_AS(adaptive_weights(data, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(adaptive_weights(data, std::nan("")), std::invalid_argument);

    // Orthogonal design where the response lies entirely along the first
    // predictor: the second least-squares coefficient is exactly zero.
    Eigen::MatrixXd x(4, 2);
    x << 1, 1, -1, 1, 1, -1, -1, -1;
    Eigen::VectorXd y = x.col(0);
    Dataset degenerate(x, y);
    CHECK_THROWS_AS(adaptive_weights(degenerate, 0.5), ZeroOlsCoefficient);

    Eigen::VectorXd bad(3);
    bad << 1.0, 0.0, 1.0;
    CHECK_THROWS_AS((void)PenaltyWeights(bad), std::invalid_argument);
    bad[1] = -2.0;
    CHECK_THROWS_AS((void)PenaltyWeights(bad), std::invalid_argument);
    bad[1] = std::nan("");
    CHECK_THROWS_AS((void)PenaltyWeights(bad), std::invalid_argument);

    GramMask gm = GramMask::from(data);
    CHECK_THROWS_AS(c2u_lasso(OrthantSign::zeros(3), 1.0, gm, PenaltyWeights::ones(2)),
                    DimensionMismatch);
    CHECK_THROWS_AS(criterion_L(data, -1.0, Eigen::VectorXd::Zero(3), PenaltyWeights::ones(3)),
                    std::invalid_argument);
}

TEST_CASE("path position queries") {
    Dataset data = dataset_a();
    GramMask gm = GramMask::from(data);
    PenaltyWeights w = PenaltyWeights::ones(3);
    RegPath path = lasso_path(data, w);

    CHECK(max_abs_diff(path_beta_at(path, 0.0, gm, w), kBetaA[0]) < 1e-12);
    CHECK(max_abs_diff(path_beta_at(path, 1.0, gm, w),
                       vec3(-8.0 / 35.0, 9.0 / 35.0, -22.0 / 35.0)) < 1e-12);
    for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
        double lam = path.breakpoints[k].lambda;
        CHECK(max_abs_diff(path_beta_at(path, lam, gm, w), path.breakpoints[k].beta) < 1e-10);
        // Continuity across the breakpoint.
        CHECK(max_abs_diff(path_beta_at(path, lam - 1e-9, gm, w),
                           path_beta_at(path, std::min(lam + 1e-9, 14.0), gm, w)) < 1e-6);
    }
    CHECK(path_beta_at(path, 200.0, gm, w).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(path_beta_at(path, -0.1, gm, w), std::invalid_argument);
    CHECK_THROWS_AS(path_beta_at(RegPath{}, 1.0, gm, w), std::invalid_argument);
}

TEST_CASE("candidate ledger is complete, memoized, and consistent") {
    Dataset data = dataset_a();
    MoveLedger ledger;
    RegPath path = lasso_path(data, PenaltyWeights::ones(3), &ledger);

    CHECK(ledger.size() == 36);
    std::size_t accepted = 0;
    std::map<std::pair<std::string, Eigen::Index>, double> first_seen;
    for (const MoveRecord& rec : ledger) {
        if (rec.verdict == MoveVerdict::Accepted) ++accepted;
        if (!rec.lambda_hat.has_value()) continue;
        auto key = std::make_pair(rec.eval_orthant.str(), rec.coordinate);
        auto [it, fresh] = first_seen.emplace(key, *rec.lambda_hat);
        if (!fresh) CHECK(*rec.lambda_hat == it->second);  // memoized solve, bitwise equal
    }
    CHECK(accepted == path.breakpoints.size() - 1);

    // Each accepted candidate becomes the next breakpoint verbatim.
    std::size_t k = 1;
    for (const MoveRecord& rec : ledger) {
        if (rec.verdict != MoveVerdict::Accepted) continue;
        CHECK(*rec.lambda_hat == path.breakpoints[k].lambda);
        ++k;
    }
}

TEST_CASE("lambda and criterion are monotone along the path") {
    Dataset data = dataset_a();
    for (double gamma : {-1.0, 0.25, 1.0}) {
        PenaltyWeights w =
            gamma < 0 ? PenaltyWeights::ones(3) : adaptive_weights(data, gamma);
        RegPath path = lasso_path(data, w);
        for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
            CHECK(path.breakpoints[k].lambda > path.breakpoints[k - 1].lambda);
            CHECK(path.breakpoints[k].criterion >
                  path.breakpoints[k - 1].criterion - 1e-12);
        }
    }
}

TEST_CASE("stationarity holds along random paths") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 6 + static_cast<int>(rng() % 12);
        int p = 2 + static_cast<int>(rng() % 3);
        Dataset data = testsupport::random_dataset(rng, n, p);
        GramMask gm = GramMask::from(data);
        PenaltyWeights w = PenaltyWeights::ones(p);
        RegPath path = lasso_path(data, w);
        double scale = std::max(1.0, gm.xty.cwiseAbs().maxCoeff());

        for (std::size_t k = 1; k < path.breakpoints.size(); ++k) {
            double lo = path.breakpoints[k - 1].lambda;
            double hi = path.breakpoints[k].lambda;
            const OrthantSign& c = path.breakpoints[k].segment_orthant;
            for (int j = 0; j < 5; ++j) {
                double lam = lo + (hi - lo) * (j + 0.5) / 5.0;
                Eigen::VectorXd beta = beta_hat_lasso(c, lam, gm, w);
                CHECK(testsupport::lasso_stationarity_gap(gm, c, beta, lam, w.w) <
                      1e-7 * scale);
            }
        }
    }
}

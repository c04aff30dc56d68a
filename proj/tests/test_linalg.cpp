#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "orthantpath/linalg.hpp"
#include "support.hpp"

using namespace orthantpath;
using testsupport::dataset_a;

namespace {

Eigen::MatrixXd gram_a() { return GramMask::from(dataset_a()).gram; }

Eigen::MatrixXd masked(const Eigen::MatrixXd& g, const OrthantSign& c, double ridge) {
    Eigen::MatrixXd cm = Eigen::MatrixXd::Zero(g.rows(), g.rows());
    for (Eigen::Index i = 0; i < g.rows(); ++i) cm(i, i) = c[i];
    return cm * g * cm + ridge * cm * cm;
}

}  // namespace

TEST_CASE("masked inverse with one inactive coordinate matches the rational block") {
    Eigen::MatrixXd s = masked_pseudo_inverse(gram_a(), OrthantSign({0, 1, -1}));
    Eigen::MatrixXd expected(3, 3);
    expected << 0, 0, 0,
        0, 12, 2,
        0, 2, 4;
    expected /= 44.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ridge-shifted masked inverse matches the rational block") {
    Eigen::MatrixXd s =
        masked_pseudo_inverse_ridge(gram_a(), OrthantSign({-1, 0, -1}), 10.0, 0.5);
    Eigen::MatrixXd expected(3, 3);
    expected << 17, 0, -13,
        0, 0, 0,
        -13, 0, 25;
    expected /= 256.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fully active orthant inverts the whole gram matrix") {
    Eigen::MatrixXd g = gram_a();
    OrthantSign c({1, 1, 1});
    Eigen::MatrixXd s = masked_pseudo_inverse(g, c);
    CHECK((s * g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

    // Flipping signs conjugates by a diagonal sign matrix and must leave the
    // diagonal untouched.
    Eigen::MatrixXd sf = masked_pseudo_inverse(g, OrthantSign({-1, 1, -1}));
    CHECK(sf(0, 0) == doctest::Approx(s(0, 0)).epsilon(1e-14));
    CHECK(sf(0, 1) == doctest::Approx(-s(0, 1)).epsilon(1e-14));
    CHECK(sf(1, 2) == doctest::Approx(-s(1, 2)).epsilon(1e-14));
}

TEST_CASE("all-zero orthant yields the zero matrix") {
    Eigen::MatrixXd s = masked_pseudo_inverse(gram_a(), OrthantSign::zeros(3));
    CHECK(s.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generalized-inverse identities hold on random problems") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Dataset data = testsupport::random_dataset(rng, 12, 4);
        Eigen::MatrixXd g = GramMask::from(data).gram;
        OrthantSign c = OrthantSign::from_index(rng() % 81, 4);
        double lambda = (trial % 2 == 0) ? 0.0 : 3.7;
        double alpha = (trial % 2 == 0) ? 1.0 : 0.4;

        Eigen::MatrixXd sm = masked_pseudo_inverse_ridge(g, c, lambda, alpha);
        Eigen::MatrixXd s = masked(g, c, lambda * (1.0 - alpha));
        Eigen::MatrixXd c2 = Eigen::MatrixXd::Zero(4, 4);
        for (Eigen::Index i = 0; i < 4; ++i) c2(i, i) = c[i] * c[i];

        CHECK((s * sm * s - s).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((sm * s * sm - sm).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((s * sm - c2).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((sm * s - c2).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((sm - sm.transpose()).cwiseAbs().maxCoeff() < 1e-10);

        // Rows and columns outside the active set are exactly zero.
        for (Eigen::Index i = 0; i < 4; ++i) {
            if (c[i] != 0) continue;
            CHECK(sm.row(i).cwiseAbs().maxCoeff() == 0.0);
            CHECK(sm.col(i).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("ridge variant with alpha = 1 or lambda = 0 is bitwise the plain inverse") {
    Eigen::MatrixXd g = gram_a();
    OrthantSign c({-1, 1, 0});
    Eigen::MatrixXd plain = masked_pseudo_inverse(g, c);
    CHECK((masked_pseudo_inverse_ridge(g, c, 5.0, 1.0) - plain).cwiseAbs().maxCoeff() == 0.0);
    CHECK((masked_pseudo_inverse_ridge(g, c, 0.0, 0.3) - plain).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("input validation") {
    Eigen::MatrixXd g = gram_a();
    CHECK_THROWS_AS(masked_pseudo_inverse(Eigen::MatrixXd::Zero(3, 2), OrthantSign::zeros(3)),
                    DimensionMismatch);
    CHECK_THROWS_AS(masked_pseudo_inverse(g, OrthantSign::zeros(2)), DimensionMismatch);
    CHECK_THROWS_AS(masked_pseudo_inverse_ridge(g, OrthantSign::zeros(3), 1.0, 0.0),
                    InvalidAlpha);
    CHECK_THROWS_AS(masked_pseudo_inverse_ridge(g, OrthantSign::zeros(3), 1.0, 1.5),
                    InvalidAlpha);
    CHECK_THROWS_AS(masked_pseudo_inverse_ridge(g, OrthantSign::zeros(3), -1.0, 0.5),
                    std::invalid_argument);

    Eigen::MatrixXd singular(2, 2);
    singular << 1, 1, 1, 1;
    CHECK_THROWS_AS(masked_pseudo_inverse(singular, OrthantSign({1, 1})), SingularSubmatrix);
}

TEST_CASE("orthant sign vector helpers") {
    OrthantSign c({-1, 0, 1});
    CHECK(c.str() == "-0+");
    CHECK(c.nonzero_count() == 2);
    CHECK(c.active() == std::vector<Eigen::Index>{0, 2});
    CHECK(c.with(1, -1).str() == "--+");
    CHECK(OrthantSign::from_index(c.index(), 3) == c);

    // Mixed-radix order: index 0 is all-minus, the middle index all-zero.
    CHECK(OrthantSign::from_index(0, 3).str() == "---");
    CHECK(OrthantSign::from_index(13, 3).str() == "000");
    CHECK(OrthantSign::from_index(26, 3).str() == "+++");

    Eigen::VectorXd v(3);
    v << -2.0, 1e-12, 0.5;
    CHECK(OrthantSign::sign_of(v, 1e-9).str() == "-0+");
    CHECK(apply_sign(c, v)[0] == 2.0);
    CHECK(apply_sign(c, v)[1] == 0.0);

    CHECK_THROWS_AS(OrthantSign({2, 0}), DimensionMismatch);
}

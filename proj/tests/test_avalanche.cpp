#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cocyclelab/avalanche.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cocyclelab;

namespace {

Mat2 rotation(double theta) {
    Mat2 r;
    r(0, 0) = std::cos(theta);
    r(0, 1) = -std::sin(theta);
    r(1, 0) = std::sin(theta);
    r(1, 1) = std::cos(theta);
    return r;
}

Mat2 diag(double top, double bottom) {
    Mat2 d;
    d(0, 0) = top;
    d(1, 1) = bottom;
    return d;
}

// A = R(tr) diag(gamma, 0.5/gamma) R(ts), stored with log_scale = log gamma.
// |det| = 1/2, safely inside the hypothesis: a det pinned exactly at 1 is
// destroyed by fp noise ~1e-16 * gamma^2 in the stored near-rank-one matrix.
ScaledMat hinge_block(double gamma, double tr, double ts) {
    const Mat2 a = rotation(tr) * diag(1.0, 0.5 / (gamma * gamma)) * rotation(ts);
    return {a, std::log(gamma)};
}

std::vector<ScaledMat> random_suite(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> ug(std::log(static_cast<double>(n) + 1.0),
                                              std::log(1e6));
    std::uniform_real_distribution<double> ut(-1.0, 1.0);  // keeps |cos| >= cos(1) ~ 0.54
    std::vector<ScaledMat> suite;
    double tr_prev = 0.0;
    for (int j = 0; j < n; ++j) {
        const double gamma = std::exp(ug(rng));
        // pick ts so that the hinge angle against the previous block is small
        const double ts = -tr_prev + ut(rng);
        const double tr = ut(rng);
        suite.push_back(hinge_block(gamma, tr, ts));
        tr_prev = tr;
    }
    return suite;
}

}  // namespace

TEST_CASE("ap_check: diagonal family telescopes exactly") {
    const std::vector<ScaledMat> suite(5, ScaledMat{diag(1.0, 1e-4), std::log(100.0)});
    const APReport r = ap_check(suite);
    CHECK(r.n_blocks == 5);
    CHECK(r.det_ok);
    CHECK(r.gap_ok);
    CHECK(r.size_ok);
    CHECK(r.gamma_bound == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(r.lhs_residual <= 1e-12);
    CHECK(r.conclusion_ok());
}

TEST_CASE("ap_check: undersized blocks flagged") {
    const std::vector<ScaledMat> suite(3, ScaledMat{diag(1.0, 0.25), std::log(2.0)});
    const APReport r = ap_check(suite);
    CHECK_FALSE(r.size_ok);  // gamma = 2 < n = 3
    CHECK(r.det_ok);
}

TEST_CASE("ap_check: determinant above 1 flagged") {
    const std::vector<ScaledMat> suite(4, ScaledMat{diag(1.0, 0.5 / 2500.0), std::log(50.0)});
    std::vector<ScaledMat> bad = suite;
    bad[1] = ScaledMat{diag(1.0, 1.0), std::log(50.0)};  // det = 2500
    CHECK(ap_check(suite).det_ok);  // det = 1/2
    CHECK_FALSE(ap_check(bad).det_ok);
}

TEST_CASE("ap_check: orthogonal hinge violates the gap hypothesis") {
    const double g = 100.0;
    std::vector<ScaledMat> suite;
    suite.push_back(hinge_block(g, 0.0, 0.0));
    suite.push_back(hinge_block(g, 0.0, std::numbers::pi / 2.0));  // kills the pair norm
    suite.push_back(hinge_block(g, 0.0, 0.0));
    const APReport r = ap_check(suite);
    CHECK_FALSE(r.gap_ok);
    CHECK(r.det_ok);
    CHECK(r.size_ok);
}

TEST_CASE("ap_check: minimum suite size") {
    const std::vector<ScaledMat> two(2, ScaledMat{diag(1.0, 1e-4), std::log(100.0)});
    CHECK_THROWS_AS(ap_check(two), std::invalid_argument);
}

TEST_CASE("ap_check: invariant under a global phase") {
    std::mt19937_64 rng(2024);
    std::vector<ScaledMat> suite = random_suite(rng, 6);
    const APReport base = ap_check(suite);
    const Complex phase = std::polar(1.0, 0.7);
    for (auto& b : suite) b.unit = b.unit * phase;
    const APReport rotated = ap_check(suite);
    CHECK(rotated.det_ok == base.det_ok);
    CHECK(rotated.gap_ok == base.gap_ok);
    CHECK(rotated.size_ok == base.size_ok);
    CHECK(std::abs(rotated.lhs_residual - base.lhs_residual) <= 1e-12);
    CHECK(rotated.gamma_bound == doctest::Approx(base.gamma_bound).epsilon(1e-12));
}

TEST_CASE("ap_check: residual bound on randomized aligned suites") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> un(4, 12);
    int accepted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::vector<ScaledMat> suite = random_suite(rng, un(rng));
        const APReport r = ap_check(suite);
        if (!r.hypotheses_ok()) continue;
        ++accepted;
        CHECK(r.conclusion_ok());
        CHECK(r.lhs_residual <= r.bound_value);
    }
    // the construction aligns hinges, so most suites must satisfy the hypotheses
    CHECK(accepted >= 200);
}

TEST_CASE("ap_blocks: composition identity and per-block unimodularity") {
    const CFExpansion cf = cf_expand(QuadraticSurd::golden(), 40);
    const JacobiModel m = JacobiModel::schrodinger(2.0, TrigPolynomial::two_cos(0.5), cf);
    const long long block_len = 25;
    const int num_blocks = 4;
    const double x = 0.2, E = 0.3;
    const auto blocks = ap_blocks(m, x, E, block_len, num_blocks);
    REQUIRE(blocks.size() == 4);

    // det survives double precision only while 2 n L stays well under log(1/eps);
    // check unimodularity on short blocks, composition on the long ones
    for (const auto& b : ap_blocks(m, x, E, 8, 4)) {
        const double log_abs_det = 2.0 * b.log_scale + std::log(std::abs(b.unit.det()));
        CHECK(std::abs(log_abs_det) <= 2e-9);
    }

    Mat2 unit = Mat2::identity();
    double log_scale = 0.0;
    for (const auto& b : blocks) {
        unit = b.unit * unit;
        const double norm = unit.spectral_norm();
        unit = unit / norm;
        log_scale += b.log_scale + std::log(norm);
    }
    const double composed = log_scale + std::log(unit.spectral_norm());
    const double whole =
        scaled_product(m, x, E, block_len * num_blocks, Gauge::unimodular).as_scaled_mat()
            .log_norm();
    CHECK(std::abs(composed - whole) <= 1e-8 * static_cast<double>(block_len * num_blocks));

    CHECK_THROWS_AS(ap_blocks(m, x, E, 10, 2), std::invalid_argument);
}

TEST_CASE("ap_check on extended-precision cocycle blocks at moderate coupling") {
    const CFExpansion cf = cf_expand(QuadraticSurd::golden(), 40);
    const JacobiModel m = JacobiModel::schrodinger(4.0, TrigPolynomial::two_cos(0.5), cf);
    const PreciseBlockSet blocks(m, 0.11, 0.25, 60, 8);
    REQUIRE(blocks.size() == 8);
    const APReport r = ap_check(blocks);
    CHECK(r.det_ok);
    CHECK(r.size_ok);
    CHECK(r.gap_ok);
    CHECK(r.conclusion_ok());
    // log-domain fields stay consistent with the saturating doubles
    CHECK(r.log_bound == doctest::Approx(std::log(r.C_test * r.n_blocks) - r.log_gamma));
}

TEST_CASE("PreciseBlockSet agrees with the double pipeline where both are valid") {
    const CFExpansion cf = cf_expand(QuadraticSurd::golden(), 40);
    const JacobiModel m = JacobiModel::schrodinger(2.0, TrigPolynomial::two_cos(0.5), cf);
    const long long len = 12;
    const PreciseBlockSet precise(m, 0.2, 0.3, len, 4);
    CHECK(precise.block_len() == len);
    const auto snap = precise.as_scaled_mats();
    const auto plain = ap_blocks(m, 0.2, 0.3, len, 4);
    REQUIRE(snap.size() == plain.size());
    for (std::size_t j = 0; j < snap.size(); ++j) {
        CHECK(snap[j].log_norm() ==
              doctest::Approx(plain[j].log_norm()).epsilon(1e-10));
        // snapshot units are spectral-norm 1 by construction
        CHECK(snap[j].unit.spectral_norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(PreciseBlockSet(m, 0.2, 0.3, 10, 2), std::invalid_argument);
}

// Acceptance harness: one pass/fail line per criterion, exit code = number of
// failed criteria. Everything here is checked at desk scale with explicit
// budgets; reports include the measured margin so regressions are visible.

#include "cocyclelab/avalanche.hpp"
#include "cocyclelab/deviation.hpp"
#include "cocyclelab/lyapunov.hpp"
#include "cocyclelab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace cocyclelab;

namespace {

int g_failures = 0;
std::map<int, std::string> g_lines;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "[%s] criterion %2d: %s (%s)", ok ? "PASS" : "FAIL", id,
                  what.c_str(), detail.c_str());
    g_lines[id] = buf;
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

CFExpansion golden_cf() { return cf_expand(QuadraticSurd::golden(), 40); }

JacobiModel amo(double lambda_s) {
    return JacobiModel::schrodinger(lambda_s, TrigPolynomial::two_cos(0.5), golden_cf());
}

std::vector<JacobiModel> sample_models() {
    std::vector<JacobiModel> models;
    models.push_back(amo(2.0));
    models.push_back(amo(10.0));
    TrigPolynomial a1({Complex(0.0), Complex(1.0), Complex(0.3)}, 0.5);
    models.emplace_back(0.7, std::move(a1), 1.3, TrigPolynomial::two_cos(0.5), golden_cf());
    TrigPolynomial a2({Complex(0.2, 0.1), Complex(1.0), Complex(0.0, -0.4)}, 0.5);
    models.emplace_back(1.6, std::move(a2), 0.9, TrigPolynomial::two_cos(0.5),
                        cf_expand(QuadraticSurd::sqrt2m1(), 40));
    return models;
}

// ---- criteria 1 & 2: gauge identity, unimodularity, positivity ------------

void criteria_gauge_and_unimodularity() {
    const auto models = sample_models();
    std::mt19937_64 rng(20260823);
    std::uniform_real_distribution<double> ux(0.0, 1.0), ue(-1.0, 1.0);
    std::uniform_int_distribution<long long> un(10, 500);

    double worst_identity = 0.0, worst_det = 0.0, worst_u = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const JacobiModel& m = models[static_cast<std::size_t>(trial) % models.size()];
        const double x = ux(rng);
        const double E = ue(rng) * m.energy_radius;
        const long long n = un(rng);

        const ScaledProduct pu = scaled_product(m, x, E, n, Gauge::unimodular);
        const ScaledProduct pa = scaled_product(m, x, E, n, Gauge::analytic);

        const double lhs = static_cast<double>(n) * pu.u();
        const double rhs = -0.5 * pa.sum_d + pa.as_scaled_mat().log_norm();
        worst_identity = std::max(worst_identity, std::abs(lhs - rhs) / static_cast<double>(n));

        // det of the stored unit matrix is cancellation noise once the product
        // is strongly hyperbolic (2 n u_n beyond ~ log(1/eps)), so verify the
        // determinant invariant on the longest prefix where it is resolvable
        // and the sign/positivity invariant on the full product
        // e^{-2 n_det u} stays >= ~e^{-13}, three decades above the noise
        const long long n_det = std::clamp(
            static_cast<long long>(6.5 / std::max(pu.u(), 0.05)), 1LL, n);
        const ScaledProduct pd = scaled_product(m, x, E, n_det, Gauge::unimodular);
        const double log_abs_det = 2.0 * pd.log_scale + std::log(std::abs(pd.unit.det()));
        worst_det = std::max(worst_det, std::abs(log_abs_det));
        worst_u = std::min(worst_u, pu.u());
        worst_u = std::min(worst_u, 0.0);
    }
    report(1, worst_identity <= 1e-8, "gauge identity on 100 random products",
           "max |residual|/n = " + fmt(worst_identity) + ", budget 1e-8");
    report(2, worst_det <= 1e-9 && worst_u >= -1e-9,
           "unimodular products: |det| = 1 and u_n >= 0",
           "max |log det| = " + fmt(worst_det) + ", min u = " + fmt(worst_u));
}

// ---- criteria 3-5, 7: strong-coupling lyapunov program --------------------

void criteria_lyapunov_and_ldt() {
    const JacobiModel m = amo(10.0);

    // criterion 3: positivity across the energy window
    double min_L = std::numeric_limits<double>::infinity();
    double worst_E = 0.0;
    for (int i = 0; i < 21; ++i) {
        const double E = -m.energy_radius + 2.0 * m.energy_radius * i / 20.0;
        const double L = finite_le(m, E, 1000, 4096, 8).L_n;
        if (L < min_L) {
            min_L = L;
            worst_E = E;
        }
    }
    const double floor3 = 0.8 * std::log(10.0);
    report(3, min_L >= floor3, "large-coupling positivity on a 21-point energy grid",
           "min L_1000 = " + fmt(min_L) + " at E = " + fmt(worst_E) + ", floor " + fmt(floor3));

    // shared depth scan at E = 0
    std::map<long long, double> L;
    for (long long n : {100LL, 200LL, 400LL, 800LL, 6400LL})
        L[n] = finite_le(m, 0.0, n, 4096, 8).L_n;

    // criterion 4: subadditivity
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (long long n : {100LL, 200LL, 400LL})
        worst_gap = std::max(worst_gap, L[2 * n] - L[n]);
    report(4, worst_gap <= 1e-3, "subadditivity of the finite-scale exponents",
           "max (L_2n - L_n) = " + fmt(worst_gap) + ", budget 1e-3");

    // criterion 5: extrapolation dominance against the deep reference
    const double L_ref = L[6400];
    bool dominance = true;
    double worst_ratio = 0.0;
    for (long long n : {100LL, 200LL, 400LL}) {
        const double plain = std::abs(L[n] - L_ref);
        const double extra = std::abs(ap_extrapolate(L[n], L[2 * n]) - L_ref);
        dominance = dominance && extra < plain;
        worst_ratio = std::max(worst_ratio, extra / plain);
    }
    report(5, dominance, "two-scale extrapolation beats the raw estimate",
           "max |extrapolant - L_ref| / |L_n - L_ref| = " + fmt(worst_ratio));

    // criterion 7: deviation-measure decay in the sharp-band regime
    const double delta = 0.25 * L[800];
    const auto ldt = ldt_experiment(m, 0.0, {100, 200, 400, 800}, delta, 8192, 1.0, 1.0, 8);
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < ldt.measures.size(); ++i)
        decreasing = decreasing && ldt.measures[i + 1] < ldt.measures[i];
    const bool rate_neg = ldt.rate_defined && ldt.fitted_rate < 0.0;
    std::string meas;
    for (double mu : ldt.measures) meas += fmt(mu) + " ";
    std::string detail = "delta = " + fmt(delta) + ", measures = " + meas +
                         "rate = " + fmt(ldt.fitted_rate);
    if (!ldt.rate_defined)
        detail += "; band wider than the empirical spread of u_n at every scale, "
                  "so no strict decrease is observable";
    report(7, decreasing && rate_neg, "deviation measures decay strictly across scales",
           detail);
}

// ---- criterion 6: block-product expansion residuals ------------------------

Mat2 rotation(double theta) {
    Mat2 r;
    r(0, 0) = std::cos(theta);
    r(0, 1) = -std::sin(theta);
    r(1, 0) = std::sin(theta);
    r(1, 1) = std::cos(theta);
    return r;
}

// |det| = 1/2, strictly inside the hypothesis: a det pinned exactly at 1 is
// destroyed by fp noise ~1e-16 * gamma^2 in the stored near-rank-one matrix
ScaledMat hinge_block(double gamma, double tr, double ts) {
    Mat2 d;
    d(0, 0) = 1.0;
    d(1, 1) = 0.5 / (gamma * gamma);
    return {rotation(tr) * d * rotation(ts), std::log(gamma)};
}

void criterion_avalanche() {
    // 1000 constructed suites, regenerated until the hypotheses hold
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> un(4, 16);
    std::uniform_real_distribution<double> ut(-1.0, 1.0);
    int ok_suites = 0, attempts = 0;
    bool constructed_ok = true;
    double worst_margin = -std::numeric_limits<double>::infinity();
    while (ok_suites < 1000 && attempts < 20000) {
        ++attempts;
        const int n = un(rng);
        std::uniform_real_distribution<double> ug(std::log(n + 1.0), std::log(1e6));
        std::vector<ScaledMat> suite;
        double tr_prev = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ts = -tr_prev + ut(rng);
            const double tr = ut(rng);
            suite.push_back(hinge_block(std::exp(ug(rng)), tr, ts));
            tr_prev = tr;
        }
        const APReport r = ap_check(suite);
        if (!r.hypotheses_ok()) continue;
        ++ok_suites;
        constructed_ok = constructed_ok && r.conclusion_ok();
        worst_margin = std::max(worst_margin, r.log_lhs_residual - r.log_bound);
    }

    // diagonal suites telescope exactly
    Mat2 d;
    d(0, 0) = 1.0;
    d(1, 1) = 1e-4;
    const APReport diag = ap_check(std::vector<ScaledMat>(6, ScaledMat{d, std::log(100.0)}));
    const bool diag_ok = diag.lhs_residual <= 1e-12;

    // 20 cocycle-block suites at strong coupling, evaluated end to end in
    // extended precision: the residual lives at e^{-log gamma} ~ e^{-450},
    // far below anything a double pipeline can resolve
    const JacobiModel m = amo(10.0);
    std::uniform_real_distribution<double> uxr(0.0, 1.0);
    std::mt19937_64 rng2(4242);
    bool cocycle_ok = true;
    double worst_cocycle_margin = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
        const double x = uxr(rng2);
        const double E = 2.0 * uxr(rng2) - 1.0;
        const APReport r = ap_check(PreciseBlockSet(m, x, E, 200, 20));
        cocycle_ok = cocycle_ok && r.hypotheses_ok() && r.conclusion_ok();
        worst_cocycle_margin =
            std::max(worst_cocycle_margin, r.log_lhs_residual - r.log_bound);
    }

    report(6, ok_suites == 1000 && constructed_ok && diag_ok && cocycle_ok,
           "block-expansion residual bound on constructed and cocycle suites",
           "suites " + std::to_string(ok_suites) + "/1000, worst log margin " +
               fmt(worst_margin) + ", cocycle margin " + fmt(worst_cocycle_margin) +
               ", diag residual " + fmt(diag.lhs_residual));
}

// ---- criteria 8 & 9: kernel sums and exponential moments -------------------

void criterion_kernel_sums() {
    const double exact = -1.0 - std::log(2.0);
    const bool i_half_ok = std::abs(log_potential_I(Complex(0.5, 0.0)) - exact) <= 1e-10;

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    double worst_ratio = 0.0;
    bool excluded_ok = true;
    for (const Complex zeta : {Complex(0.0, 1.0), Complex(0.3, 0.0)}) {
        for (long long q = 8; q <= 4096; q *= 2) {
            for (int trial = 0; trial < 64; ++trial) {
                const double res = excluded_rational_sum(ux(rng), zeta, q).residual;
                const double ratio = res / std::log(static_cast<double>(q));
                worst_ratio = std::max(worst_ratio, ratio);
                excluded_ok = excluded_ok && ratio <= 20.0;
            }
        }
    }

    const CFExpansion cf = golden_cf();
    const long long q12 = cf.convergents[11].q.convert_to<long long>();  // 233
    bool mean_ok = true;
    double worst_mean = 0.0;
    for (const Complex zeta : {Complex(0.0, 1.0), Complex(0.3, 0.0)}) {
        const auto sample = birkhoff_sample(zeta, q12, cf.omega, 4096, 8);
        worst_mean = std::max(worst_mean, sample.mean_gap);
        mean_ok = mean_ok && sample.mean_gap <= 5e-3;
    }

    report(8, i_half_ok && excluded_ok && mean_ok,
           "kernel space average, excluded rational sums, and grid means",
           "max residual/log q = " + fmt(worst_ratio) + ", max mean gap = " + fmt(worst_mean) +
               " at n = " + std::to_string(q12));
}

void criterion_exp_moment() {
    const CFExpansion cf = golden_cf();
    std::vector<double> idx, normalized;
    std::string values;
    for (std::size_t s = 0; s < cf.convergents.size(); ++s) {
        const long long q = cf.convergents[s].q.convert_to<long long>();
        if (q < 5) continue;
        if (q > 1000) break;
        const auto r = exp_moment(0.1, Complex(0.0, 1.0), cf.omega, q, 4096, 8);
        idx.push_back(static_cast<double>(idx.size() + 1));
        normalized.push_back(r.normalized);
        values += fmt(r.normalized) + " ";
    }
    const double slope = fit_line(idx, normalized).slope;
    report(9, slope <= 0.05, "normalized exponential moments stay bounded in scale",
           "per-step slope = " + fmt(slope) + ", values: " + values);
}

// ---- criteria 10 & 11: exact arithmetic and determinism --------------------

void criterion_cf_exact() {
    bool ok = true;
    std::string detail;
    for (const auto& surd : {QuadraticSurd::golden(), QuadraticSurd::sqrt2m1()}) {
        const CFExpansion cf = cf_expand(surd, 20);
        const auto violation = convergent_inequality_violation(cf);
        ok = ok && cf.convergents.size() == 20 && !violation.has_value();
        if (violation)
            detail += "violation at depth " + std::to_string(*violation) + "; ";
    }
    if (detail.empty()) detail = "both built-in quadratic irrationals clean to depth 20";
    report(10, ok, "convergent inequalities verified in exact arithmetic", detail);
}

void criterion_determinism() {
    const JacobiModel m = amo(3.0);
    bool ok = true;

    const LyapunovEstimate l1 = finite_le(m, 0.4, 150, 1024, 1);
    const LyapunovEstimate l7 = finite_le(m, 0.4, 150, 1024, 7);
    ok = ok && l1.L_n == l7.L_n && l1.L_n_a == l7.L_n_a &&
         l1.gauge_residual == l7.gauge_residual;

    const auto b1 = birkhoff_sample(Complex(0.0, 1.0), 144, m.omega, 2048, 1);
    const auto b5 = birkhoff_sample(Complex(0.0, 1.0), 144, m.omega, 2048, 5);
    ok = ok && b1.values == b5.values && b1.mean_gap == b5.mean_gap;

    const auto d1 = deviation_measure(m, 0.4, 100, 0.1, 1024, 1);
    const auto d3 = deviation_measure(m, 0.4, 100, 0.1, 1024, 3);
    ok = ok && d1.measure == d3.measure && d1.L_n == d3.L_n;

    const auto e1 = exp_moment(0.1, Complex(0.0, 1.0), m.omega, 89, 1024, 1);
    const auto e6 = exp_moment(0.1, Complex(0.0, 1.0), m.omega, 89, 1024, 6);
    ok = ok && e1.estimate == e6.estimate;

    report(11, ok, "bit-identical results across worker counts",
           ok ? "lyapunov, birkhoff, deviation, exp-moment all byte-stable"
              : "at least one experiment changed under reparallelization");
}

}  // namespace

int main() {
    criteria_gauge_and_unimodularity();
    criteria_lyapunov_and_ldt();
    criterion_avalanche();
    criterion_kernel_sums();
    criterion_exp_moment();
    criterion_cf_exact();
    criterion_determinism();
    for (const auto& [id, line] : g_lines) std::printf("%s\n", line.c_str());
    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures;
}

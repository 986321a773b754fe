#include "cocyclelab/lyapunov.hpp"

#include "cocyclelab/parallel.hpp"
#include "cocyclelab/summation.hpp"

#include <cmath>
#include <random>

namespace cocyclelab {

LyapunovEstimate finite_le(const JacobiModel& model, double E, long long n, int grid_size,
                           int workers) {
    const int min_grid = 2 * std::max(model.a.degree(), model.v.degree()) + 1;
    if (grid_size < min_grid)
        throw std::invalid_argument("finite_le: grid_size must exceed twice the Fourier degree");

    struct Slot {
        double u_u = 0.0, u_a = 0.0, sum_d = 0.0;
        bool ok = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(grid_size));
    parallel_for(static_cast<std::size_t>(grid_size), workers, [&](std::size_t i) {
        const double x = static_cast<double>(i) / grid_size;
        try {
            const ScaledProduct pu = scaled_product(model, x, E, n, Gauge::unimodular);
            const ScaledProduct pa = scaled_product(model, x, E, n, Gauge::analytic);
            slots[i] = {pu.u(), pa.u(), pa.sum_d, true};
        } catch (const SingularStepError&) {
            slots[i].ok = false;
        }
    });

    std::vector<double> uu, ua, sd;
    uu.reserve(slots.size());
    ua.reserve(slots.size());
    sd.reserve(slots.size());
    long long dropped = 0;
    for (const Slot& s : slots) {
        if (!s.ok) {
            ++dropped;
            continue;
        }
        uu.push_back(s.u_u);
        ua.push_back(s.u_a);
        sd.push_back(s.sum_d);
    }
    if (uu.empty()) throw std::runtime_error("finite_le: all orbits dropped, degenerate model");

    LyapunovEstimate est;
    est.E = E;
    est.n = n;
    est.grid_size = grid_size;
    est.dropped_orbits = dropped;
    est.L_n = pairwise_mean(uu);
    est.L_n_a = pairwise_mean(ua);
    est.D_hat = model.drift;
    const double mean_half_d = pairwise_mean(sd) / (2.0 * static_cast<double>(n));
    est.gauge_residual = std::abs(est.L_n - (est.L_n_a - mean_half_d));
    return est;
}

double ap_extrapolate(double L_n, double L_2n) { return 2.0 * L_2n - L_n; }

double Thresholds::r_E(double L0, double ncheck) const {
    return L0 / (200.0 * ncheck) * std::exp((1.0 - ncheck) * m0 - 2.0 * ncheck * std::abs(drift));
}

Thresholds thresholds(const JacobiModel& model, double gamma, double epsilon0, double C_abs,
                      double c_abs) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("thresholds: gamma in (0,1)");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("thresholds: epsilon0 must be positive");

    Thresholds t;
    t.gamma = gamma;
    t.epsilon0 = epsilon0;
    t.C_abs = C_abs;
    t.c_abs = c_abs;
    t.m0 = model.m0;
    t.drift = model.drift;
    t.energy_radius = model.energy_radius;

    const double rho = model.v.rho();
    t.sup_a_strip = model.a.sup_norm_strip(rho);
    t.sup_v_strip = model.v.sup_norm_strip(rho);
    t.sup_a_inner = model.a.sup_norm_strip(rho / 2.0);

    const double la_a = model.lambda_a * t.sup_a_strip;
    t.lambda_0 = std::max(la_a / t.sup_v_strip, 2.0 * la_a / epsilon0);
    t.lambda_p = std::max({std::pow(5.0 * model.sup_v, 1.0 / gamma),
                           2.0 * model.lambda_a * model.sup_a,
                           std::pow(la_a, 2.0 / gamma) / t.sup_v_strip}) *
                 std::pow(2.0 / epsilon0, 2.0 / gamma);

    t.C_va = std::max(std::log(10.0 * t.sup_v_strip / epsilon0),
                      std::log(t.sup_a_strip / t.sup_a_inner));
    t.c_va = 1.0 / (2.0 * C_abs * C_abs * t.C_va);
    t.c_bar_va = c_abs / (C_abs * t.C_va);
    t.tau = t.c_bar_va / (2.0 * t.c_bar_va + 8.0e5);
    return t;
}

HolderReport holder_fit(const JacobiModel& model, double E_center, double radius, int num_pairs,
                        long long n, int grid_size, std::uint64_t seed, double c_bar,
                        int workers) {
    if (!(radius > 0.0)) throw std::invalid_argument("holder_fit: radius must be positive");
    HolderReport report;
    report.seed = seed;
    report.tau_formula = c_bar / (2.0 * c_bar + 8.0e5);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_lo = std::log(radius * 1e-4), log_hi = std::log(radius);

    auto le_proxy = [&](double E) {
        const double L1 = finite_le(model, E, n, grid_size, workers).L_n;
        const double L2 = finite_le(model, E, 2 * n, grid_size, workers).L_n;
        return ap_extrapolate(L1, L2);
    };

    std::vector<double> log_de, log_dl;
    for (int i = 0; i < num_pairs; ++i) {
        const double de = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
        HolderPair p;
        p.E1 = E_center - de / 2.0;
        p.E2 = E_center + de / 2.0;
        if (p.E1 == p.E2) {
            report.pairs.push_back(p);
            continue;
        }
        p.dL = std::abs(le_proxy(p.E1) - le_proxy(p.E2));
        report.pairs.push_back(p);
        if (p.dL >= 1e-12) {
            log_de.push_back(std::log(de));
            log_dl.push_back(std::log(p.dL));
        }
    }
    report.used_pairs = log_de.size();
    if (report.used_pairs < 3)
        throw InsufficientDataError("holder_fit: fewer than 3 pairs with |dL| > 1e-12");

    const LineFit fit = fit_line(log_de, log_dl);
    report.fitted_tau = fit.slope;
    report.residual_se = fit.residual_se;
    return report;
}

}  // namespace cocyclelab

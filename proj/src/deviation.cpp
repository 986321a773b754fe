#include "cocyclelab/deviation.hpp"

#include "cocyclelab/analytic.hpp"
#include "cocyclelab/parallel.hpp"
#include "cocyclelab/summation.hpp"

#include <algorithm>
#include <cmath>

namespace cocyclelab {

namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

double birkhoff_sum(Complex zeta, double x, long long n, double step) {
    double sum = 0.0;
    for (long long k = 0; k < n; ++k) {
        const double theta = frac(x + static_cast<double>(k) * step);
        const double dist = std::abs(Complex(theta, 0.0) - zeta);
        if (dist < 1e-300) throw SingularSumError(k);
        sum += std::log(dist);
    }
    return sum;
}

ExcludedRationalSum excluded_rational_sum(double x, Complex zeta, long long q) {
    if (q < 2) throw std::invalid_argument("excluded_rational_sum: q must be >= 2");
    const double xi = zeta.real();
    long long k0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (long long k = 0; k < q; ++k) {
        const double theta = frac(x + static_cast<double>(k) / static_cast<double>(q));
        const double d = std::abs(theta - xi);
        if (d < best) {
            best = d;
            k0 = k;
        }
    }
    ExcludedRationalSum out;
    out.excluded_k = k0;
    for (long long k = 0; k < q; ++k) {
        if (k == k0) continue;
        const double theta = frac(x + static_cast<double>(k) / static_cast<double>(q));
        out.sum += std::log(std::abs(Complex(theta, 0.0) - zeta));
    }
    out.residual = std::abs(out.sum - static_cast<double>(q) * log_potential_I(zeta));
    return out;
}

BirkhoffSumSample birkhoff_sample(Complex zeta, long long n, double omega, int grid_size,
                                  int workers) {
    BirkhoffSumSample sample;
    sample.zeta = zeta;
    sample.n = n;

    struct Slot {
        double f = 0.0;
        bool ok = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(grid_size));
    parallel_for(static_cast<std::size_t>(grid_size), workers, [&](std::size_t i) {
        const double x = static_cast<double>(i) / grid_size;
        double min_dist = std::numeric_limits<double>::infinity();
        for (long long k = 0; k < n; ++k) {
            const double theta = frac(x + static_cast<double>(k) * omega);
            min_dist = std::min(min_dist, std::abs(Complex(theta, 0.0) - zeta));
        }
        if (min_dist < 1e-12) return;
        slots[i] = {birkhoff_sum(zeta, x, n, omega), true};
    });

    const double I = log_potential_I(zeta);
    std::vector<double> per_n;
    for (int i = 0; i < grid_size; ++i) {
        const Slot& s = slots[static_cast<std::size_t>(i)];
        if (!s.ok) {
            ++sample.dropped;
            continue;
        }
        sample.x_values.push_back(static_cast<double>(i) / grid_size);
        sample.values.push_back(s.f);
        per_n.push_back(s.f / static_cast<double>(n));
        sample.max_gap = std::max(sample.max_gap, std::abs(s.f - static_cast<double>(n) * I));
    }
    sample.mean_gap = std::abs(pairwise_mean(per_n) - I);
    return sample;
}

DeviationMeasure deviation_measure(const JacobiModel& model, double E, long long n, double delta,
                                   int grid_size, int workers) {
    if (grid_size < 512) throw std::invalid_argument("deviation_measure: grid_size must be >= 512");
    struct Slot {
        double u = 0.0;
        bool ok = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(grid_size));
    parallel_for(static_cast<std::size_t>(grid_size), workers, [&](std::size_t i) {
        const double x = static_cast<double>(i) / grid_size;
        try {
            slots[i] = {scaled_product(model, x, E, n, Gauge::unimodular).u(), true};
        } catch (const SingularStepError&) {
        }
    });

    std::vector<double> u;
    u.reserve(slots.size());
    DeviationMeasure out;
    for (const Slot& s : slots) {
        if (s.ok)
            u.push_back(s.u);
        else
            ++out.dropped;
    }
    if (u.empty()) throw std::runtime_error("deviation_measure: all orbits dropped");
    out.L_n = pairwise_mean(u);
    long long violations = 0;
    for (double ui : u)
        if (std::abs(ui - out.L_n) > delta) ++violations;
    out.measure = static_cast<double>(violations) / static_cast<double>(grid_size);
    out.drop_warning = out.dropped * 100 > grid_size;
    return out;
}

DeviationReport ldt_experiment(const JacobiModel& model, double E,
                               const std::vector<long long>& n_list, double delta, int grid_size,
                               double c_abs, double mu_guess, int workers) {
    if (n_list.size() < 3 || !std::is_sorted(n_list.begin(), n_list.end()))
        throw std::invalid_argument("ldt_experiment: n_list must be increasing, length >= 3");
    DeviationReport report;
    report.n_values = n_list;
    report.delta = delta;
    report.grid_size = grid_size;
    report.bound_rate = -c_abs * delta / mu_guess;

    std::vector<double> xs, ys;
    for (long long n : n_list) {
        const DeviationMeasure m = deviation_measure(model, E, n, delta, grid_size, workers);
        report.measures.push_back(m.measure);
        report.dropped_total += m.dropped;
        if (m.measure > 0.0) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log(m.measure));
        }
    }
    if (xs.size() >= 2) {
        report.fitted_rate = fit_line(xs, ys).slope;
        report.rate_defined = true;
    }
    return report;
}

ExpMomentResult exp_moment(double sigma, Complex zeta, double omega, long long n, int grid_size,
                           int workers) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("exp_moment: sigma in (0,1)");
    const double I = log_potential_I(zeta);
    const bool real_zeta = zeta.imag() == 0.0;
    // radius 1/(4N): the union over the n orbit points covers about n/(2N)
    // of the torus, so the excluded fraction stays small for n << N
    const double exclusion = 0.25 / static_cast<double>(grid_size);

    struct Slot {
        double w = 0.0;
        bool ok = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(grid_size));
    parallel_for(static_cast<std::size_t>(grid_size), workers, [&](std::size_t i) {
        const double x = static_cast<double>(i) / grid_size;
        if (real_zeta) {
            for (long long k = 0; k < n; ++k) {
                const double theta = frac(x + static_cast<double>(k) * omega);
                if (std::abs(theta - zeta.real()) < exclusion) return;
            }
        }
        const double f = birkhoff_sum(zeta, x, n, omega);
        slots[i] = {std::exp(sigma * std::abs(f - static_cast<double>(n) * I)), true};
    });

    std::vector<double> kept;
    ExpMomentResult out;
    for (const Slot& s : slots) {
        if (s.ok)
            kept.push_back(s.w);
        else
            ++out.excluded;
    }
    if (kept.empty()) throw std::runtime_error("exp_moment: all grid points excluded");
    out.estimate = pairwise_mean(kept);
    out.normalized = std::log(out.estimate) / (sigma * static_cast<double>(n));
    return out;
}

}  // namespace cocyclelab

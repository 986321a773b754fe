#pragma once

#include "cocyclelab/cocycle.hpp"

#include <complex>
#include <vector>

namespace cocyclelab {

struct SingularSumError : std::runtime_error {
    long long k;
    explicit SingularSumError(long long k_in)
        : std::runtime_error("birkhoff_sum: orbit point hit the logarithmic singularity"),
          k(k_in) {}
};

// F_{n,zeta}(x) = sum_{0 <= k < n} log|{x + k step} - zeta| with {.} the
// fractional part. step = p/q with n = q gives f_{q,zeta}.
double birkhoff_sum(Complex zeta, double x, long long n, double step);

struct ExcludedRationalSum {
    double sum = 0.0;       // sum over k != k0 of log|{x + k/q} - zeta|
    double residual = 0.0;  // |sum - q I(zeta)|
    long long excluded_k = 0;
};

// Rational-step sum with the single nearest orbit point to Re(zeta) dropped.
ExcludedRationalSum excluded_rational_sum(double x, Complex zeta, long long q);

struct BirkhoffSumSample {
    Complex zeta;
    long long n = 0;
    std::vector<double> x_values;
    std::vector<double> values;   // F_n(x) on the kept grid points
    long long dropped = 0;        // grid points within 1e-12 of a singularity
    double mean_gap = 0.0;        // |mean(F_n / n) - I(zeta)|
    double max_gap = 0.0;         // max |F_n(x) - n I(zeta)|
};

BirkhoffSumSample birkhoff_sample(Complex zeta, long long n, double omega, int grid_size,
                                  int workers = 1);

struct DeviationMeasure {
    double measure = 0.0;    // fraction of grid with |u_n - L_n| > delta
    double L_n = 0.0;
    long long dropped = 0;
    bool drop_warning = false;  // dropped orbits exceed 1% of the grid
};

DeviationMeasure deviation_measure(const JacobiModel& model, double E, long long n, double delta,
                                   int grid_size, int workers = 1);

struct DeviationReport {
    std::vector<long long> n_values;
    double delta = 0.0;
    std::vector<double> measures;
    double fitted_rate = 0.0;   // slope of log(measure) vs n over nonzero entries
    bool rate_defined = false;  // false when fewer than 2 nonzero measures
    double bound_rate = 0.0;    // -c_abs * delta / mu_guess
    int grid_size = 0;
    long long dropped_total = 0;
};

DeviationReport ldt_experiment(const JacobiModel& model, double E,
                               const std::vector<long long>& n_list, double delta, int grid_size,
                               double c_abs = 1.0, double mu_guess = 1.0, int workers = 1);

struct ExpMomentResult {
    double estimate = 0.0;    // grid mean of exp(sigma |F_n - n I(zeta)|)
    double normalized = 0.0;  // log(estimate) / (sigma n)
    long long excluded = 0;
};

// Grid points whose orbit passes near the singularity of log|.-zeta| are
// excluded (within 1/(4 grid_size) of Re zeta when zeta is real).
ExpMomentResult exp_moment(double sigma, Complex zeta, double omega, long long n, int grid_size,
                           int workers = 1);

}  // namespace cocyclelab

#pragma once

#include "cocyclelab/cocycle.hpp"

#include <cstdint>
#include <vector>

namespace cocyclelab {

struct LyapunovEstimate {
    double E = 0.0;
    long long n = 0;
    int grid_size = 0;
    double L_n = 0.0;        // mean of u_n^u over the grid
    double L_n_a = 0.0;      // mean of u_n^a
    double D_hat = 0.0;      // grid mean of log|lambda_a a|
    long long dropped_orbits = 0;
    double gauge_residual = 0.0;  // |L_n - (L_n_a - mean sum_d / 2n)|
};

// Equispaced-grid finite-scale Lyapunov exponent; deterministic summation
// order, independent of the worker count.
LyapunovEstimate finite_le(const JacobiModel& model, double E, long long n, int grid_size,
                           int workers = 1);

// Richardson-style extrapolant 2 L_{2n} - L_n.
double ap_extrapolate(double L_n, double L_2n);

struct Thresholds {
    double gamma = 0.0;
    double epsilon0 = 0.0;
    double C_abs = 1.0;  // stands in for both C and C(Omega, Omega_1)
    double c_abs = 1.0;

    double m0 = 0.0;
    double drift = 0.0;
    double energy_radius = 0.0;

    double sup_a_strip = 0.0;   // ||a|| over {|Re z|<1, |Im z|<rho}
    double sup_v_strip = 0.0;
    double sup_a_inner = 0.0;   // ||a|| over {|Re z|<2/3, |Im z|<rho/2}

    double lambda_0 = 0.0;  // max(la ||a||_O / ||v||_O, 2 la ||a||_O / eps0)
    double lambda_p = 0.0;
    double C_va = 0.0;      // max(log(10 ||v||_O / eps0), log(||a||_O / ||a||_O1))
    double c_va = 0.0;      // 1 / (2 C * C(O,O1) * C_va)
    double c_bar_va = 0.0;  // c / (C(O,O1) * C_va)
    double tau = 0.0;       // c_bar / (2 c_bar + 8e5)

    // r_E(ncheck) = L0 / (200 ncheck) * exp((1 - ncheck) M0 - 2 ncheck |D|)
    double r_E(double L0, double ncheck) const;
};

Thresholds thresholds(const JacobiModel& model, double gamma, double epsilon0,
                      double C_abs = 1.0, double c_abs = 1.0);

struct HolderPair {
    double E1 = 0.0;
    double E2 = 0.0;
    double dL = 0.0;
};

struct HolderReport {
    std::vector<HolderPair> pairs;
    std::size_t used_pairs = 0;      // pairs entering the log-log fit
    double fitted_tau = 0.0;
    double residual_se = 0.0;
    double tau_formula = 0.0;        // c_bar / (2 c_bar + 8e5) for supplied c_bar
    std::uint64_t seed = 0;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// L(E) proxy is ap_extrapolate(finite_le(n), finite_le(2n)); |dE| sampled
// log-uniformly in [radius * 1e-4, radius]. Throws InsufficientDataError
// when fewer than 3 pairs survive the |dL| > 1e-12 cut.
HolderReport holder_fit(const JacobiModel& model, double E_center, double radius,
                        int num_pairs, long long n, int grid_size, std::uint64_t seed,
                        double c_bar = 1.0, int workers = 1);

}  // namespace cocyclelab

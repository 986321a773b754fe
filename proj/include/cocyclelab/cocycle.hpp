#pragma once

#include "cocyclelab/analytic.hpp"
#include "cocyclelab/arithmetic.hpp"
#include "cocyclelab/mat2.hpp"

#include <stdexcept>
#include <vector>

namespace cocyclelab {

enum class Gauge { raw, analytic, unimodular };

struct SingularStepError : std::runtime_error {
    long long step;
    explicit SingularStepError(long long k)
        : std::runtime_error("transfer matrix singular: a vanishes on the orbit"), step(k) {}
};

// Jacobi model (lambda_a, a, lambda_v, v, omega) with the derived constants
// used throughout: the energy window, the a-priori bound M0 and the drift D.
struct JacobiModel {
    double lambda_a = 1.0;
    TrigPolynomial a;
    double lambda_v = 1.0;
    TrigPolynomial v;
    CFExpansion omega_cf;
    double omega = 0.0;

    double sup_a = 0.0;       // ||a||_inf on T
    double sup_v = 0.0;       // ||v||_inf on T
    double energy_radius = 0.0;  // E in [-r, r]
    double m0 = 0.0;          // log(3 la ||a|| + 2 lv ||v||)
    double drift = 0.0;       // D = mean of log|lambda_a a(x)|
    TrigPolynomial a_tilde;   // reflect-conjugate of a

    JacobiModel() = default;
    JacobiModel(double la, TrigPolynomial a_in, double lv, TrigPolynomial v_in,
                CFExpansion omega_in);

    // lambda_a = 1, a == 1
    static JacobiModel schrodinger(double lambda_s, TrigPolynomial v, CFExpansion omega);

    bool is_schrodinger() const;
};

struct OneStep {
    Mat2 raw;       // M = M_a / (lambda_a a(z + omega))
    Mat2 analytic;  // M_a = [[lv v - E, -la a~], [la a(z+omega), 0]]
};

OneStep one_step(const JacobiModel& model, Complex z, double E);

// d(z, omega) = log|lambda_a^2 a(z+omega) a~(z)|; -inf when a factor vanishes.
double d_log(const JacobiModel& model, Complex z);

struct ScaledProduct {
    Mat2 unit;              // spectral norm 1 after each renormalization
    double log_scale = 0.0; // true product = exp(log_scale) * unit
    long long n = 0;
    double sum_d = 0.0;     // sum of d(x + j omega, omega) over the steps taken
    Gauge gauge = Gauge::unimodular;

    double u() const { return log_scale / static_cast<double>(n); }
    ScaledMat as_scaled_mat() const { return {unit, log_scale}; }
};

// n-step product of one-step factors at x + k omega, k = 1..n, factor k = 1
// innermost, renormalized every step. Raw and unimodular gauges throw
// SingularStepError when a vanishes on the orbit.
ScaledProduct scaled_product(const JacobiModel& model, double x, double E, long long n,
                             Gauge gauge);

// Indices k in [0, n] with |a(x + k omega)| < tol (strict).
std::vector<long long> orbit_zero_scan(const JacobiModel& model, double x, long long n,
                                       double tol);

}  // namespace cocyclelab

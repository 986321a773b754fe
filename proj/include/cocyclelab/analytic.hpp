#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace cocyclelab {

using Complex = std::complex<double>;

// 1-periodic analytic function as a finite Fourier series
//   f(z) = sum_{k=-K..K} c_k e^{2 pi i k z},
// declared on the strip |Im z| <= rho.
class TrigPolynomial {
  public:
    TrigPolynomial() = default;
    // coeffs[j] is the coefficient of frequency j - K, size 2K+1 (odd).
    TrigPolynomial(std::vector<Complex> coeffs, double rho);

    static TrigPolynomial constant(Complex c, double rho);
    // 2 cos(2 pi x): c_{+-1} = 1
    static TrigPolynomial two_cos(double rho);

    int degree() const { return degree_; }
    double rho() const { return rho_; }
    Complex coeff(int k) const;
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    // c_{-k} = conj(c_k) for all k, i.e. real-valued on the real axis
    bool real_on_axis() const;

    Complex eval(Complex z) const;
    double eval_real(double x) const;  // real part of eval(x); use when real_on_axis

    // Analytic continuation of x -> conj(f(x)): coefficient k becomes
    // conj(c_{-k}). On the real axis this is the pointwise conjugate.
    TrigPolynomial reflect_conjugate() const;

    // sup |f| on an N-point equispaced real grid
    double sup_norm_torus(int grid = 4096) const;
    // sup |f| over {|Re z| < 1, |Im z| < half_width} on an nx-by-ny grid
    double sup_norm_strip(double half_width, int nx = 256, int ny = 64) const;

  private:
    std::vector<Complex> coeffs_;
    int degree_ = 0;
    double rho_ = 0.0;
};

// I(zeta) = integral_0^1 log|y - zeta| dy, closed form.
double log_potential_I(Complex zeta);

// Quadrature oracle for I(zeta); test use only.
double log_potential_I_quadrature(Complex zeta, int panels = 1 << 16);

struct Epsilon0Params {
    double e1_min = 0.0;
    double e1_max = 0.0;
    int e1_count = 0;
    int x_grid = 0;
    int y_grid = 0;
};

// Grid estimate of inf_{E1} sup_{delta/2 < y < delta} inf_x |v(x+iy) - E1|.
// Not a certified lower bound; refine the grids to diagnose convergence.
double epsilon0_estimate(const TrigPolynomial& v, double delta, const Epsilon0Params& params);

}  // namespace cocyclelab

#include "cocyclelab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cocyclelab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TrigPolynomial::TrigPolynomial(std::vector<Complex> coeffs, double rho)
    : coeffs_(std::move(coeffs)), rho_(rho) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0)
        throw std::invalid_argument("TrigPolynomial: coefficient count must be odd");
    if (!(rho_ > 0.0)) throw std::invalid_argument("TrigPolynomial: rho must be positive");
    degree_ = static_cast<int>(coeffs_.size() / 2);
}

TrigPolynomial TrigPolynomial::constant(Complex c, double rho) {
    return TrigPolynomial({c}, rho);
}

TrigPolynomial TrigPolynomial::two_cos(double rho) {
    return TrigPolynomial({Complex(1.0), Complex(0.0), Complex(1.0)}, rho);
}

Complex TrigPolynomial::coeff(int k) const {
    if (k < -degree_ || k > degree_) return {};
    return coeffs_[static_cast<std::size_t>(k + degree_)];
}

bool TrigPolynomial::real_on_axis() const {
    for (int k = 0; k <= degree_; ++k) {
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > 1e-14) return false;
    }
    return true;
}

Complex TrigPolynomial::eval(Complex z) const {
    // w^k for k = -K..K, built incrementally from w^{-K}
    const Complex w = std::exp(Complex(0.0, kTwoPi) * z);
    Complex wk = std::pow(w, -degree_);
    Complex sum = 0.0;
    for (const Complex& c : coeffs_) {
        sum += c * wk;
        wk *= w;
    }
    return sum;
}

double TrigPolynomial::eval_real(double x) const {
    const double t = kTwoPi * x;
    const Complex w(std::cos(t), std::sin(t));
    Complex wk = 1.0;
    // c_0 + sum_{k>=1} (c_k w^k + c_{-k} w^-k); for real_on_axis inputs the
    // imaginary parts cancel exactly pairwise
    double sum = coeff(0).real();
    for (int k = 1; k <= degree_; ++k) {
        wk *= w;
        const Complex term = coeff(k) * wk + coeff(-k) * std::conj(wk);
        sum += term.real();
    }
    return sum;
}

TrigPolynomial TrigPolynomial::reflect_conjugate() const {
    std::vector<Complex> out(coeffs_.size());
    const int n = static_cast<int>(coeffs_.size());
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = std::conj(coeffs_[static_cast<std::size_t>(n - 1 - j)]);
    return TrigPolynomial(std::move(out), rho_);
}

double TrigPolynomial::sup_norm_torus(int grid) const {
    double m = 0.0;
    for (int i = 0; i < grid; ++i)
        m = std::max(m, std::abs(eval(Complex(static_cast<double>(i) / grid, 0.0))));
    return m;
}

double TrigPolynomial::sup_norm_strip(double half_width, int nx, int ny) const {
    // |f| is 1-periodic in Re z, so the sup over |Re z| < 1 is a sup over one
    // period; the max over |Im z| < h of |e^{2 pi i k z}| sits on the boundary
    double m = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y = -half_width + (2.0 * half_width) * (j + 0.5) / ny;
        for (int i = 0; i < nx; ++i) {
            const double x = static_cast<double>(i) / nx;
            m = std::max(m, std::abs(eval(Complex(x, y))));
        }
    }
    // include the boundary rows, where the extreme frequencies dominate
    for (int i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / nx;
        m = std::max(m, std::abs(eval(Complex(x, half_width))));
        m = std::max(m, std::abs(eval(Complex(x, -half_width))));
    }
    return m;
}

namespace {

// antiderivative of (1/2) log(t^2 + eta^2)
double log_abs_antiderivative(double t, double eta) {
    if (t == 0.0 && eta == 0.0) return 0.0;
    if (eta == 0.0) return t * std::log(std::abs(t)) - t;
    return 0.5 * t * std::log(t * t + eta * eta) - t + eta * std::atan(t / eta);
}

}  // namespace

double log_potential_I(Complex zeta) {
    const double xi = zeta.real();
    const double eta = zeta.imag();
    return log_abs_antiderivative(1.0 - xi, eta) - log_abs_antiderivative(-xi, eta);
}

double log_potential_I_quadrature(Complex zeta, int panels) {
    // midpoint rule; adequate for eta != 0 and for the integrable real
    // singularity, where the midpoints avoid the singular point itself
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double y = (i + 0.5) / panels;
        sum += std::log(std::abs(Complex(y, 0.0) - zeta));
    }
    return sum / panels;
}

double epsilon0_estimate(const TrigPolynomial& v, double delta, const Epsilon0Params& params) {
    if (!(delta > 0.0 && delta < v.rho()))
        throw std::invalid_argument("epsilon0_estimate: need 0 < delta < rho");
    if (params.e1_count < 1 || params.x_grid < 1 || params.y_grid < 1)
        throw std::invalid_argument("epsilon0_estimate: grids must be nonempty");
    double inf_e = std::numeric_limits<double>::infinity();
    for (int ie = 0; ie < params.e1_count; ++ie) {
        const double e1 =
            params.e1_count == 1
                ? params.e1_min
                : params.e1_min + (params.e1_max - params.e1_min) * ie / (params.e1_count - 1);
        double sup_y = 0.0;
        for (int jy = 0; jy < params.y_grid; ++jy) {
            const double y = delta / 2.0 + (delta / 2.0) * (jy + 0.5) / params.y_grid;
            double inf_x = std::numeric_limits<double>::infinity();
            for (int ix = 0; ix < params.x_grid; ++ix) {
                const double x = static_cast<double>(ix) / params.x_grid;
                inf_x = std::min(inf_x, std::abs(v.eval(Complex(x, y)) - e1));
            }
            sup_y = std::max(sup_y, inf_x);
        }
        inf_e = std::min(inf_e, sup_y);
    }
    return inf_e;
}

}  // namespace cocyclelab

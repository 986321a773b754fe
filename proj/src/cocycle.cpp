#include "cocyclelab/cocycle.hpp"

#include "cocyclelab/summation.hpp"

#include <algorithm>
#include <cmath>

namespace cocyclelab {

namespace {
constexpr double kSingularTol = 1e-300;
}

JacobiModel::JacobiModel(double la, TrigPolynomial a_in, double lv, TrigPolynomial v_in,
                         CFExpansion omega_in)
    : lambda_a(la),
      a(std::move(a_in)),
      lambda_v(lv),
      v(std::move(v_in)),
      omega_cf(std::move(omega_in)),
      omega(omega_cf.omega) {
    if (!(lambda_a > 0.0) || !(lambda_v > 0.0))
        throw std::invalid_argument("JacobiModel: coupling numbers must be positive");
    if (!v.real_on_axis())
        throw std::invalid_argument("JacobiModel: potential v must be real on the real axis");
    a_tilde = a.reflect_conjugate();

    const int grid = std::max(4096, 4 * std::max(a.degree(), v.degree()) + 1);
    sup_a = a.sup_norm_torus(grid);
    sup_v = v.sup_norm_torus(grid);
    if (!(sup_a > 0.0)) throw std::invalid_argument("JacobiModel: a must not be identically zero");
    energy_radius = 2.0 * lambda_a * sup_a + lambda_v * sup_v;
    m0 = std::log(3.0 * lambda_a * sup_a + 2.0 * lambda_v * sup_v);

    std::vector<double> logs(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double av = std::abs(a.eval(Complex(static_cast<double>(i) / grid, 0.0)));
        logs[static_cast<std::size_t>(i)] =
            av < kSingularTol ? std::log(kSingularTol) : std::log(lambda_a * av);
    }
    drift = pairwise_mean(logs);
}

JacobiModel JacobiModel::schrodinger(double lambda_s, TrigPolynomial v, CFExpansion omega) {
    TrigPolynomial one = TrigPolynomial::constant(1.0, v.rho());
    return JacobiModel(1.0, std::move(one), lambda_s, std::move(v), std::move(omega));
}

bool JacobiModel::is_schrodinger() const {
    return lambda_a == 1.0 && a.degree() == 0 && a.coeff(0) == Complex(1.0);
}

OneStep one_step(const JacobiModel& model, Complex z, double E) {
    const Complex a_next = model.lambda_a * model.a.eval(z + model.omega);
    const Complex at_cur = model.lambda_a * model.a_tilde.eval(z);
    OneStep s;
    s.analytic(0, 0) = model.lambda_v * model.v.eval(z) - E;
    s.analytic(0, 1) = -at_cur;
    s.analytic(1, 0) = a_next;
    s.analytic(1, 1) = 0.0;
    if (std::abs(a_next) < kSingularTol) throw SingularStepError(0);
    s.raw = s.analytic / a_next;
    return s;
}

double d_log(const JacobiModel& model, Complex z) {
    const double abs_a = std::abs(model.a.eval(z + model.omega));
    const double abs_at = std::abs(model.a_tilde.eval(z));
    if (abs_a == 0.0 || abs_at == 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * std::log(model.lambda_a) + std::log(abs_a) + std::log(abs_at);
}

ScaledProduct scaled_product(const JacobiModel& model, double x, double E, long long n,
                             Gauge gauge) {
    if (n < 1) throw std::invalid_argument("scaled_product: n must be >= 1");
    ScaledProduct prod;
    prod.gauge = gauge;
    prod.unit = Mat2::identity();
    prod.n = n;

    const bool schrodinger = model.is_schrodinger();
    for (long long k = 1; k <= n; ++k) {
        const double xk = x + static_cast<double>(k) * model.omega;
        Mat2 factor;
        Complex a_next, at_cur;
        if (schrodinger) {
            a_next = 1.0;
            at_cur = 1.0;
        } else {
            a_next = model.lambda_a * model.a.eval(Complex(xk + model.omega, 0.0));
            at_cur = model.lambda_a * model.a_tilde.eval(Complex(xk, 0.0));
        }
        factor(0, 0) = model.lambda_v * model.v.eval_real(xk) - E;
        factor(0, 1) = -at_cur;
        factor(1, 0) = a_next;
        factor(1, 1) = 0.0;

        if (gauge == Gauge::raw && std::abs(a_next) < kSingularTol) throw SingularStepError(k);
        if (gauge == Gauge::unimodular && std::abs(factor.det()) < kSingularTol)
            throw SingularStepError(k);

        prod.unit = factor * prod.unit;
        const double norm = prod.unit.spectral_norm();
        prod.unit = prod.unit / norm;
        prod.log_scale += std::log(norm);

        switch (gauge) {
            case Gauge::analytic:
                break;
            case Gauge::raw:
                prod.log_scale -= std::log(std::abs(a_next));
                break;
            case Gauge::unimodular:
                // |det factor| from the assembled matrix; d_log is the
                // independent route used for sum_d
                prod.log_scale -= 0.5 * std::log(std::abs(factor.det()));
                break;
        }
        prod.sum_d += schrodinger ? 0.0 : d_log(model, Complex(xk, 0.0));
    }
    return prod;
}

std::vector<long long> orbit_zero_scan(const JacobiModel& model, double x, long long n,
                                       double tol) {
    std::vector<long long> hits;
    for (long long k = 0; k <= n; ++k) {
        const double xk = x + static_cast<double>(k) * model.omega;
        if (std::abs(model.a.eval(Complex(xk, 0.0))) < tol) hits.push_back(k);
    }
    return hits;
}

}  // namespace cocyclelab

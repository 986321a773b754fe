#include "cocyclelab/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cocyclelab {

namespace {

int sign_of(const BigInt& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

BigInt floor_div(const BigInt& a, const BigInt& b) {
    // b > 0
    BigInt q = a / b, r = a % b;
    if (r < 0) --q;
    return q;
}

void push_convergent(CFExpansion& cf, const BigInt& quotient) {
    // seeds: (p_0, q_0) = (0, 1), (p_{-1}, q_{-1}) = (1, 0)
    const std::size_t s = cf.convergents.size();
    BigInt pm1 = s >= 1 ? cf.convergents[s - 1].p : BigInt(0);
    BigInt qm1 = s >= 1 ? cf.convergents[s - 1].q : BigInt(1);
    BigInt pm2 = s >= 2 ? cf.convergents[s - 2].p : (s == 1 ? BigInt(0) : BigInt(1));
    BigInt qm2 = s >= 2 ? cf.convergents[s - 2].q : (s == 1 ? BigInt(1) : BigInt(0));
    cf.quotients.push_back(quotient);
    cf.convergents.push_back({quotient * pm1 + pm2, quotient * qm1 + qm2});
}

void fill_gap_exponents(CFExpansion& cf) {
    cf.gap_exponents.clear();
    for (std::size_t s = 0; s + 1 < cf.convergents.size(); ++s) {
        const double logq = log(cf.convergents[s + 1].q.convert_to<double>());
        cf.gap_exponents.push_back(logq / cf.convergents[s].q.convert_to<double>());
    }
}

double ulp_at(double x) { return std::nextafter(x, std::numeric_limits<double>::max()) - x; }

}  // namespace

double QuadraticSurd::to_double() const {
    return (p.convert_to<double>() + sqrt(d.convert_to<double>())) / q.convert_to<double>();
}

QuadraticSurd QuadraticSurd::golden() { return {BigInt(-1), BigInt(2), BigInt(5)}; }
QuadraticSurd QuadraticSurd::sqrt2m1() { return {BigInt(-1), BigInt(1), BigInt(2)}; }

int surd_sign(const BigInt& alpha, const BigInt& beta, const BigInt& d) {
    if (beta == 0) return sign_of(alpha);
    if (alpha == 0) return sign_of(beta);
    if (alpha > 0 && beta > 0) return 1;
    if (alpha < 0 && beta < 0) return -1;
    const BigInt a2 = alpha * alpha;
    const BigInt b2d = beta * beta * d;
    // d non-square, so a2 != b2d
    if (alpha > 0) return a2 > b2d ? 1 : -1;
    return a2 < b2d ? 1 : -1;
}

CFExpansion cf_expand(double omega, int depth) {
    if (!(omega > 0.0 && omega < 1.0)) throw std::domain_error("cf_expand: omega must be in (0,1)");
    if (depth < 1) throw std::domain_error("cf_expand: depth must be >= 1");
    CFExpansion cf;
    cf.omega = omega;
    double x = omega;
    for (int s = 0; s < depth; ++s) {
        const double inv = 1.0 / x;
        const double a = std::floor(inv);
        if (!(a >= 1.0) || a > 1e15) break;  // residual below float resolution
        push_convergent(cf, BigInt(static_cast<long long>(a)));
        const auto& c = cf.convergents.back();
        const double err =
            std::abs(omega - c.p.convert_to<double>() / c.q.convert_to<double>());
        if (err <= 4.0 * ulp_at(omega)) {
            cf.stopped_at_float_resolution = true;
            break;
        }
        x = inv - a;
    }
    fill_gap_exponents(cf);
    return cf;
}

CFExpansion cf_expand(const BigInt& num, const BigInt& den, int depth) {
    if (den <= 0 || num <= 0 || num >= den)
        throw std::domain_error("cf_expand: rational omega must be in (0,1)");
    if (depth < 1) throw std::domain_error("cf_expand: depth must be >= 1");
    CFExpansion cf;
    cf.omega = num.convert_to<double>() / den.convert_to<double>();
    cf.rational = std::make_pair(num, den);
    BigInt a = num, b = den;
    // omega = a/b with a < b; quotients of 1/omega expansion
    std::swap(a, b);
    for (int s = 0; s < depth && b != 0; ++s) {
        BigInt q = a / b, r = a % b;
        push_convergent(cf, q);
        a = b;
        b = r;
    }
    cf.terminating = (b == 0);
    fill_gap_exponents(cf);
    return cf;
}

CFExpansion cf_expand(const QuadraticSurd& x, int depth) {
    if (depth < 1) throw std::domain_error("cf_expand: depth must be >= 1");
    BigInt P = x.p, Q = x.q, D = x.d;
    if (Q <= 0) throw std::domain_error("cf_expand: surd denominator must be positive");
    if (surd_sign(P, 1, D) <= 0 || surd_sign(P - Q, 1, D) >= 0)
        throw std::domain_error("cf_expand: surd omega must be in (0,1)");
    if ((D - P * P) % Q != 0) {
        // normalize so that Q | (D - P^2)
        P *= Q;
        D *= Q * Q;
        Q *= Q;
    }
    CFExpansion cf;
    cf.omega = x.to_double();
    cf.surd = x;
    // skip a_0 = 0, then run the standard P,Q recurrence
    {
        BigInt s = sqrt(D);
        BigInt a0 = floor_div(P + s, Q);
        P = a0 * Q - P;
        Q = (D - P * P) / Q;
    }
    for (int i = 0; i < depth; ++i) {
        BigInt s = sqrt(D);
        BigInt a = floor_div(P + s, Q);
        push_convergent(cf, a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    fill_gap_exponents(cf);
    return cf;
}

CFExpansion cf_from_quotients(const std::vector<BigInt>& quotients) {
    if (quotients.empty()) throw std::domain_error("cf_from_quotients: need at least one quotient");
    CFExpansion cf;
    for (const auto& a : quotients) {
        if (a < 1) throw std::domain_error("cf_from_quotients: quotients must be positive");
        push_convergent(cf, a);
    }
    // evaluate the truncated fraction from the back
    double t = 0.0;
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it)
        t = 1.0 / (it->convert_to<double>() + t);
    cf.omega = t;
    fill_gap_exponents(cf);
    return cf;
}

CFExpansion resolve_omega(const std::string& spec, int depth) {
    if (spec == "golden") return cf_expand(QuadraticSurd::golden(), depth);
    if (spec == "sqrt2m1") return cf_expand(QuadraticSurd::sqrt2m1(), depth);
    const auto slash = spec.find('/');
    if (slash != std::string::npos) {
        BigInt num(spec.substr(0, slash));
        BigInt den(spec.substr(slash + 1));
        return cf_expand(num, den, depth);
    }
    return cf_expand(std::stod(spec), depth);
}

std::optional<BetaHat> beta_hat(const CFExpansion& cf) {
    if (cf.terminating) return std::nullopt;
    if (cf.gap_exponents.empty()) return std::nullopt;
    BetaHat b;
    b.depth = cf.convergents.size();
    b.value = *std::max_element(cf.gap_exponents.begin(), cf.gap_exponents.end());
    const std::size_t tail = std::min<std::size_t>(3, cf.gap_exponents.size());
    b.tail = *std::max_element(cf.gap_exponents.end() - tail, cf.gap_exponents.end());
    return b;
}

double torus_distance(double x, double y) {
    double d = std::abs(x - y);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

NearestPoint nearest_orbit_index(double x, double xi, long long count, double step) {
    if (count < 1) throw std::domain_error("nearest_orbit_index: count must be >= 1");
    NearestPoint best{0, torus_distance(x, xi)};
    for (long long k = 1; k < count; ++k) {
        const double d = torus_distance(x + static_cast<double>(k) * step, xi);
        if (d < best.dist) best = {k, d};
    }
    return best;
}

DiophantineCheck diophantine_check(const CFExpansion& cf, double c_omega, double alpha,
                                   long long n_max) {
    if (c_omega <= 0 || alpha <= 0) throw std::domain_error("diophantine_check: c, alpha > 0");
    DiophantineCheck result{c_omega, alpha, n_max, {}};
    for (long long n = 2; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        const double bound = c_omega / (dn * std::pow(std::log(dn), alpha));
        if (torus_distance(dn * cf.omega, 0.0) < bound) result.violations.push_back(n);
    }
    return result;
}

namespace {

// sign of |omega - p/q| - rn/rd for surd omega, exact
int cmp_approx_error(const QuadraticSurd& w, const Convergent& c, const BigInt& rn,
                     const BigInt& rd) {
    const BigInt u = c.q * w.p - c.p * w.q;  // numerator of omega - p/q is (u + q*sqrt(d))/(q*w.q)
    const int sigma = surd_sign(u, c.q, w.d);
    // |omega - p/q| - rn/rd has the sign of sigma*u*rd - rn*q*w.q + sigma*q*rd*sqrt(d)
    return surd_sign(BigInt(sigma) * u * rd - rn * c.q * w.q, BigInt(sigma) * c.q * rd, w.d);
}

}  // namespace

std::optional<std::size_t> convergent_inequality_violation(const CFExpansion& cf) {
    for (std::size_t s = 0; s + 1 < cf.convergents.size(); ++s) {
        const auto& c = cf.convergents[s];
        const auto& cn = cf.convergents[s + 1];
        if (cf.surd) {
            // 1/(q(q' + q)) < |omega - p/q| < 1/(q q'), both exact
            if (cmp_approx_error(*cf.surd, c, BigInt(1), c.q * (cn.q + c.q)) <= 0) return s;
            if (cmp_approx_error(*cf.surd, c, BigInt(1), c.q * cn.q) >= 0) return s;
        } else {
            const double q = c.q.convert_to<double>();
            const double qn = cn.q.convert_to<double>();
            const double err = std::abs(cf.omega - c.p.convert_to<double>() / q);
            const double slack = 64.0 * ulp_at(1.0) * q;
            if (!(err > 1.0 / (q * (qn + q)) - slack)) return s;
            if (!(err < 1.0 / (q * qn) + slack)) return s;
        }
    }
    return std::nullopt;
}

}  // namespace cocyclelab

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cocyclelab {

using BigInt = boost::multiprecision::cpp_int;

// Value (p + sqrt(d)) / q with d a positive non-square and q > 0.
// Lets continued-fraction expansion and the approximation inequalities
// run in exact integer arithmetic.
struct QuadraticSurd {
    BigInt p;
    BigInt q;
    BigInt d;

    static QuadraticSurd golden();   // (sqrt(5) - 1) / 2
    static QuadraticSurd sqrt2m1();  // sqrt(2) - 1
    double to_double() const;
};

// Sign of alpha + beta * sqrt(d), exact. d must be a positive non-square.
int surd_sign(const BigInt& alpha, const BigInt& beta, const BigInt& d);

struct Convergent {
    BigInt p;
    BigInt q;
};

struct CFExpansion {
    double omega = 0.0;
    std::optional<std::pair<BigInt, BigInt>> rational;  // exact rational input
    std::optional<QuadraticSurd> surd;                  // exact quadratic input
    std::vector<BigInt> quotients;                      // a_1..a_S
    std::vector<Convergent> convergents;                // p_s/q_s, lowest terms
    std::vector<double> gap_exponents;                  // log(q_{s+1}) / q_s
    bool terminating = false;                 // exact rational, expansion finite
    bool stopped_at_float_resolution = false; // float input hit 4-ulp match

    std::size_t depth() const { return convergents.size(); }
};

// Continued-fraction expansion of omega in (0,1). Float input stops once the
// reconstructed convergent matches omega to within 4 ulps; beyond that the
// quotients are noise.
CFExpansion cf_expand(double omega, int depth);
CFExpansion cf_expand(const BigInt& num, const BigInt& den, int depth);
CFExpansion cf_expand(const QuadraticSurd& x, int depth);

// Builds an expansion from prescribed partial quotients (Liouville
// surrogates for experiments).
CFExpansion cf_from_quotients(const std::vector<BigInt>& quotients);

// Resolves "golden", "sqrt2m1", "p/q" or a decimal literal.
CFExpansion resolve_omega(const std::string& spec, int depth = 40);

struct BetaHat {
    double value = 0.0;       // max gap exponent over the truncation
    double tail = 0.0;        // max over the last three recorded gaps
    std::size_t depth = 0;    // number of convergents used
};

// Truncated Liouville exponent; nullopt for terminating expansions.
std::optional<BetaHat> beta_hat(const CFExpansion& cf);

// ||x - y|| = min_n |x - y + n|, in [0, 1/2].
double torus_distance(double x, double y);

struct NearestPoint {
    long long k0 = 0;
    double dist = 0.0;
};

// argmin over k in [0, count) of ||x + k*step - xi||; ties go to the
// smallest k.
NearestPoint nearest_orbit_index(double x, double xi, long long count, double step);

struct DiophantineCheck {
    double c_omega = 0.0;
    double alpha = 0.0;
    long long n_max = 0;
    std::vector<long long> violations;  // n with ||n omega|| < c/(n (log n)^alpha)
    bool holds() const { return violations.empty(); }
};

DiophantineCheck diophantine_check(const CFExpansion& cf, double c_omega, double alpha,
                                   long long n_max);

// Verifies 1/(q_s(q_{s+1}+q_s)) < |omega - p_s/q_s| < 1/(q_s q_{s+1}) for
// every s with s+1 <= S. Exact for surd-backed expansions, float-resolution
// otherwise. Returns the first failing index, or nullopt if all hold.
std::optional<std::size_t> convergent_inequality_violation(const CFExpansion& cf);

}  // namespace cocyclelab

#include "cocyclelab/avalanche.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cocyclelab {

namespace {

using HP = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

struct CxHP {
    HP re, im;

    CxHP operator+(const CxHP& o) const { return {re + o.re, im + o.im}; }
    CxHP operator-(const CxHP& o) const { return {re - o.re, im - o.im}; }
    CxHP operator*(const CxHP& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CxHP conj() const { return {re, -im}; }
    HP norm2() const { return re * re + im * im; }
};

struct MatHP {
    std::array<CxHP, 4> m;

    static MatHP from(const Mat2& a) {
        MatHP r;
        for (std::size_t i = 0; i < 4; ++i) r.m[i] = {HP(a.m[i].real()), HP(a.m[i].imag())};
        return r;
    }

    MatHP operator*(const MatHP& b) const {
        MatHP r;
        r.m[0] = m[0] * b.m[0] + m[1] * b.m[2];
        r.m[1] = m[0] * b.m[1] + m[1] * b.m[3];
        r.m[2] = m[2] * b.m[0] + m[3] * b.m[2];
        r.m[3] = m[2] * b.m[1] + m[3] * b.m[3];
        return r;
    }

    CxHP det() const {
        CxHP ad = m[0] * m[3];
        CxHP bc = m[1] * m[2];
        return {ad.re - bc.re, ad.im - bc.im};
    }

    HP log_spectral_norm() const {
        HP t = 0;
        for (const auto& e : m) t += e.norm2();
        const HP d = det().norm2();
        HP disc = t * t - 4 * d;
        if (disc < 0) disc = 0;
        return log((t + sqrt(disc)) / 2) / 2;
    }

    HP log_abs_det() const { return log(det().norm2()) / 2; }
};

double to_double_or_saturate(const HP& x) {
    const double d = x.convert_to<double>();
    return d;
}

// f(x) = sum_k c_k e^{2 pi i k x} at real x, one sincos then powers
CxHP eval_trig_hp(const TrigPolynomial& f, double x) {
    static const HP two_pi = 2 * acos(HP(-1));
    const int K = f.degree();
    const HP theta = two_pi * HP(x);
    const CxHP base{cos(theta), sin(theta)};
    const Complex c0 = f.coeff(0);
    CxHP acc{HP(c0.real()), HP(c0.imag())};
    CxHP pos{HP(1), HP(0)};
    for (int k = 1; k <= K; ++k) {
        pos = pos * base;
        const Complex cp = f.coeff(k), cn = f.coeff(-k);
        acc = acc + CxHP{HP(cp.real()), HP(cp.imag())} * pos +
              CxHP{HP(cn.real()), HP(cn.imag())} * pos.conj();
    }
    return acc;
}

constexpr double kSingularTol2 = 1e-300;  // on |.|^2

// known_log_dets: exact per-block log|det| when the caller tracked it through
// the factorization; the entry-wise det of a strongly hyperbolic block is
// cancellation noise once 2 log||A|| exceeds the working precision.
APReport ap_check_core(const std::vector<MatHP>& units, const std::vector<HP>& scales,
                       const std::vector<HP>* known_log_dets, double C_test) {
    const int n = static_cast<int>(units.size());
    if (n < 3) throw std::invalid_argument("ap_check: need at least 3 blocks");

    APReport report;
    report.n_blocks = n;
    report.C_test = C_test;

    std::vector<HP> log_norm(units.size());
    HP log_gamma;
    HP max_log_det;
    for (std::size_t j = 0; j < units.size(); ++j) {
        log_norm[j] = scales[j] + units[j].log_spectral_norm();
        if (j == 0 || log_norm[j] < log_gamma) log_gamma = log_norm[j];
        const HP ld = known_log_dets ? (*known_log_dets)[j]
                                     : units[j].log_abs_det() + 2 * scales[j];
        if (j == 0 || ld > max_log_det) max_log_det = ld;
    }
    report.log_gamma = to_double_or_saturate(log_gamma);
    report.gamma_bound = std::exp(report.log_gamma);
    report.det_ok = max_log_det <= HP(1e-12);
    report.size_ok = log_gamma > HP(std::log(static_cast<double>(n)));

    HP max_gap;
    HP sum_pair = 0;
    for (std::size_t j = 0; j + 1 < units.size(); ++j) {
        const HP log_pair =
            scales[j] + scales[j + 1] + (units[j + 1] * units[j]).log_spectral_norm();
        const HP gap = log_norm[j] + log_norm[j + 1] - log_pair;
        if (j == 0 || gap > max_gap) max_gap = gap;
        sum_pair += log_pair;
    }
    report.gap_ok = max_gap < log_gamma / 2;

    MatHP prod = units[0];
    HP sum_scale = scales[0];
    for (std::size_t j = 1; j < units.size(); ++j) {
        prod = units[j] * prod;
        sum_scale += scales[j];
    }
    const HP log_long = sum_scale + prod.log_spectral_norm();

    HP sum_inner = 0;
    for (std::size_t j = 1; j + 1 < units.size(); ++j) sum_inner += log_norm[j];

    HP lhs = log_long + sum_inner - sum_pair;
    if (lhs < 0) lhs = -lhs;
    report.lhs_residual = to_double_or_saturate(lhs);
    report.log_lhs_residual =
        lhs == 0 ? -std::numeric_limits<double>::infinity() : to_double_or_saturate(log(lhs));
    report.log_bound = std::log(C_test * n) - report.log_gamma;
    report.bound_value = std::exp(report.log_bound);
    return report;
}

}  // namespace

APReport ap_check(const std::vector<ScaledMat>& blocks, double C_test) {
    std::vector<MatHP> units;
    std::vector<HP> scales;
    units.reserve(blocks.size());
    scales.reserve(blocks.size());
    for (const auto& b : blocks) {
        units.push_back(MatHP::from(b.unit));
        scales.push_back(HP(b.log_scale));
    }
    return ap_check_core(units, scales, nullptr, C_test);
}

std::vector<ScaledMat> ap_blocks(const JacobiModel& model, double x, double E,
                                 long long block_len, int num_blocks, Gauge gauge) {
    if (num_blocks < 3) throw std::invalid_argument("ap_blocks: need at least 3 blocks");
    std::vector<ScaledMat> blocks;
    blocks.reserve(static_cast<std::size_t>(num_blocks));
    for (int j = 0; j < num_blocks; ++j) {
        const double xj =
            x + static_cast<double>(j) * static_cast<double>(block_len) * model.omega;
        blocks.push_back(scaled_product(model, xj, E, block_len, gauge).as_scaled_mat());
    }
    return blocks;
}

struct PreciseBlockSet::Impl {
    std::vector<MatHP> units;
    std::vector<HP> scales;
    std::vector<HP> log_dets;  // log|det| of each scaled block, tracked exactly
    long long block_len = 0;
};

PreciseBlockSet::PreciseBlockSet(const JacobiModel& model, double x, double E,
                                 long long block_len, int num_blocks, Gauge gauge)
    : impl_(std::make_unique<Impl>()) {
    if (num_blocks < 3) throw std::invalid_argument("PreciseBlockSet: need at least 3 blocks");
    if (block_len < 1) throw std::invalid_argument("PreciseBlockSet: block_len must be >= 1");
    impl_->block_len = block_len;

    const bool schrodinger = model.is_schrodinger();
    const HP la(model.lambda_a), lv(model.lambda_v), energy(E);
    for (int j = 0; j < num_blocks; ++j) {
        const double xj =
            x + static_cast<double>(j) * static_cast<double>(block_len) * model.omega;
        MatHP prod{{CxHP{HP(1), HP(0)}, CxHP{HP(0), HP(0)}, CxHP{HP(0), HP(0)},
                    CxHP{HP(1), HP(0)}}};
        HP scale = 0;
        HP log_det = 0;  // det of the product = product of factor dets
        for (long long k = 1; k <= block_len; ++k) {
            const double xk = xj + static_cast<double>(k) * model.omega;
            CxHP a_next{HP(1), HP(0)}, at_cur{HP(1), HP(0)};
            if (!schrodinger) {
                a_next = CxHP{la, HP(0)} * eval_trig_hp(model.a, xk + model.omega);
                at_cur = CxHP{la, HP(0)} * eval_trig_hp(model.a_tilde, xk);
            }
            MatHP factor;
            // v real on the axis by model validation; keep the real part
            factor.m[0] = CxHP{lv * eval_trig_hp(model.v, xk).re - energy, HP(0)};
            factor.m[1] = CxHP{-at_cur.re, -at_cur.im};
            factor.m[2] = a_next;
            factor.m[3] = CxHP{HP(0), HP(0)};

            const long long orbit_step = static_cast<long long>(j) * block_len + k;
            if (gauge == Gauge::raw && a_next.norm2() < kSingularTol2)
                throw SingularStepError(orbit_step);
            const HP det2 = factor.det().norm2();
            if (gauge == Gauge::unimodular && det2 < kSingularTol2)
                throw SingularStepError(orbit_step);

            prod = factor * prod;
            // analytic gauge tolerates singular factors; saturate instead of log(0)
            log_det += det2 == 0 ? HP(-1e308) : log(det2) / 2;
            switch (gauge) {
                case Gauge::analytic:
                    break;
                case Gauge::raw:
                    scale -= log(a_next.norm2()) / 2;
                    break;
                case Gauge::unimodular:
                    scale -= log(det2) / 4;
                    break;
            }
        }
        impl_->units.push_back(prod);
        impl_->scales.push_back(scale);
        impl_->log_dets.push_back(log_det + 2 * scale);
    }
}

PreciseBlockSet::PreciseBlockSet(PreciseBlockSet&&) noexcept = default;
PreciseBlockSet& PreciseBlockSet::operator=(PreciseBlockSet&&) noexcept = default;
PreciseBlockSet::~PreciseBlockSet() = default;

int PreciseBlockSet::size() const { return static_cast<int>(impl_->units.size()); }

long long PreciseBlockSet::block_len() const { return impl_->block_len; }

std::vector<ScaledMat> PreciseBlockSet::as_scaled_mats() const {
    std::vector<ScaledMat> out;
    out.reserve(impl_->units.size());
    for (std::size_t j = 0; j < impl_->units.size(); ++j) {
        const HP s = impl_->units[j].log_spectral_norm();
        const HP inv = exp(-s);
        ScaledMat b;
        for (std::size_t i = 0; i < 4; ++i) {
            const CxHP e = impl_->units[j].m[i];
            b.unit.m[i] = Complex((e.re * inv).convert_to<double>(),
                                  (e.im * inv).convert_to<double>());
        }
        b.log_scale = (impl_->scales[j] + s).convert_to<double>();
        out.push_back(b);
    }
    return out;
}

APReport ap_check(const PreciseBlockSet& blocks, double C_test) {
    return ap_check_core(blocks.impl_->units, blocks.impl_->scales, &blocks.impl_->log_dets,
                         C_test);
}

}  // namespace cocyclelab

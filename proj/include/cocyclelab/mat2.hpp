#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace cocyclelab {

// Row-major complex 2x2 matrix.
struct Mat2 {
    std::array<std::complex<double>, 4> m{};

    std::complex<double>& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const std::complex<double>& operator()(int r, int c) const {
        return m[static_cast<std::size_t>(2 * r + c)];
    }

    static Mat2 identity() {
        Mat2 a;
        a(0, 0) = 1.0;
        a(1, 1) = 1.0;
        return a;
    }

    std::complex<double> det() const { return m[0] * m[3] - m[1] * m[2]; }

    double frobenius2() const {
        double s = 0.0;
        for (const auto& e : m) s += std::norm(e);
        return s;
    }

    // largest singular value, closed form:
    // sigma1^2 = (t + sqrt(t^2 - 4 |det|^2)) / 2 with t = ||A||_F^2
    double spectral_norm() const {
        const double t = frobenius2();
        const double d = std::norm(det());
        const double disc = std::max(t * t - 4.0 * d, 0.0);
        return std::sqrt(0.5 * (t + std::sqrt(disc)));
    }

    Mat2 operator*(const Mat2& b) const {
        Mat2 r;
        r(0, 0) = (*this)(0, 0) * b(0, 0) + (*this)(0, 1) * b(1, 0);
        r(0, 1) = (*this)(0, 0) * b(0, 1) + (*this)(0, 1) * b(1, 1);
        r(1, 0) = (*this)(1, 0) * b(0, 0) + (*this)(1, 1) * b(1, 0);
        r(1, 1) = (*this)(1, 0) * b(0, 1) + (*this)(1, 1) * b(1, 1);
        return r;
    }

    Mat2 operator*(std::complex<double> s) const {
        Mat2 r = *this;
        for (auto& e : r.m) e *= s;
        return r;
    }

    Mat2 operator/(std::complex<double> s) const {
        Mat2 r = *this;
        for (auto& e : r.m) e /= s;
        return r;
    }
};

// Matrix stored as exp(log_scale) * unit, with unit kept near spectral norm 1.
struct ScaledMat {
    Mat2 unit;
    double log_scale = 0.0;

    double log_norm() const { return log_scale + std::log(unit.spectral_norm()); }
};

}  // namespace cocyclelab

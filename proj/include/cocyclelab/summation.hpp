#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cocyclelab {

// Fixed-order pairwise summation. The reduction tree depends only on the
// length, so results are reproducible regardless of how the inputs were
// produced (worker count, chunking).
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_se = 0.0;  // sqrt(SSR / (n - 2)), 0 when n <= 2
    std::size_t n = 0;
};

// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit f;
    f.n = x.size();
    if (f.n < 2) return f;
    const double nn = static_cast<double>(f.n);
    double mx = pairwise_mean(x), my = pairwise_mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ssr += r * r;
    }
    f.residual_se = f.n > 2 ? std::sqrt(ssr / (nn - 2.0)) : 0.0;
    return f;
}

}  // namespace cocyclelab

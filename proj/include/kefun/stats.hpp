#pragma once

#include <algorithm>
#include <cstddef>
#include <span>

namespace kefun {

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// One-sample KS distance against a continuous CDF.
template <class Cdf>
double ks_statistic_one_sample(std::span<const double> sorted, Cdf&& cdf);

/// Asymptotic Kolmogorov tail P(K > x).
double kolmogorov_survival(double x);

/// c(level) with P(K > c) = level.
double kolmogorov_quantile(double level);

/// Critical distance for the two-sample test at the given level.
double ks_critical_two_sample(std::size_t n, std::size_t m, double level);

/// Critical distance for the one-sample test at the given level.
double ks_critical_one_sample(std::size_t n, double level);

template <class Cdf>
double ks_statistic_one_sample(std::span<const double> sorted, Cdf&& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, f - lo, hi - f});
    }
    return d;
}

}  // namespace kefun

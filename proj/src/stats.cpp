#include "kefun/stats.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <vector>

#include "kefun/errors.hpp"

namespace kefun {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ParameterError("KS statistic needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.0) {
        // Jacobi-transformed series, fast for small x
        const double c = M_PI * M_PI / (8.0 * x * x);
        double cdf = 0.0;
        for (int k = 1; k <= 9; k += 2) cdf += std::exp(-static_cast<double>(k * k) * c);
        return 1.0 - std::sqrt(2.0 * M_PI) / x * cdf;
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double kolmogorov_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("test level must lie in (0, 1)");
    auto f = [level](double x) { return kolmogorov_survival(x) - level; };
    const auto tol = [](double lo, double hi) { return hi - lo < 1e-12; };
    const auto [lo, hi] = boost::math::tools::bisect(f, 0.05, 10.0, tol);
    return 0.5 * (lo + hi);
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double level) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return kolmogorov_quantile(level) * std::sqrt((nn + mm) / (nn * mm));
}

double ks_critical_one_sample(std::size_t n, double level) {
    return kolmogorov_quantile(level) / std::sqrt(static_cast<double>(n));
}

}  // namespace kefun

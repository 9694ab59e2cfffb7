#pragma once

#include <complex>
#include <functional>

namespace kefun {

struct QuadratureOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
    unsigned max_depth = 30;
};

/// Adaptive Gauss-Kronrod (15 points) on [a, b]; infinite bounds allowed.
/// Throws QuadratureFailure when the error estimate misses the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt = {});

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureOptions& opt = {});

}  // namespace kefun

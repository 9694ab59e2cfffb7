#include "kefun/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "kefun/errors.hpp"

namespace kefun {

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, opt.max_depth,
                                                                                       opt.rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > std::max(opt.abs_tol, 10.0 * opt.rel_tol * l1)) {
        std::ostringstream os;
        os << "adaptive quadrature on [" << a << ", " << b << "] did not converge (error estimate " << error
           << ", L1 " << l1 << ")";
        throw QuadratureFailure(os.str());
    }
    return value;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureOptions& opt) {
    const double re = integrate([&](double x) { return f(x).real(); }, a, b, opt);
    const double im = integrate([&](double x) { return f(x).imag(); }, a, b, opt);
    return {re, im};
}

}  // namespace kefun

#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "kefun/levy_model.hpp"

namespace kefun {

using Complex = std::complex<double>;

/// Levy-Khintchine exponent: E exp(i z X_1) = exp(Psi(z)).
Complex char_exponent(const LevyTriplet& triplet, double z);

/// Callable exponent. Carries the triplet when one is known, which lets the
/// growth-condition checkers answer symbolically.
class CharExponent {
public:
    explicit CharExponent(LevyTriplet triplet);
    CharExponent(std::function<Complex(double)> eval, std::optional<LevyTriplet> triplet = std::nullopt);

    Complex operator()(double z) const { return eval_(z); }
    [[nodiscard]] const std::optional<LevyTriplet>& triplet() const { return triplet_; }

private:
    std::function<Complex(double)> eval_;
    std::optional<LevyTriplet> triplet_;
};

namespace oscillatory {

// Integrals over 0 <= a < b <= inf used by the power-density terms.
// Each is accurate to ~1e-13 relative for p in (-3, 2).

/// int_a^b u^p (1 - cos u) du
double one_minus_cos(double p, double a, double b);
/// int_a^b u^p (u - sin u) du, b finite
double u_minus_sin(double p, double a, double b);
/// int_a^b u^p sin u du, a > 0 or p > -2
double sine(double p, double a, double b);

}  // namespace oscillatory

}  // namespace kefun

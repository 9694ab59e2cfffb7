#pragma once

#include <optional>
#include <vector>

#include "kefun/ext_real.hpp"

namespace kefun {

/// One piece of a deterministic integrand on [start, end).
struct IntegrandPiece {
    enum class Form { Constant, Exponential };

    double start = 0.0;
    ExtReal end;
    Form form = Form::Constant;
    double a = 0.0;  ///< constant value, or prefactor of a * exp(-b s)
    double b = 0.0;  ///< decay rate of the exponential form

    [[nodiscard]] double value(double s) const;
    [[nodiscard]] bool is_zero() const { return a == 0.0; }
    [[nodiscard]] ExtReal length() const { return end - ExtReal(start); }
    /// Smallest and largest |f| on the closure of the piece (0 at an infinite end).
    [[nodiscard]] std::pair<double, double> abs_range() const;
};

/// Piecewise constant/exponential function on [0, T) with T finite or infinite;
/// it vanishes beyond T.
class IntegrandFunction {
public:
    explicit IntegrandFunction(std::vector<IntegrandPiece> pieces);

    static IntegrandFunction constant(double c, ExtReal end);
    /// Value values[i] on [breaks[i], breaks[i+1]); breaks[0] must be 0.
    static IntegrandFunction step(const std::vector<double>& breaks, const std::vector<double>& values);
    static IntegrandFunction exponential(double a, double b, ExtReal end);

    [[nodiscard]] const std::vector<IntegrandPiece>& pieces() const { return pieces_; }
    [[nodiscard]] ExtReal domain_end() const { return pieces_.back().end; }
    [[nodiscard]] double operator()(double s) const;
    /// The function times the indicator of [0, t].
    [[nodiscard]] IntegrandFunction restricted(ExtReal t) const;

    /// Lebesgue measure of {s : f(s) != 0}.
    [[nodiscard]] ExtReal nonzero_measure() const;
    [[nodiscard]] bool strictly_positive() const;
    /// Preimages of Lebesgue null sets in R\{0} are null: every non-zero piece is strictly monotone.
    [[nodiscard]] bool lusin_n_inverse() const;
    /// Lebesgue measure of {s <= t : f(s) != 0} is positive for every t > 0.
    [[nodiscard]] bool nonzero_near_zero() const;
    /// Value and length of the leading piece when it is a non-zero constant.
    [[nodiscard]] std::optional<std::pair<double, ExtReal>> constant_near_zero() const;
    /// f(s) != 0 for almost every s in the domain.
    [[nodiscard]] bool nonzero_almost_everywhere() const;
    /// Integral of f over its domain.
    [[nodiscard]] ExtReal integral() const;
    /// Integral of |f|^k over its domain (k > 0).
    [[nodiscard]] ExtReal abs_power_integral(double k) const;

private:
    std::vector<IntegrandPiece> pieces_;
};

}  // namespace kefun

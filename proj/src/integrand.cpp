#include "kefun/integrand.hpp"

#include <cmath>

#include "kefun/errors.hpp"

namespace kefun {

double IntegrandPiece::value(double s) const {
    return form == Form::Constant ? a : a * std::exp(-b * s);
}

std::pair<double, double> IntegrandPiece::abs_range() const {
    const double at_start = std::abs(value(start));
    if (form == Form::Constant) return {at_start, at_start};
    const double at_end = end.is_finite() ? std::abs(value(end.value())) : 0.0;
    return {std::min(at_start, at_end), std::max(at_start, at_end)};
}

IntegrandFunction::IntegrandFunction(std::vector<IntegrandPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw SpecError("integrand needs at least one piece");
    double cursor = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        IntegrandPiece& p = pieces_[i];
        if (p.start != cursor) throw SpecError("integrand pieces must partition [0, T) without gaps");
        if (!(ExtReal(p.start) < p.end)) throw SpecError("integrand piece with empty interval");
        if (!p.end.is_finite() && i + 1 != pieces_.size()) throw SpecError("only the last integrand piece may be unbounded");
        if (!std::isfinite(p.a) || !std::isfinite(p.b)) throw SpecError("integrand parameters must be finite");
        if (p.form == IntegrandPiece::Form::Exponential && (p.b == 0.0 || p.a == 0.0)) {
            p.form = IntegrandPiece::Form::Constant;
            p.b = 0.0;
        }
        if (p.form == IntegrandPiece::Form::Exponential && !p.end.is_finite() && p.b < 0.0)
            throw SpecError("exponential integrand piece is unbounded on its infinite interval");
        if (p.end.is_finite()) cursor = p.end.value();
    }
}

IntegrandFunction IntegrandFunction::constant(double c, ExtReal end) {
    return IntegrandFunction({IntegrandPiece{0.0, end, IntegrandPiece::Form::Constant, c, 0.0}});
}

IntegrandFunction IntegrandFunction::step(const std::vector<double>& breaks, const std::vector<double>& values) {
    if (breaks.size() != values.size() + 1) throw SpecError("step integrand: need one more break than values");
    std::vector<IntegrandPiece> pieces;
    for (std::size_t i = 0; i < values.size(); ++i)
        pieces.push_back(IntegrandPiece{breaks[i], breaks[i + 1], IntegrandPiece::Form::Constant, values[i], 0.0});
    return IntegrandFunction(std::move(pieces));
}

IntegrandFunction IntegrandFunction::exponential(double a, double b, ExtReal end) {
    return IntegrandFunction({IntegrandPiece{0.0, end, IntegrandPiece::Form::Exponential, a, b}});
}

double IntegrandFunction::operator()(double s) const {
    for (const IntegrandPiece& p : pieces_)
        if (ExtReal(s) < p.end && p.start <= s) return p.value(s);
    return 0.0;
}

IntegrandFunction IntegrandFunction::restricted(ExtReal t) const {
    if (!(ExtReal(0.0) < t)) throw ParameterError("integration horizon must be positive");
    std::vector<IntegrandPiece> out;
    for (IntegrandPiece p : pieces_) {
        if (!(ExtReal(p.start) < t)) break;
        p.end = min(p.end, t);
        out.push_back(p);
    }
    return IntegrandFunction(std::move(out));
}

ExtReal IntegrandFunction::nonzero_measure() const {
    ExtReal total(0.0);
    for (const IntegrandPiece& p : pieces_)
        if (!p.is_zero()) total += p.length();
    return total;
}

bool IntegrandFunction::strictly_positive() const {
    for (const IntegrandPiece& p : pieces_)
        if (!(p.a > 0.0)) return false;
    return true;
}

bool IntegrandFunction::lusin_n_inverse() const {
    for (const IntegrandPiece& p : pieces_)
        if (!p.is_zero() && p.form == IntegrandPiece::Form::Constant) return false;
    return true;
}

bool IntegrandFunction::nonzero_near_zero() const { return !pieces_.front().is_zero(); }

std::optional<std::pair<double, ExtReal>> IntegrandFunction::constant_near_zero() const {
    const IntegrandPiece& p = pieces_.front();
    if (p.form == IntegrandPiece::Form::Constant && !p.is_zero()) return std::make_pair(p.a, p.length());
    return std::nullopt;
}

bool IntegrandFunction::nonzero_almost_everywhere() const {
    for (const IntegrandPiece& p : pieces_)
        if (p.is_zero()) return false;
    return true;
}

ExtReal IntegrandFunction::integral() const {
    ExtReal total(0.0);
    for (const IntegrandPiece& p : pieces_) {
        if (p.is_zero()) continue;
        if (p.form == IntegrandPiece::Form::Constant) {
            if (!p.end.is_finite()) return p.a > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
            total += ExtReal(p.a * (p.end.value() - p.start));
        } else {
            const double e0 = std::exp(-p.b * p.start);
            const double e1 = p.end.is_finite() ? std::exp(-p.b * p.end.value()) : 0.0;
            total += ExtReal(p.a * (e0 - e1) / p.b);
        }
    }
    return total;
}

ExtReal IntegrandFunction::abs_power_integral(double k) const {
    ExtReal total(0.0);
    for (const IntegrandPiece& p : pieces_) {
        if (p.is_zero()) continue;
        const double mag = std::pow(std::abs(p.a), k);
        if (p.form == IntegrandPiece::Form::Constant) {
            if (!p.end.is_finite()) return ExtReal::pos_inf();
            total += ExtReal(mag * (p.end.value() - p.start));
        } else {
            const double rate = k * p.b;
            const double e0 = std::exp(-rate * p.start);
            const double e1 = p.end.is_finite() ? std::exp(-rate * p.end.value()) : 0.0;
            total += ExtReal(mag * (e0 - e1) / rate);
        }
    }
    return total;
}

}  // namespace kefun

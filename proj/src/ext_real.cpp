#include "kefun/ext_real.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kefun {

ExtReal::ExtReal(double v) {
    if (std::isnan(v)) throw std::domain_error("ExtReal from NaN");
    if (std::isinf(v)) {
        kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    } else {
        value_ = v;
    }
}

double ExtReal::value() const {
    if (!is_finite()) throw std::domain_error("ExtReal::value on infinite number");
    return value_;
}

double ExtReal::to_double() const {
    switch (kind_) {
        case Kind::PosInf: return std::numeric_limits<double>::infinity();
        case Kind::NegInf: return -std::numeric_limits<double>::infinity();
        case Kind::Finite: break;
    }
    return value_;
}

std::string ExtReal::str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.is_finite() && b.is_finite()) return ExtReal(a.value_ + b.value_);
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
        throw std::domain_error("ExtReal: inf - inf is undefined");
    return a.is_finite() ? b : a;
}

ExtReal operator-(ExtReal a) {
    if (a.is_pos_inf()) return ExtReal::neg_inf();
    if (a.is_neg_inf()) return ExtReal::pos_inf();
    return ExtReal(-a.value_);
}

ExtReal scale(double c, ExtReal a) {
    if (c < 0) throw std::domain_error("ExtReal scale: negative factor");
    if (c == 0.0) return ExtReal(0.0);
    if (!a.is_finite()) return a;
    return ExtReal(c * a.value_);
}

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    auto rank = [](ExtReal::Kind k) {
        return k == ExtReal::Kind::NegInf ? 0 : (k == ExtReal::Kind::Finite ? 1 : 2);
    };
    if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
    if (a.is_finite()) return a.value_ <=> b.value_;
    return std::partial_ordering::equivalent;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
}

}  // namespace kefun

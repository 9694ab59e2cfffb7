#pragma once

#include <compare>
#include <string>

namespace kefun {

/// Extended real number with explicit infinities.
///
/// Infinite values are a separate state, never a floating-point sentinel, so
/// predicates such as "total mass is infinite" stay exact.
class ExtReal {
public:
    enum class Kind { NegInf, Finite, PosInf };

    constexpr ExtReal() = default;
    ExtReal(double v);  // NOLINT(google-explicit-constructor): finite values convert implicitly

    static constexpr ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
    static constexpr ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

    [[nodiscard]] constexpr Kind kind() const { return kind_; }
    [[nodiscard]] constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    [[nodiscard]] constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    [[nodiscard]] constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    /// Finite value; throws std::domain_error when infinite.
    [[nodiscard]] double value() const;
    /// IEEE view for output and plotting only.
    [[nodiscard]] double to_double() const;
    [[nodiscard]] std::string str() const;

    friend ExtReal operator+(ExtReal a, ExtReal b);
    friend ExtReal operator-(ExtReal a);
    friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }
    /// Product with a finite non-negative scalar (0 * inf = 0, measure convention).
    friend ExtReal scale(double c, ExtReal a);

    friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b);
    friend bool operator==(const ExtReal& a, const ExtReal& b);

    ExtReal& operator+=(ExtReal b) { return *this = *this + b; }

private:
    explicit constexpr ExtReal(Kind k) : kind_(k) {}

    Kind kind_ = Kind::Finite;
    double value_ = 0.0;
};

inline ExtReal min(ExtReal a, ExtReal b) { return (b < a) ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) { return (a < b) ? b : a; }

}  // namespace kefun

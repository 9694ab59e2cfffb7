#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kefun {

/// A real number known exactly: rational coefficient times one of
/// {1, sqrt(n), pi, e}. Used to tag jump locations so that irrationality of
/// ratios can be decided without looking at floating-point values.
class ExactNumber {
public:
    enum class Symbol { One, Sqrt, Pi, E };

    ExactNumber() = default;
    ExactNumber(std::int64_t num, std::int64_t den, Symbol sym = Symbol::One, std::int64_t radicand = 1);

    /// Parses forms like "-1", "3/4", "sqrt(2)", "-2*sqrt(3)/5", "pi/2", "e".
    static ExactNumber parse(std::string_view text);

    [[nodiscard]] double value() const;
    [[nodiscard]] std::string str() const;
    [[nodiscard]] bool is_zero() const { return num_ == 0; }

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    [[nodiscard]] Symbol symbol() const { return sym_; }
    [[nodiscard]] std::int64_t radicand() const { return radicand_; }

    /// Multiply by an integer (keeps the tag exact under integer scalings).
    [[nodiscard]] ExactNumber times(std::int64_t k) const;

    friend bool operator==(const ExactNumber&, const ExactNumber&) = default;

private:
    void normalize();

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    Symbol sym_ = Symbol::One;
    std::int64_t radicand_ = 1;
};

/// true if a/b is certainly irrational, false if certainly rational,
/// nullopt when undecided (e.g. pi/e). Both arguments must be non-zero.
std::optional<bool> ratio_is_irrational(const ExactNumber& a, const ExactNumber& b);

}  // namespace kefun

#include "kefun/exact_number.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "kefun/errors.hpp"

namespace kefun {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw SpecError("exact number: cannot parse '" + std::string(whole) + "'");
    return v;
}

std::string strip(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

}  // namespace

ExactNumber::ExactNumber(std::int64_t num, std::int64_t den, Symbol sym, std::int64_t radicand)
    : num_(num), den_(den), sym_(sym), radicand_(radicand) {
    if (den_ == 0) throw SpecError("exact number: zero denominator");
    normalize();
}

void ExactNumber::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        num_ = -num_;
    }
    if (sym_ == Symbol::Sqrt) {
        if (radicand_ <= 0) throw SpecError("exact number: sqrt of non-positive integer");
        // pull square factors out of the radicand
        for (std::int64_t f = 2; f * f <= radicand_; ++f) {
            while (radicand_ % (f * f) == 0) {
                radicand_ /= f * f;
                num_ *= f;
            }
        }
        if (radicand_ == 1) sym_ = Symbol::One;
    } else {
        radicand_ = 1;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) {
        den_ = 1;
        sym_ = Symbol::One;
        radicand_ = 1;
    }
}

ExactNumber ExactNumber::parse(std::string_view text) {
    const std::string s = strip(text);
    if (s.empty()) throw SpecError("exact number: empty string");
    std::string_view body(s);
    std::int64_t sign = 1;
    if (body.front() == '-' || body.front() == '+') {
        if (body.front() == '-') sign = -1;
        body.remove_prefix(1);
    }

    std::int64_t num = sign;
    std::int64_t den = 1;
    Symbol sym = Symbol::One;
    std::int64_t radicand = 1;
    bool have_symbol = false;

    std::vector<std::string_view> factors;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || body[i] == '*') {
            factors.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    for (std::string_view tok : factors) {
        // optional trailing "/q" applies to every factor kind
        std::string_view head = tok;
        std::int64_t divisor = 1;
        const auto close = tok.rfind(')');
        const auto slash = tok.rfind('/');
        if (slash != std::string_view::npos && (close == std::string_view::npos || slash > close)) {
            head = tok.substr(0, slash);
            divisor = parse_int(tok.substr(slash + 1), text);
        }
        if (head.starts_with("sqrt(") && head.ends_with(")")) {
            if (have_symbol) throw SpecError("exact number: at most one symbolic factor");
            have_symbol = true;
            sym = Symbol::Sqrt;
            radicand = parse_int(head.substr(5, head.size() - 6), text);
        } else if (head == "pi") {
            if (have_symbol) throw SpecError("exact number: at most one symbolic factor");
            have_symbol = true;
            sym = Symbol::Pi;
        } else if (head == "e") {
            if (have_symbol) throw SpecError("exact number: at most one symbolic factor");
            have_symbol = true;
            sym = Symbol::E;
        } else {
            num *= parse_int(head, text);
        }
        den *= divisor;
    }
    return ExactNumber(num, den, sym, radicand);
}

double ExactNumber::value() const {
    double base = static_cast<double>(num_) / static_cast<double>(den_);
    switch (sym_) {
        case Symbol::One: return base;
        case Symbol::Sqrt: return base * std::sqrt(static_cast<double>(radicand_));
        case Symbol::Pi: return base * std::numbers::pi;
        case Symbol::E: return base * std::numbers::e;
    }
    return base;
}

std::string ExactNumber::str() const {
    std::string sym;
    switch (sym_) {
        case Symbol::One: break;
        case Symbol::Sqrt: sym = "sqrt(" + std::to_string(radicand_) + ")"; break;
        case Symbol::Pi: sym = "pi"; break;
        case Symbol::E: sym = "e"; break;
    }
    std::string out;
    if (sym.empty()) {
        out = std::to_string(num_);
    } else if (num_ == 1) {
        out = sym;
    } else if (num_ == -1) {
        out = "-" + sym;
    } else {
        out = std::to_string(num_) + "*" + sym;
    }
    if (den_ != 1) out += "/" + std::to_string(den_);
    return out;
}

ExactNumber ExactNumber::times(std::int64_t k) const {
    return ExactNumber(num_ * k, den_, sym_, radicand_);
}

std::optional<bool> ratio_is_irrational(const ExactNumber& a, const ExactNumber& b) {
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    using S = ExactNumber::Symbol;
    const S sa = a.symbol();
    const S sb = b.symbol();
    const bool alg_a = sa == S::One || sa == S::Sqrt;
    const bool alg_b = sb == S::One || sb == S::Sqrt;
    if (alg_a && alg_b) {
        // sqrt(m)/sqrt(n) with m, n squarefree is rational iff m == n
        return a.radicand() != b.radicand();
    }
    if (alg_a != alg_b) return true;  // transcendental over algebraic
    if (sa == sb) return false;
    return std::nullopt;  // pi/e: open problem
}

}  // namespace kefun

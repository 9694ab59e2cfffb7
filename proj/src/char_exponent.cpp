#include "kefun/char_exponent.hpp"

#include <cmath>
#include <limits>

#include "kefun/errors.hpp"
#include "kefun/quadrature.hpp"

namespace kefun {

namespace oscillatory {

namespace {

constexpr double kSeriesEnd = 1.0;
constexpr double kAsymptoticStart = 64.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_int(double q, double a, double b) {
    const ExtReal v = power_integral(q, ExtReal(a), ExtReal(b));
    if (!v.is_finite()) throw std::domain_error("oscillatory integral: divergent power part");
    return v.value();
}

// sum_k sign_k / fact_k * int_a^b u^(p + shift + 2k) du
double series(double p, double a, double b, int first_k, int shift, bool alternating_from_plus, bool even_fact) {
    double sum = 0.0;
    double fact = 1.0;
    const int f0 = even_fact ? 2 * first_k : 2 * first_k + 1;
    for (int j = 2; j <= f0; ++j) fact *= j;
    for (int k = first_k; k < first_k + 30; ++k) {
        const double sign = (((k - first_k) % 2 == 0) == alternating_from_plus) ? 1.0 : -1.0;
        const double term = sign / fact * pow_int(p + shift + 2 * k, a, b);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        const int next = even_fact ? 2 * (k + 1) : 2 * (k + 1) + 1;
        fact *= static_cast<double>(next) * (next - 1);
    }
    return sum;
}

// Asymptotic antiderivative of u^p e^{iu} for u >= kAsymptoticStart.
Complex tail_antiderivative(double p, double u) {
    if (std::isinf(u)) return {0.0, 0.0};
    Complex coef(0.0, -1.0);
    Complex sum(0.0, 0.0);
    double prev = kInf;
    for (int k = 0; k < 60; ++k) {
        const Complex term = coef * std::pow(u, p - k);
        const double mag = std::abs(term);
        if (mag > prev) break;  // asymptotic series starts to diverge
        sum += term;
        if (mag <= 1e-18 * std::abs(sum)) break;
        prev = mag;
        coef *= Complex(0.0, p - k);
    }
    return std::exp(Complex(0.0, u)) * sum;
}

Complex tail_integral(double p, double a, double b) {
    if (std::isinf(b) && p >= 0.0) throw std::domain_error("oscillatory integral: divergent tail");
    return tail_antiderivative(p, b) - tail_antiderivative(p, a);
}

double middle(const std::function<double(double)>& f, double a, double b) {
    QuadratureOptions opt;
    opt.rel_tol = 1e-13;
    opt.abs_tol = 1e-16;
    return integrate(f, a, b, opt);
}

}  // namespace

double one_minus_cos(double p, double a, double b) {
    if (!(a < b)) return 0.0;
    double total = 0.0;
    if (a < kSeriesEnd) total += series(p, a, std::min(b, kSeriesEnd), 1, 0, true, true);
    const double m0 = std::max(a, kSeriesEnd);
    const double m1 = std::min(b, kAsymptoticStart);
    if (m0 < m1) {
        if (p == 0.0) {
            total += (m1 - m0) - (std::sin(m1) - std::sin(m0));
        } else {
            total += middle([p](double u) { return std::pow(u, p) * (1.0 - std::cos(u)); }, m0, m1);
        }
    }
    const double t0 = std::max(a, kAsymptoticStart);
    if (t0 < b) total += pow_int(p, t0, b) - tail_integral(p, t0, b).real();
    return total;
}

double u_minus_sin(double p, double a, double b) {
    if (!(a < b)) return 0.0;
    if (std::isinf(b)) throw std::domain_error("u_minus_sin: infinite upper bound");
    double total = 0.0;
    if (a < kSeriesEnd) total += series(p, a, std::min(b, kSeriesEnd), 1, 1, true, false);
    const double m0 = std::max(a, kSeriesEnd);
    const double m1 = std::min(b, kAsymptoticStart);
    if (m0 < m1) {
        if (p == 0.0) {
            total += 0.5 * (m1 * m1 - m0 * m0) - (std::cos(m0) - std::cos(m1));
        } else {
            total += middle([p](double u) { return std::pow(u, p) * (u - std::sin(u)); }, m0, m1);
        }
    }
    const double t0 = std::max(a, kAsymptoticStart);
    if (t0 < b) total += pow_int(p + 1.0, t0, b) - tail_integral(p, t0, b).imag();
    return total;
}

double sine(double p, double a, double b) {
    if (!(a < b)) return 0.0;
    double total = 0.0;
    if (a < kSeriesEnd) total += series(p, a, std::min(b, kSeriesEnd), 0, 1, true, false);
    const double m0 = std::max(a, kSeriesEnd);
    const double m1 = std::min(b, kAsymptoticStart);
    if (m0 < m1) {
        if (p == 0.0) {
            total += std::cos(m0) - std::cos(m1);
        } else {
            total += middle([p](double u) { return std::pow(u, p) * std::sin(u); }, m0, m1);
        }
    }
    const double t0 = std::max(a, kAsymptoticStart);
    if (t0 < b) total += tail_integral(p, t0, b).imag();
    return total;
}

}  // namespace oscillatory

namespace {

// e^{iw} - 1 - i w c, c in {0, 1}, accurate for small |w|
Complex atom_term(double w, bool compensate) {
    const double s = std::sin(0.5 * w);
    const double re = -2.0 * s * s;
    double im;
    if (compensate && std::abs(w) < 1e-2) {
        const double w2 = w * w;
        im = -w * w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0));
    } else {
        im = std::sin(w) - (compensate ? w : 0.0);
    }
    return {re, im};
}

Complex power_segment_term(const PowerSegment& s, double z) {
    const double p = s.exponent;
    const double lo = s.near.value();
    const double hi = s.far.to_double();
    const double factor = s.coef * std::pow(z, -p - 1.0);
    const double re = -factor * oscillatory::one_minus_cos(p, z * lo, z * hi);
    double im = 0.0;
    const double comp_hi = std::min(hi, 1.0);
    if (lo < comp_hi) im -= factor * oscillatory::u_minus_sin(p, z * lo, z * comp_hi);
    const double free_lo = std::max(lo, 1.0);
    if (free_lo < hi) im += factor * oscillatory::sine(p, z * free_lo, z * hi);
    return {re, s.side * im};
}

Complex lacunary_term(const LacunaryAtoms& lac, double z) {
    Complex sum(0.0, 0.0);
    for (const auto& t : lac.terms()) {
        const double g = -t.log2_abs;  // |x| = 2^-g
        const double w = z * std::exp2(-g);
        if (w < 1e-3) {
            // mass * (e^{iw} - 1 - iw) with mass = 2^{alpha g}, in scaled form
            const double re = -0.5 * z * z * std::exp2(g * (lac.alpha - 2.0)) * (1.0 - w * w / 12.0);
            const double im = -z * z * z * std::exp2(g * (lac.alpha - 3.0)) / 6.0;
            sum += Complex(re, lac.sign * im);
            if (std::abs(re) < 1e-300) break;
        } else {
            sum += std::exp2(g * lac.alpha) * atom_term(lac.sign * w, true);
        }
    }
    return sum;
}

}  // namespace

Complex char_exponent(const LevyTriplet& triplet, double z) {
    if (z == 0.0) return {0.0, 0.0};
    if (z < 0.0) return std::conj(char_exponent(triplet, -z));
    Complex psi(-0.5 * triplet.sigma2() * z * z, triplet.gamma() * z);
    const LevyMeasure& nu = triplet.measure();
    for (const Atom& a : nu.finite_atoms()) psi += a.mass * atom_term(z * a.location, std::abs(a.location) <= 1.0);
    for (const PowerSegment& s : nu.power_segments()) psi += power_segment_term(s, z);
    for (const LacunaryAtoms& l : nu.lacunary_parts()) psi += lacunary_term(l, z);
    return psi;
}

CharExponent::CharExponent(LevyTriplet triplet)
    : eval_([t = triplet](double z) { return char_exponent(t, z); }), triplet_(std::move(triplet)) {}

CharExponent::CharExponent(std::function<Complex(double)> eval, std::optional<LevyTriplet> triplet)
    : eval_(std::move(eval)), triplet_(std::move(triplet)) {}

}  // namespace kefun

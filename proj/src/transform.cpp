#include "kefun/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kefun/errors.hpp"
#include "kefun/quadrature.hpp"

namespace kefun {

namespace {

using Form = IntegrandPiece::Form;

class MeasureBuilder {
public:
    void add_atom(double loc, double mass, std::optional<ExactNumber> tag) {
        auto [it, inserted] = atoms_.try_emplace(loc, Atom{loc, mass, tag});
        if (!inserted) it->second.mass += mass;
    }
    void add(MeasureComponent c) { others_.push_back(std::move(c)); }
    /// Density coef * |y|^p on |y| in (lo, hi) on the given side.
    void add_side_density(int side, ExtReal lo, ExtReal hi, double coef, double p) {
        if (!(lo < hi) || !(coef > 0.0)) return;
        const DensityFamily fam = p == 0.0 ? DensityFamily::Constant : DensityFamily::Power;
        if (side > 0) {
            others_.push_back(DensityPiece{lo, hi, fam, coef, p});
        } else {
            others_.push_back(DensityPiece{-hi, -lo, fam, coef, p});
        }
    }
    LevyMeasure finish() {
        std::vector<MeasureComponent> parts;
        if (!atoms_.empty()) {
            Atoms a;
            for (auto& [loc, at] : atoms_) a.atoms.push_back(at);
            parts.push_back(std::move(a));
        }
        for (auto& c : others_) parts.push_back(std::move(c));
        return LevyMeasure(std::move(parts));
    }

private:
    std::map<double, Atom> atoms_;
    std::vector<MeasureComponent> others_;
};

std::optional<ExactNumber> scaled_tag(const std::optional<ExactNumber>& tag, double c) {
    if (!tag || c != std::round(c) || std::abs(c) > 2147483647.0) return std::nullopt;
    return tag->times(static_cast<std::int64_t>(c));
}

// int x (1{|k x| <= 1} - 1{|x| <= 1}) nu(dx) for |k| = v > 0
double compensation_shift(const LevyMeasure& nu, double v) {
    if (v == 1.0) return 0.0;
    if (v > 1.0) {
        const double lo = 1.0 / v;
        return -(nu.signed_moment(Interval::left_open(lo, 1.0)) + nu.signed_moment(Interval::right_open(-1.0, -lo)));
    }
    const double hi = 1.0 / v;
    return nu.signed_moment(Interval::left_open(1.0, hi)) + nu.signed_moment(Interval::right_open(-hi, -1.0));
}

double integrate_shift(const LevyMeasure& nu, double lo, double hi) {
    std::vector<double> cuts{lo, hi, 1.0};
    for (const Atom& a : nu.finite_atoms()) cuts.push_back(1.0 / std::abs(a.location));
    for (const PowerSegment& s : nu.power_segments()) {
        if (s.near > ExtReal(0.0) && s.near.is_finite()) cuts.push_back(1.0 / s.near.value());
        if (s.far.is_finite()) cuts.push_back(1.0 / s.far.value());
    }
    for (const LacunaryAtoms& l : nu.lacunary_parts())
        for (const auto& t : l.terms()) cuts.push_back(1.0 / std::abs(t.location));
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-15;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], lo);
        const double b = std::min(cuts[i + 1], hi);
        if (!(a < b)) continue;
        total += integrate([&](double v) { return compensation_shift(nu, v); }, a, b, opt);
    }
    return total;
}

void map_constant_piece(MeasureBuilder& out, const LevyMeasure& nu, double c, double len) {
    const double abs_c = std::abs(c);
    for (const Atom& at : nu.finite_atoms()) out.add_atom(c * at.location, len * at.mass, scaled_tag(at.exact, c));
    for (const auto& part : nu.components()) {
        if (const auto* d = std::get_if<DensityPiece>(&part)) {
            ExtReal lo = d->lo.is_finite() ? ExtReal(c * d->lo.value()) : (c > 0 ? d->lo : -d->lo);
            ExtReal hi = d->hi.is_finite() ? ExtReal(c * d->hi.value()) : (c > 0 ? d->hi : -d->hi);
            if (c < 0) std::swap(lo, hi);
            out.add(DensityPiece{lo, hi, d->family, len * d->coef * std::pow(abs_c, -d->exponent - 1.0), d->exponent});
        } else if (const auto* s = std::get_if<StablePiece>(&part)) {
            const double w = len * std::pow(abs_c, s->alpha);
            StablePiece img{s->alpha, w * s->c_plus, w * s->c_minus, abs_c * s->cutoff};
            if (c < 0) std::swap(img.c_plus, img.c_minus);
            out.add(img);
        } else if (std::holds_alternative<LacunaryAtoms>(part)) {
            throw UnsupportedCombination("image of a lacunary atom family under scaling is outside the catalog");
        }
    }
}

void tabulate(MeasureBuilder& out, std::size_t& cells, int side, double v_lo, double v_hi,
              const std::vector<double>& kinks, int per_decade, const std::function<double(double)>& density) {
    std::vector<double> cuts{v_lo, v_hi};
    for (double k : kinks)
        if (k > v_lo && k < v_hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-300;
    for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
        const double a = cuts[r];
        const double b = cuts[r + 1];
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log10(b / a) * per_decade)));
        const double ratio = std::pow(b / a, 1.0 / static_cast<double>(n));
        double left = a;
        for (std::size_t i = 0; i < n; ++i) {
            const double right = (i + 1 == n) ? b : left * ratio;
            const double mass = integrate(density, left, right, opt);
            out.add_side_density(side, left, right, mass / (right - left), 0.0);
            ++cells;
            left = right;
        }
    }
}

void map_exponential_piece(MeasureBuilder& out, std::size_t& cells, const LevyMeasure& nu, const IntegrandPiece& p,
                           const TransformOptions& opt) {
    const auto [f_min, f_max] = p.abs_range();
    const int sign = p.a > 0 ? 1 : -1;
    const double rate = std::abs(p.b);

    for (const Atom& at : nu.finite_atoms()) {
        const double x = std::abs(at.location);
        const int side = sign * (at.location > 0 ? 1 : -1);
        out.add_side_density(side, f_min * x, f_max * x, at.mass / rate, -1.0);
    }
    if (!nu.lacunary_parts().empty())
        throw UnsupportedCombination("image of a lacunary atom family under an exponential integrand is outside the catalog");

    for (const PowerSegment& s : nu.power_segments()) {
        const int side = sign * s.side;
        const double kappa = s.coef / rate;
        const double q = -s.exponent - 2.0;
        const bool touches_zero = s.near == ExtReal(0.0);
        const bool unbounded = !s.far.is_finite();
        const double near = s.near.value();
        const double far = s.far.to_double();

        if (touches_zero && f_min == 0.0)
            throw UnsupportedCombination("image of a measure with infinite small-jump activity under an integrand decaying to 0");

        auto density = [=](double v) {
            const double lo = std::max(f_min, unbounded ? 0.0 : v / far);
            const double hi = touches_zero ? f_max : std::min(f_max, v / near);
            if (!(lo < hi)) return 0.0;
            return kappa * std::pow(v, s.exponent) * power_integral(q, ExtReal(lo), ExtReal(hi)).value();
        };

        double v_lo = 0.0;
        double v_hi = 0.0;
        if (touches_zero) {
            const double core = kappa * power_integral(q, ExtReal(f_min), ExtReal(f_max)).value();
            if (unbounded) {
                out.add_side_density(side, ExtReal(0.0), ExtReal::pos_inf(), core, s.exponent);
                continue;
            }
            out.add_side_density(side, ExtReal(0.0), far * f_min, core, s.exponent);
            v_lo = far * f_min;
            v_hi = far * f_max;
        } else if (f_min == 0.0) {
            const double core = kappa * power_integral(s.exponent, s.near, s.far).value();
            out.add_side_density(side, ExtReal(0.0), near * f_max, core, -1.0);
            if (unbounded) throw UnsupportedCombination("unbounded density under an integrand decaying to 0");
            v_lo = near * f_max;
            v_hi = far * f_max;
        } else {
            if (unbounded) throw UnsupportedCombination("unbounded density under a non-constant integrand");
            v_lo = near * f_min;
            v_hi = far * f_max;
        }
        if (!opt.tabulate)
            throw UnsupportedCombination("image measure leaves the catalog and tabulation is disabled");
        const std::vector<double> kinks{near * f_min, near * f_max, far * f_min, far * f_max};
        tabulate(out, cells, side, v_lo, v_hi, kinks, opt.cells_per_decade, density);
    }
}

}  // namespace

TransformResult transform_triplet_detailed(const IntegrandFunction& f_in, ExtReal t, const LevyTriplet& eta,
                                           const TransformOptions& opt) {
    const IntegrandFunction f = f_in.restricted(t);
    const LevyMeasure& nu = eta.measure();
    const bool has_jumps = !nu.is_zero();

    double sigma2 = 0.0;
    if (eta.sigma2() > 0.0) {
        const ExtReal sq = f.abs_power_integral(2.0);
        if (!sq.is_finite()) throw ParameterError("integral of f^2 diverges; the stochastic integral does not exist");
        sigma2 = eta.sigma2() * sq.value();
    }

    MeasureBuilder builder;
    std::size_t cells = 0;
    double gamma = 0.0;
    for (const IntegrandPiece& p : f.pieces()) {
        if (p.is_zero()) continue;
        if (p.form == Form::Constant) {
            if (!p.length().is_finite()) {
                if (has_jumps || eta.gamma() != 0.0)
                    throw ParameterError("non-zero constant integrand on an infinite interval");
                continue;
            }
            const double len = p.length().value();
            if (has_jumps) map_constant_piece(builder, nu, p.a, len);
            gamma += len * p.a * (eta.gamma() + (has_jumps ? compensation_shift(nu, std::abs(p.a)) : 0.0));
        } else {
            const auto [f_min, f_max] = p.abs_range();
            const double sign = p.a > 0 ? 1.0 : -1.0;
            const double rate = std::abs(p.b);
            if (has_jumps) map_exponential_piece(builder, cells, nu, p, opt);
            double g = eta.gamma() * (f_max - f_min);
            if (has_jumps) g += integrate_shift(nu, f_min, f_max);
            gamma += sign / rate * g;
        }
    }

    LevyMeasure image = builder.finish();
    TransformResult result;
    result.tabulated_cells = cells;
    result.cells_per_decade = cells > 0 ? opt.cells_per_decade : 0;
    if (const auto d = eta.drift()) {
        double drift = 0.0;
        if (*d != 0.0) {
            const ExtReal integral = f.integral();
            if (!integral.is_finite()) throw ParameterError("integral of f diverges against a non-zero drift");
            drift = *d * integral.value();
        }
        result.triplet = LevyTriplet::with_both(sigma2, std::move(image), gamma, drift);
    } else {
        result.triplet = LevyTriplet::from_gamma(sigma2, std::move(image), gamma);
    }
    return result;
}

CharExponent transform_exponent(const IntegrandFunction& f_in, ExtReal t, const LevyTriplet& eta) {
    const IntegrandFunction f = f_in.restricted(t);
    auto eval = [f, eta](double z) -> Complex {
        Complex total(0.0, 0.0);
        for (const IntegrandPiece& p : f.pieces()) {
            if (p.is_zero()) continue;
            if (p.form == Form::Constant) {
                if (!p.length().is_finite()) throw ParameterError("non-zero constant integrand on an infinite interval");
                total += p.length().value() * char_exponent(eta, p.a * z);
            } else {
                const auto [f_min, f_max] = p.abs_range();
                const double sign = p.a > 0 ? 1.0 : -1.0;
                const double rate = std::abs(p.b);
                QuadratureOptions opt;
                opt.rel_tol = 1e-10;
                opt.abs_tol = 1e-14;
                total += integrate_complex(
                    [&](double v) { return char_exponent(eta, sign * v * z) / (rate * v); }, f_min, f_max, opt);
            }
        }
        return total;
    };
    return CharExponent(eval);
}

}  // namespace kefun

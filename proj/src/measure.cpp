#include "kefun/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "kefun/errors.hpp"

namespace kefun {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// |x|-range of a signed set on one side of the origin.
std::pair<ExtReal, ExtReal> side_range(const Interval& set, int side) {
    if (side > 0) return {max(set.lo, ExtReal(0.0)), set.hi};
    return {max(-set.hi, ExtReal(0.0)), -set.lo};
}

// Does the set contain (0, e) (side > 0) or (-e, 0) (side < 0) for small e?
bool reaches_origin(const Interval& set, int side) {
    if (side > 0) return set.lo <= ExtReal(0.0) && ExtReal(0.0) < set.hi;
    return set.lo < ExtReal(0.0) && ExtReal(0.0) <= set.hi;
}

ExtReal segment_moment(const PowerSegment& s, const Interval& set, double k) {
    auto [a, b] = side_range(set, s.side);
    a = max(a, s.near);
    b = min(b, s.far);
    if (!(a < b)) return ExtReal(0.0);
    return scale(s.coef, power_integral(s.exponent + k, a, b));
}

ExtReal lacunary_moment(const LacunaryAtoms& lac, const Interval& set, double k) {
    if (reaches_origin(set, lac.sign) && k <= lac.alpha) return ExtReal::pos_inf();
    ExtReal total(0.0);
    for (const auto& t : lac.terms()) {
        if (set.contains(t.location)) total += ExtReal(std::exp2(t.log2_abs * (k - lac.alpha)));
    }
    return total;
}

std::string where(std::size_t i) { return "measure component " + std::to_string(i) + ": "; }

}  // namespace

ExtReal power_integral(double q, ExtReal a, ExtReal b) {
    if (a < ExtReal(0.0) || b < a) throw std::domain_error("power_integral: need 0 <= a <= b");
    if (a == b) return ExtReal(0.0);
    const bool at_zero = a == ExtReal(0.0);
    const bool at_inf = b.is_pos_inf();
    if (q == -1.0) {
        if (at_zero || at_inf) return ExtReal::pos_inf();
        return ExtReal(std::log(b.value() / a.value()));
    }
    const double e = q + 1.0;
    if (q < -1.0) {
        if (at_zero) return ExtReal::pos_inf();
        const double upper = at_inf ? 0.0 : std::pow(b.value(), e);
        return ExtReal((upper - std::pow(a.value(), e)) / e);
    }
    if (at_inf) return ExtReal::pos_inf();
    const double lower = at_zero ? 0.0 : std::pow(a.value(), e);
    return ExtReal((std::pow(b.value(), e) - lower) / e);
}

DensityPiece DensityPiece::constant(ExtReal lo, ExtReal hi, double c) {
    return DensityPiece{lo, hi, DensityFamily::Constant, c, 0.0};
}

DensityPiece DensityPiece::power(ExtReal lo, ExtReal hi, double c, double p) {
    return DensityPiece{lo, hi, DensityFamily::Power, c, p};
}

ExtReal DensityPiece::total_mass() const { return LevyMeasure({*this}).total_mass(); }

std::vector<LacunaryAtoms::Term> LacunaryAtoms::terms() const {
    std::vector<Term> out;
    double g_pow = growth;
    while (g_pow <= 1074.0) {
        const double loc = sign * std::exp2(-g_pow);
        out.push_back(Term{loc, -g_pow});
        g_pow *= growth;
    }
    return out;
}

LevyMeasure::LevyMeasure(std::vector<MeasureComponent> components) : parts_(std::move(components)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        std::visit(
            overloaded{
                [&](const Atoms& a) {
                    std::vector<double> locs;
                    for (const Atom& at : a.atoms) {
                        if (!std::isfinite(at.location) || at.location == 0.0)
                            throw SpecError(where(i) + "atom location must be finite and non-zero");
                        if (!(at.mass > 0.0) || !std::isfinite(at.mass))
                            throw SpecError(where(i) + "atom mass must be positive and finite");
                        locs.push_back(at.location);
                    }
                    std::sort(locs.begin(), locs.end());
                    if (std::adjacent_find(locs.begin(), locs.end()) != locs.end())
                        throw SpecError(where(i) + "atom locations must be distinct");
                },
                [&](const DensityPiece& d) {
                    if (!(d.lo < d.hi)) throw SpecError(where(i) + "density interval needs lo < hi");
                    if (d.lo < ExtReal(0.0) && ExtReal(0.0) < d.hi)
                        throw SpecError(where(i) + "density interval may not contain 0 in its interior");
                    if (!(d.coef > 0.0) || !std::isfinite(d.coef))
                        throw SpecError(where(i) + "density coefficient must be positive");
                    if (d.family == DensityFamily::Constant && d.exponent != 0.0)
                        throw SpecError(where(i) + "constant density has no exponent");
                    const bool touches_zero = d.lo == ExtReal(0.0) || d.hi == ExtReal(0.0);
                    const bool unbounded = !d.lo.is_finite() || !d.hi.is_finite();
                    if (touches_zero && d.exponent <= -3.0)
                        throw SpecError(where(i) + "density not integrable against x^2 near 0");
                    if (unbounded && d.exponent >= -1.0)
                        throw SpecError(where(i) + "density has infinite mass away from 0");
                },
                [&](const StablePiece& s) {
                    if (!(s.alpha > 0.0 && s.alpha < 2.0)) throw SpecError(where(i) + "stable alpha must lie in (0,2)");
                    if (s.c_plus < 0.0 || s.c_minus < 0.0 || !(s.c_plus + s.c_minus > 0.0))
                        throw SpecError(where(i) + "stable coefficients must be >= 0 with positive sum");
                    if (!(s.cutoff > 0.0) || !std::isfinite(s.cutoff))
                        throw SpecError(where(i) + "stable cutoff must be positive and finite");
                },
                [&](const LacunaryAtoms& l) {
                    if (!(l.alpha > 0.0 && l.alpha < 2.0)) throw SpecError(where(i) + "lacunary alpha must lie in (0,2)");
                    if (l.growth < 2) throw SpecError(where(i) + "lacunary growth must be >= 2");
                    if (l.sign != 1 && l.sign != -1) throw SpecError(where(i) + "lacunary sign must be +1 or -1");
                },
            },
            parts_[i]);
    }
}

std::vector<PowerSegment> LevyMeasure::power_segments() const {
    std::vector<PowerSegment> out;
    for (const auto& part : parts_) {
        if (const auto* d = std::get_if<DensityPiece>(&part)) {
            if (ExtReal(0.0) <= d->lo) {
                out.push_back(PowerSegment{1, d->lo, d->hi, d->coef, d->exponent});
            } else {
                out.push_back(PowerSegment{-1, -d->hi, -d->lo, d->coef, d->exponent});
            }
        } else if (const auto* s = std::get_if<StablePiece>(&part)) {
            const double p = -1.0 - s->alpha;
            if (s->c_plus > 0.0) out.push_back(PowerSegment{1, ExtReal(0.0), s->cutoff, s->c_plus, p});
            if (s->c_minus > 0.0) out.push_back(PowerSegment{-1, ExtReal(0.0), s->cutoff, s->c_minus, p});
        }
    }
    return out;
}

std::vector<Atom> LevyMeasure::finite_atoms() const {
    std::map<double, Atom> merged;
    for (const auto& part : parts_) {
        if (const auto* a = std::get_if<Atoms>(&part)) {
            for (const Atom& at : a->atoms) {
                auto [it, inserted] = merged.try_emplace(at.location, at);
                if (!inserted) {
                    it->second.mass += at.mass;
                    if (!it->second.exact) it->second.exact = at.exact;
                }
            }
        }
    }
    std::vector<Atom> out;
    for (auto& [loc, at] : merged) out.push_back(at);
    return out;
}

std::vector<LacunaryAtoms> LevyMeasure::lacunary_parts() const {
    std::vector<LacunaryAtoms> out;
    for (const auto& part : parts_)
        if (const auto* l = std::get_if<LacunaryAtoms>(&part)) out.push_back(*l);
    return out;
}

ExtReal LevyMeasure::power_moment(const Interval& set, double k) const {
    ExtReal total(0.0);
    for (const Atom& at : finite_atoms())
        if (set.contains(at.location)) total += ExtReal(at.mass * std::pow(std::abs(at.location), k));
    for (const PowerSegment& s : power_segments()) total += segment_moment(s, set, k);
    for (const LacunaryAtoms& l : lacunary_parts()) total += lacunary_moment(l, set, k);
    return total;
}

ExtReal LevyMeasure::mass(const Interval& set) const { return power_moment(set, 0.0); }

ExtReal LevyMeasure::positive_mass() const {
    return mass(Interval::open(0.0, ExtReal::pos_inf()));
}

ExtReal LevyMeasure::negative_mass() const {
    return mass(Interval::open(ExtReal::neg_inf(), 0.0));
}

ExtReal LevyMeasure::abs_moment(double eps) const { return power_moment(Interval::closed(-eps, eps), 1.0); }

ExtReal LevyMeasure::second_moment(double eps) const { return power_moment(Interval::closed(-eps, eps), 2.0); }

double LevyMeasure::signed_moment(const Interval& set) const {
    Interval pos = set;
    if (pos.lo <= ExtReal(0.0)) {
        pos.lo = 0.0;
        pos.lo_closed = false;
    }
    Interval neg = set;
    if (ExtReal(0.0) <= neg.hi) {
        neg.hi = 0.0;
        neg.hi_closed = false;
    }
    const ExtReal p = (pos.lo < pos.hi) ? power_moment(pos, 1.0) : ExtReal(0.0);
    const ExtReal n = (neg.lo < neg.hi) ? power_moment(neg, 1.0) : ExtReal(0.0);
    if (!p.is_finite() || !n.is_finite())
        throw SpecError("signed first moment of the Levy measure is not absolutely convergent on the requested set");
    return p.value() - n.value();
}

ClosedSet LevyMeasure::support() const {
    ClosedSet out;
    for (const Atom& at : finite_atoms()) out.add(Segment{at.location, at.location});
    for (const PowerSegment& s : power_segments()) {
        if (s.side > 0) {
            out.add(Segment{s.near, s.far});
        } else {
            out.add(Segment{-s.far, -s.near});
        }
    }
    for (const LacunaryAtoms& l : lacunary_parts()) {
        out.add(Segment{0.0, 0.0});
        for (const auto& t : l.terms()) out.add(Segment{t.location, t.location});
    }
    return out;
}

bool LevyMeasure::zero_in_support() const { return support().contains(0.0); }

ExtReal LevyMeasure::ac_mass() const {
    ExtReal total(0.0);
    for (const PowerSegment& s : power_segments()) total += segment_moment(s, Interval::whole(), 0.0);
    return total;
}

SmallJumpIndex LevyMeasure::small_jump_index() const {
    SmallJumpIndex idx;
    for (const PowerSegment& s : power_segments()) {
        if (!(s.near == ExtReal(0.0))) continue;
        if (!idx.min_exponent || s.exponent < *idx.min_exponent) {
            idx.min_exponent = s.exponent;
            idx.coef_at_min = s.coef;
        } else if (s.exponent == *idx.min_exponent) {
            idx.coef_at_min += s.coef;
        }
    }
    idx.lacunary = !lacunary_parts().empty();
    return idx;
}

}  // namespace kefun

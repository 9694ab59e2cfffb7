#include "kefun/support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kefun/errors.hpp"

namespace kefun {

std::string to_string(SupportShape s) {
    switch (s) {
        case SupportShape::Point: return "point";
        case SupportShape::ClosedInterval: return "closed_interval";
        case SupportShape::HalfLine: return "half_line";
        case SupportShape::FullLine: return "full_line";
        case SupportShape::PointPlusHalfLine: return "point_plus_half_line";
        case SupportShape::SemigroupClosure: return "semigroup_closure";
        case SupportShape::UnionOfIntervals: return "union_of_intervals";
    }
    return "?";
}

std::string to_string(SupportRelation r) { return r == SupportRelation::Equal ? "equal" : "superset"; }

SupportShape support_shape_from_string(const std::string& s) {
    for (SupportShape shape : {SupportShape::Point, SupportShape::ClosedInterval, SupportShape::HalfLine,
                               SupportShape::FullLine, SupportShape::PointPlusHalfLine, SupportShape::SemigroupClosure,
                               SupportShape::UnionOfIntervals})
        if (to_string(shape) == s) return shape;
    throw SpecError("unknown support shape '" + s + "'");
}

SupportDescriptor SupportDescriptor::zero() {
    SupportDescriptor d;
    d.shape = SupportShape::Point;
    d.set = ClosedSet::point(0.0);
    return d;
}

SupportDescriptor SupportDescriptor::interval(double lo, double hi) {
    SupportDescriptor d;
    d.shape = SupportShape::ClosedInterval;
    d.set = ClosedSet::segment(lo, hi);
    return d;
}

SupportDescriptor SupportDescriptor::half_line_up(double from) {
    SupportDescriptor d;
    d.shape = SupportShape::HalfLine;
    d.set = ClosedSet::segment(from, ExtReal::pos_inf());
    return d;
}

SupportDescriptor SupportDescriptor::half_line_down(double to) {
    SupportDescriptor d;
    d.shape = SupportShape::HalfLine;
    d.set = ClosedSet::segment(ExtReal::neg_inf(), to);
    return d;
}

SupportDescriptor SupportDescriptor::full_line() {
    SupportDescriptor d;
    d.shape = SupportShape::FullLine;
    d.set = ClosedSet::whole_line();
    return d;
}

SupportDescriptor SupportDescriptor::point_plus_half_line(double from, bool up) {
    SupportDescriptor d;
    d.shape = SupportShape::PointPlusHalfLine;
    d.set = up ? ClosedSet::segment(from, ExtReal::pos_inf()) : ClosedSet::segment(ExtReal::neg_inf(), from);
    d.set.add(Segment{0.0, 0.0});
    return d;
}

SupportDescriptor SupportDescriptor::union_of(ClosedSet set) {
    SupportDescriptor d;
    d.shape = SupportShape::UnionOfIntervals;
    d.set = std::move(set);
    return d;
}

SupportDescriptor SupportDescriptor::semigroup(SupportDescriptor log_factors, ClosedSet generators) {
    SupportDescriptor d;
    d.shape = SupportShape::SemigroupClosure;
    d.log_factors = std::make_shared<const SupportDescriptor>(std::move(log_factors));
    d.generators = std::move(generators);
    return d;
}

namespace {

std::string set_str(const ClosedSet& s) {
    std::ostringstream os;
    bool first = true;
    for (const Segment& seg : s.segments()) {
        if (!first) os << " u ";
        first = false;
        if (seg.is_point()) {
            os << "{" << seg.lo.str() << "}";
        } else {
            os << (seg.lo.is_finite() ? "[" : "(") << seg.lo.str() << ", " << seg.hi.str()
               << (seg.hi.is_finite() ? "]" : ")");
        }
    }
    return first ? "{}" : os.str();
}

}  // namespace

std::string SupportDescriptor::str() const {
    std::string out;
    if (is_semigroup()) {
        out = "closure{sum prod(a_k) b_j : ln a in " + log_factors->str() + ", b in " + set_str(generators) + "}";
    } else {
        out = set_str(set);
    }
    if (relation == SupportRelation::Superset) out = "contains " + out;
    return out;
}

bool SupportDescriptor::same_geometry(const SupportDescriptor& o) const {
    if (shape != o.shape || relation != o.relation) return false;
    if (!is_semigroup()) return set == o.set;
    return generators == o.generators && log_factors->same_geometry(*o.log_factors);
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

Segment scaled_sum(const Segment& a, const Segment& b, const Segment& s) {
    const double x0 = b.lo.value() + s.lo.value();
    const double x1 = b.hi.value() + s.hi.value();
    const double c[4] = {a.lo.value() * x0, a.lo.value() * x1, a.hi.value() * x0, a.hi.value() * x1};
    return Segment{*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

ClosedSet enumerate_semigroup(const SupportDescriptor& d, double lo, double hi, const EnumerationOptions& opt) {
    const double reach = std::max(std::abs(lo), std::abs(hi));
    ClosedSet gens = d.generators;
    if (gens.empty()) return ClosedSet::point(0.0);
    // with factors >= 1 only |b + s| <= reach matters, so generators beyond 2 reach never contribute
    gens = gens.clipped(-2.0 * reach - 1.0, 2.0 * reach + 1.0);
    double beta = 0.0;
    for (const Segment& g : gens.segments()) beta = std::max({beta, std::abs(g.lo.value()), std::abs(g.hi.value())});
    const double window = reach + beta;

    const SupportDescriptor& xi = *d.log_factors;
    const double log_cap = std::log(std::max(window / opt.resolution, 1.0));
    const ClosedSet logs = enumerate_support(xi, -log_cap, log_cap, opt);
    if (logs.inf() < ExtReal(0.0))
        throw UnsupportedCombination("semigroup enumeration needs log factors in [0, inf)");
    std::vector<Segment> factors;
    for (const Segment& l : logs.segments()) factors.push_back(Segment{std::exp(l.lo.value()), std::exp(l.hi.value())});

    ClosedSet current = ClosedSet::point(0.0);
    for (int level = 0; level < opt.depth; ++level) {
        std::vector<Segment> next{Segment{0.0, 0.0}};
        for (const Segment& a : factors) {
            for (const Segment& b : gens.segments()) {
                for (const Segment& s : current.segments()) {
                    const double x_lo = b.lo.value() + s.lo.value();
                    const double x_hi = b.hi.value() + s.hi.value();
                    const double nearest = (x_lo <= 0.0 && 0.0 <= x_hi) ? 0.0 : std::min(std::abs(x_lo), std::abs(x_hi));
                    if (a.lo.value() * nearest > window) continue;
                    const Segment img = scaled_sum(a, b, s);
                    const double c_lo = std::max(img.lo.value(), -window);
                    const double c_hi = std::min(img.hi.value(), window);
                    if (c_lo <= c_hi) next.push_back(Segment{c_lo, c_hi});
                }
            }
            if (next.size() > opt.max_segments * 4)
                throw EnumerationOverflow("semigroup enumeration exceeded the segment budget");
        }
        ClosedSet merged = ClosedSet::from_segments(std::move(next));
        merged.coalesce(opt.resolution);
        if (merged.segments().size() > opt.max_segments)
            throw EnumerationOverflow("semigroup enumeration exceeded the segment budget");
        const bool fixed = merged == current;
        current = std::move(merged);
        if (fixed) break;
    }
    return current.clipped(lo, hi);
}

}  // namespace

ClosedSet enumerate_support(const SupportDescriptor& d, double lo, double hi, const EnumerationOptions& opt) {
    if (d.is_semigroup()) return enumerate_semigroup(d, lo, hi, opt);
    return d.set.clipped(lo, hi);
}

// ---------------------------------------------------------------------------
// classification

namespace {

constexpr const char* kTheorem = "killed-support theorem";
constexpr const char* kPairs = "compound-Poisson pair support proposition";

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

TrailEntry entry(std::string clause, std::string citation) {
    TrailEntry e;
    e.clause = std::move(clause);
    e.citation = std::move(citation);
    return e;
}

SupportDescriptor with_trail(SupportDescriptor d, Trail trail) {
    d.trail = std::move(trail);
    return d;
}

bool xi_subordinator_with_drift(const StructuralProfile& p) { return p.is_subordinator && *p.drift > 0.0; }

ClosedSet negated(const ClosedSet& s) {
    std::vector<Segment> out;
    for (const Segment& seg : s.segments()) out.push_back(Segment{-seg.hi, -seg.lo});
    return ClosedSet::from_segments(std::move(out));
}

struct PairRefinement {
    std::optional<ClosedSet> superset;  ///< union of the superset statements that apply
    bool full_line = false;
    TrailEntry record;
};

// Sufficient conditions for supp V to contain unbounded intervals when both processes
// are compound Poisson, 0 lies outside both supports and xi has only negative jumps.
PairRefinement pair_refinement(const LevyMeasure& nu_xi, const LevyMeasure& nu_eta, const StructuralProfile& pe) {
    PairRefinement out;
    out.record = entry("support-pairs", kPairs);
    const ClosedSet sx = nu_xi.support();
    const ClosedSet se = nu_eta.support();
    const bool two_sided = pe.has_negative_jumps && pe.has_positive_jumps;
    std::vector<Segment> pieces;
    auto base = [&]() {
        // {0} and supp(nu_eta) always lie in supp(eta_tau) subset of supp V
        pieces.push_back(Segment{0.0, 0.0});
        for (const Segment& s : se.segments()) pieces.push_back(s);
    };

    // (i): a nondegenerate [beta, alpha] in supp nu_xi
    for (const Segment& s : sx.segments()) {
        if (s.is_point()) continue;
        const double alpha = s.hi.value();
        const int k = s.lo.is_finite() ? static_cast<int>(std::floor(alpha / (s.lo.value() - alpha))) + 1 : 1;
        const double gain = std::exp(-k * alpha);
        out.record.fact("i.k", std::to_string(k));
        if (pe.is_subordinator) {
            base();
            pieces.push_back(Segment{gain * se.inf().value(), ExtReal::pos_inf()});
            out.record.fact("i", "fires (subordinator eta)");
        } else if (pe.neg_is_subordinator) {
            base();
            pieces.push_back(Segment{ExtReal::neg_inf(), gain * se.sup().value()});
            out.record.fact("i", "fires (negative subordinator eta)");
        } else {
            out.full_line = true;
            out.record.fact("i", "fires (two-sided eta): full line");
        }
    }
    const double xi_sup = sx.sup().value();
    // (ii)/(iii): a nondegenerate segment of supp nu_eta on its one side
    for (const Segment& s : se.segments()) {
        if (s.is_point()) continue;
        if (pe.is_subordinator) {
            const double alpha = s.lo.value();
            const ExtReal beta = s.hi;
            base();
            const bool wide = !beta.is_finite() || std::log(beta.value() / alpha) >= -xi_sup;
            if (wide) {
                pieces.push_back(Segment{alpha, ExtReal::pos_inf()});
            } else {
                const int k = static_cast<int>(std::floor(alpha / (beta.value() - alpha))) + 1;
                for (int l = 1; l < k; ++l) pieces.push_back(Segment{l * alpha, l * beta.value()});
                pieces.push_back(Segment{k * alpha, ExtReal::pos_inf()});
            }
            out.record.fact("ii", wide ? "fires (wide segment)" : "fires (narrow segment)");
        } else if (pe.neg_is_subordinator) {
            const double alpha = s.hi.value();
            const ExtReal beta = s.lo;
            base();
            const bool wide = !beta.is_finite() || std::log(beta.value() / alpha) >= -xi_sup;
            if (wide) {
                pieces.push_back(Segment{ExtReal::neg_inf(), alpha});
            } else {
                const int k = static_cast<int>(std::floor(alpha / (beta.value() - alpha))) + 1;
                for (int l = 1; l < k; ++l) pieces.push_back(Segment{l * beta.value(), l * alpha});
                pieces.push_back(Segment{ExtReal::neg_inf(), k * alpha});
            }
            out.record.fact("iii", wide ? "fires (wide segment)" : "fires (narrow segment)");
        } else if (two_sided) {
            out.full_line = true;
            out.record.fact("iv", "fires: full line");
        }
    }
    // (v): irrational ratio of a negative and a positive jump, decided on exact tags only
    if (two_sided && !out.full_line) {
        std::vector<Atom> neg;
        std::vector<Atom> pos;
        for (const Atom& a : nu_eta.finite_atoms()) (a.location < 0 ? neg : pos).push_back(a);
        bool undecided = false;
        for (const Atom& n : neg) {
            for (const Atom& p : pos) {
                if (!n.exact || !p.exact) {
                    undecided = true;
                    continue;
                }
                const auto irr = ratio_is_irrational(*p.exact, *n.exact);
                if (!irr) undecided = true;
                if (irr.value_or(false)) {
                    out.full_line = true;
                    out.record.fact("v", "fires: " + p.exact->str() + " / " + n.exact->str() + " irrational");
                    break;
                }
            }
            if (out.full_line) break;
        }
        if (!out.full_line) out.record.fact("v", undecided ? "undecided (untagged or undecidable ratio)" : "does not fire");
    }
    if (!pieces.empty()) out.superset = ClosedSet::from_segments(std::move(pieces));
    return out;
}

}  // namespace

SupportDescriptor log_factor_support(const ProcessSpec& xi) {
    const StructuralProfile p = profile(xi.triplet);
    if (p.is_zero) return SupportDescriptor::zero();
    if (p.is_compound_poisson && !p.zero_in_supp_nu) {
        // -xi_T ranges over finite sums of negated jumps
        return SupportDescriptor::semigroup(SupportDescriptor::zero(), negated(xi.triplet.measure().support()));
    }
    throw UnsupportedCombination("log-factor support is only tabulated for xi = 0 or compound Poisson xi");
}

SupportDescriptor classify_support(const ProcessSpec& xi, const ProcessSpec& eta, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("killing rate q must be positive and finite");
    const StructuralProfile pe = profile(eta.triplet);
    const StructuralProfile px = profile(xi.triplet);
    Trail trail;

    // (i)
    TrailEntry e1 = entry("support/i", std::string(kTheorem) + " (i): eta = 0");
    e1.fact("eta.is_zero", pe.is_zero);
    if (pe.is_zero) {
        trail.push_back(e1);
        return with_trail(SupportDescriptor::zero(), trail);
    }

    // (ii)
    TrailEntry e2 = entry("support/ii", std::string(kTheorem) + " (ii): eta deterministic");
    e2.fact("eta.is_deterministic", pe.is_deterministic);
    if (pe.is_deterministic) {
        const double d = *pe.drift;
        const bool bounded = xi_subordinator_with_drift(px);
        e2.fact("eta.drift", num(d)).fact("xi.subordinator_with_positive_drift", bounded);
        trail.push_back(e2);
        if (bounded) {
            const double end = d / *px.drift;
            return with_trail(d > 0 ? SupportDescriptor::interval(0.0, end) : SupportDescriptor::interval(end, 0.0), trail);
        }
        return with_trail(d > 0 ? SupportDescriptor::half_line_up(0.0) : SupportDescriptor::half_line_down(0.0), trail);
    }

    // (iii)
    const bool two_sided = pe.has_negative_jumps && pe.has_positive_jumps;
    const bool drift_nonzero = pe.finite_variation && *pe.drift != 0.0;
    TrailEntry e3 = entry("support/iii", std::string(kTheorem) + " (iii): infinite variation or two-sided jumps");
    e3.fact("eta.finite_variation", pe.finite_variation)
        .fact("eta.two_sided_jumps", two_sided)
        .fact("eta.zero_in_supp_nu", pe.zero_in_supp_nu)
        .fact("eta.drift_nonzero", drift_nonzero);
    if (!pe.finite_variation) {
        e3.clause = "support/iii.a";
        trail.push_back(e3);
        return with_trail(SupportDescriptor::full_line(), trail);
    }
    if (two_sided && pe.zero_in_supp_nu) {
        e3.clause = "support/iii.b";
        trail.push_back(e3);
        return with_trail(SupportDescriptor::full_line(), trail);
    }
    if (two_sided && drift_nonzero) {
        e3.clause = "support/iii.c";
        trail.push_back(e3);
        return with_trail(SupportDescriptor::full_line(), trail);
    }
    trail.push_back(e3);

    // (iv)
    if (!two_sided && (pe.zero_in_supp_nu || drift_nonzero)) {
        TrailEntry e4 = entry("support/iv", std::string(kTheorem) + " (iv): one-sided finite-variation eta");
        e4.fact("eta.is_subordinator", pe.is_subordinator).fact("-eta.is_subordinator", pe.neg_is_subordinator);
        if (pe.is_subordinator) {
            trail.push_back(e4);
            return with_trail(SupportDescriptor::half_line_up(0.0), trail);
        }
        if (pe.neg_is_subordinator) {
            trail.push_back(e4);
            return with_trail(SupportDescriptor::half_line_down(0.0), trail);
        }
        const double d = *pe.drift;
        const bool bounded = xi_subordinator_with_drift(px);
        e4.fact("eta.drift", num(d)).fact("xi.subordinator_with_positive_drift", bounded);
        trail.push_back(e4);
        if (bounded && d > 0) return with_trail(SupportDescriptor::half_line_down(d / *px.drift), trail);
        if (bounded && d < 0) return with_trail(SupportDescriptor::half_line_up(d / *px.drift), trail);
        return with_trail(SupportDescriptor::full_line(), trail);
    }

    // (v): eta compound Poisson with 0 outside supp nu_eta
    TrailEntry e5 = entry("support/v", std::string(kTheorem) + " (v): compound Poisson eta, 0 outside supp nu");
    e5.fact("eta.is_compound_poisson", pe.is_compound_poisson)
        .fact("eta.is_subordinator", pe.is_subordinator)
        .fact("-eta.is_subordinator", pe.neg_is_subordinator);
    const bool neg_xi_sub = px.neg_is_subordinator && (px.zero_in_supp_nu || *px.drift != 0.0);
    e5.fact("-xi.subordinator_with_small_jumps_or_drift", neg_xi_sub).fact("xi.is_zero", px.is_zero);
    const ClosedSet& jumps_eta = eta.triplet.measure().support();
    if (neg_xi_sub) {
        e5.clause = "support/v.neg-subordinator-xi";
        trail.push_back(e5);
        if (pe.is_subordinator) return with_trail(SupportDescriptor::point_plus_half_line(pe.supp_nu_inf.value(), true), trail);
        if (pe.neg_is_subordinator)
            return with_trail(SupportDescriptor::point_plus_half_line(pe.supp_nu_sup.value(), false), trail);
        return with_trail(SupportDescriptor::full_line(), trail);
    }
    if (px.is_zero) {
        e5.clause = "support/v.zero-xi";
        trail.push_back(e5);
        return with_trail(SupportDescriptor::semigroup(SupportDescriptor::zero(), jumps_eta), trail);
    }
    const bool excluded = px.is_compound_poisson && !px.zero_in_supp_nu && !px.has_positive_jumps;
    e5.fact("xi.cpp_negative_jumps_bounded_away", excluded);
    if (!excluded) {
        e5.clause = "support/v.remaining";
        trail.push_back(e5);
        if (pe.is_subordinator) return with_trail(SupportDescriptor::half_line_up(0.0), trail);
        if (pe.neg_is_subordinator) return with_trail(SupportDescriptor::half_line_down(0.0), trail);
        return with_trail(SupportDescriptor::full_line(), trail);
    }

    e5.clause = "support/v.raw";
    trail.push_back(e5);
    SupportDescriptor raw = SupportDescriptor::semigroup(log_factor_support(xi), jumps_eta);
    PairRefinement ref = pair_refinement(xi.triplet.measure(), eta.triplet.measure(), pe);
    trail.push_back(ref.record);
    if (ref.full_line) {
        // a superset of R is R
        return with_trail(SupportDescriptor::full_line(), trail);
    }
    if (ref.superset) {
        SupportDescriptor sup = SupportDescriptor::union_of(*ref.superset);
        sup.relation = SupportRelation::Superset;
        raw.refinement = std::make_shared<const SupportDescriptor>(std::move(sup));
    }
    return with_trail(std::move(raw), trail);
}

}  // namespace kefun

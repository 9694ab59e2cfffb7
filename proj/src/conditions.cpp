#include "kefun/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kefun/errors.hpp"
#include "kefun/quadrature.hpp"

namespace kefun {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(Method m) { return m == Method::Symbolic ? "symbolic" : "numeric"; }

std::string GrowthThreshold::str() const {
    switch (kind) {
        case Kind::Infinite: return "infinite";
        case Kind::Positive: return "positive";
        case Kind::Above: return "above(" + std::to_string(level) + ")";
    }
    return "?";
}

namespace {

ConditionResult symbolic(Verdict v, std::string reason) { return {v, Method::Symbolic, std::move(reason), std::nullopt}; }

bool infinite_small_jump_power(const SmallJumpIndex& idx) { return idx.min_exponent && *idx.min_exponent < -1.0; }

// Verdict for a limit that is known to equal `level`.
Verdict compare_limit(double limit, GrowthThreshold th) {
    switch (th.kind) {
        case GrowthThreshold::Kind::Infinite: return Verdict::Fails;
        case GrowthThreshold::Kind::Positive: return limit > 0.0 ? Verdict::Holds : Verdict::Fails;
        case GrowthThreshold::Kind::Above: return limit > th.level ? Verdict::Holds : Verdict::Fails;
    }
    return Verdict::Unknown;
}

ConditionResult hw_numeric(const CharExponent& psi, GrowthThreshold th, const CheckerOptions& opt) {
    NumericEvidence ev;
    ev.quantity = "-Re psi(z)/ln(1+z)";
    // 2^k and 2 pi 2^k: the second family exposes periodic dips of atomic measures
    for (int k = 1; k <= opt.hw_max_doublings; ++k) {
        for (double z : {std::ldexp(1.0, k), 2.0 * std::numbers::pi * std::ldexp(1.0, k)}) {
            ev.grid.push_back(z);
            ev.values.push_back(-psi(z).real() / std::log1p(z));
        }
    }
    // liminf proxy: minimum over the last `window` grid points, compared with the
    // minimum over the last 2 * window; a growing sequence never settles
    const std::size_t window = 2 * static_cast<std::size_t>(opt.hw_stable_window);
    const std::size_t n = ev.values.size();
    auto suffix_min = [&](std::size_t len) {
        return *std::min_element(ev.values.end() - static_cast<std::ptrdiff_t>(std::min(len, n)), ev.values.end());
    };
    const double cur = suffix_min(window);
    const double earlier = suffix_min(2 * window);
    ev.estimate = earlier;
    ev.stabilized = std::abs(cur - earlier) <= opt.hw_stable_rel_change * std::abs(earlier);

    ConditionResult r{Verdict::Unknown, Method::Numeric, "", ev};
    if (!ev.stabilized) {
        r.reason = "running minimum has not settled on the grid";
        return r;
    }
    const double e = ev.estimate;
    switch (th.kind) {
        case GrowthThreshold::Kind::Infinite:
            r.verdict = Verdict::Fails;
            r.reason = "grid liminf settles at a finite level";
            break;
        case GrowthThreshold::Kind::Positive:
            if (e >= opt.hw_positive_floor) {
                r.verdict = Verdict::Holds;
                r.reason = "grid liminf settles above the positivity floor";
            } else if (e <= opt.hw_zero_ceiling) {
                r.verdict = Verdict::Fails;
                r.reason = "grid liminf settles at zero";
            } else {
                r.reason = "grid liminf inside the indeterminacy band";
            }
            break;
        case GrowthThreshold::Kind::Above:
            if (e > th.level * (1.0 + opt.hw_band) + opt.hw_positive_floor) {
                r.verdict = Verdict::Holds;
                r.reason = "grid liminf clearly above the level";
            } else if (e < th.level * (1.0 - opt.hw_band)) {
                r.verdict = Verdict::Fails;
                r.reason = "grid liminf clearly below the level";
            } else {
                r.reason = "grid liminf inside the indeterminacy band";
            }
            break;
    }
    return r;
}

// int_0^inf Re(1/(1 - psi)) dz over doubling blocks, with a ratio test on the last blocks.
ConditionResult hawkes_numeric(const LevyTriplet& t, const CheckerOptions& opt) {
    NumericEvidence ev;
    ev.quantity = "int over [2^k, 2^(k+1)] of Re(1/(1-psi(z)))";
    auto integrand = [&t](double z) { return (1.0 / (1.0 - char_exponent(t, z))).real(); };
    QuadratureOptions q;
    q.rel_tol = 1e-7;
    q.abs_tol = 1e-12;
    double total = 0.0;
    try {
        total = integrate(integrand, 0.0, 1.0, q);
        for (int k = 0; k < opt.hawkes_max_doublings; ++k) {
            const double a = std::ldexp(1.0, k);
            const double block = integrate(integrand, a, 2.0 * a, q);
            ev.grid.push_back(a);
            ev.values.push_back(block);
            total += block;
        }
    } catch (const QuadratureFailure& e) {
        return {Verdict::Unknown, Method::Numeric, std::string("quadrature failed: ") + e.what(), ev};
    }
    double worst = 0.0;
    double best = 1e300;
    const std::size_t n = ev.values.size();
    for (std::size_t i = n - 4; i < n; ++i) {
        const double ratio = ev.values[i] / ev.values[i - 1];
        worst = std::max(worst, ratio);
        best = std::min(best, ratio);
    }
    ev.stabilized = true;
    ConditionResult r{Verdict::Unknown, Method::Numeric, "", ev};
    if (worst <= opt.hawkes_converge_ratio) {
        r.evidence->estimate = 2.0 * (total + ev.values.back() * worst / (1.0 - worst));
        r.verdict = Verdict::Holds;
        r.reason = "block integrals decay geometrically";
    } else if (best >= opt.hawkes_diverge_ratio) {
        r.evidence->estimate = 2.0 * total;
        r.verdict = Verdict::Fails;
        r.reason = "block integrals do not decay";
    } else {
        r.evidence->estimate = 2.0 * total;
        r.evidence->stabilized = false;
        r.reason = "block integral ratios inside the indeterminacy band";
    }
    return r;
}

}  // namespace

ConditionResult check_kallenberg(const LevyTriplet& t, GrowthThreshold th) {
    if (t.sigma2() > 0.0) return symbolic(Verdict::Holds, "Gaussian part: ratio grows like eps^-2/|ln eps|");
    const SmallJumpIndex idx = t.measure().small_jump_index();
    if (infinite_small_jump_power(idx))
        return symbolic(Verdict::Holds, "density ~ |x|^p with p < -1 at 0: ratio grows like eps^(1+p)/|ln eps|");
    if (idx.lacunary)
        return symbolic(Verdict::Fails, "lacunary atoms: ratio tends to 0 just below each atom");
    (void)th;
    return symbolic(Verdict::Fails, "second moment on [-eps, eps] is O(eps^2): ratio tends to 0");
}

ConditionResult check_hartman_wintner(const CharExponent& psi, GrowthThreshold th, const CheckerOptions& opt) {
    if (const auto& t = psi.triplet()) {
        if (t->sigma2() > 0.0) return symbolic(Verdict::Holds, "Gaussian part: -Re psi grows like z^2");
        const SmallJumpIndex idx = t->measure().small_jump_index();
        if (infinite_small_jump_power(idx))
            return symbolic(Verdict::Holds, "density ~ |x|^p with p < -1 at 0: -Re psi grows like z^(-1-p)");
        if (!idx.lacunary) {
            if (t->measure().total_mass().is_finite())
                return symbolic(compare_limit(0.0, th), "finite Levy measure: -Re psi bounded by 2 nu(R)");
            // remaining infinite case: |x|^-1 densities at 0, -Re psi ~ C ln z
            const double c = idx.coef_at_min;
            ConditionResult r = symbolic(compare_limit(c, th), "density ~ C/|x| at 0: ratio tends to C");
            r.reason += " = " + std::to_string(c);
            return r;
        }
    }
    return hw_numeric(psi, th, opt);
}

ConditionResult check_one_sided_variation(const LevyTriplet& t) {
    const LevyMeasure& nu = t.measure();
    const ExtReal pos = nu.power_moment(Interval::left_open(0.0, 1.0), 1.0);
    const ExtReal neg = nu.power_moment(Interval::right_open(-1.0, 0.0), 1.0);
    if (pos.is_finite() && neg.is_pos_inf()) return symbolic(Verdict::Holds, "positive small jumps summable, negative not");
    if (neg.is_finite() && pos.is_pos_inf()) return symbolic(Verdict::Holds, "negative small jumps summable, positive not");
    return symbolic(Verdict::Fails, "small-jump variation is not one-sided");
}

ConditionResult check_hawkes(const ProcessSpec& process, const CheckerOptions& opt) {
    const LevyTriplet& t = process.triplet;
    if (const auto d = t.drift())
        return symbolic(*d != 0.0 ? Verdict::Holds : Verdict::Fails,
                        *d != 0.0 ? "finite variation with non-zero drift" : "finite variation with zero drift");
    if (t.sigma2() > 0.0) return symbolic(Verdict::Holds, "Gaussian part");
    if (check_one_sided_variation(t).holds()) return symbolic(Verdict::Holds, "one-sided infinite variation");
    const SmallJumpIndex idx = t.measure().small_jump_index();
    if (idx.min_exponent && *idx.min_exponent < -2.0)
        return symbolic(Verdict::Holds, "density ~ |x|^p with p < -2 at 0: -Re psi grows faster than |z|");
    return hawkes_numeric(t, opt);
}

namespace {

Verdict acp_assertion(const ProcessSpec& p) {
    const bool yes = p.has(AssertedFlag::AcpHolds) || p.has(AssertedFlag::MarginalsAbsolutelyContinuous);
    const bool no = p.has(AssertedFlag::AcpFails) || p.has(AssertedFlag::PotentialMeasureSingular);
    if (yes && no) throw SpecError("contradictory ACP assertions");
    return yes ? Verdict::Holds : no ? Verdict::Fails : Verdict::Unknown;
}

void check_against(Verdict asserted, const ConditionResult& derived, const char* what) {
    if (asserted != Verdict::Unknown && derived.method == Method::Symbolic && derived.verdict != Verdict::Unknown &&
        derived.verdict != asserted)
        throw SpecError(std::string("asserted flag contradicts the triplet: ") + what + " " + derived.reason);
}

// Symbolic reasons for AC of every eta_t.
ConditionResult marginals_from_triplet(const LevyTriplet& t, const CheckerOptions& opt) {
    if (t.sigma2() > 0.0) return symbolic(Verdict::Holds, "Gaussian part");
    if (t.measure().ac_mass().is_pos_inf()) return symbolic(Verdict::Holds, "infinite absolutely continuous Levy measure");
    if (check_kallenberg(t, GrowthThreshold::infinite()).holds())
        return symbolic(Verdict::Holds, "Kallenberg growth condition");
    const ConditionResult hw = check_hartman_wintner(CharExponent(t), GrowthThreshold::infinite(), opt);
    if (hw.holds()) return symbolic(Verdict::Holds, "Hartman-Wintner growth condition");
    if (t.measure().total_mass().is_finite()) return symbolic(Verdict::Fails, "finite Levy measure: atom with positive probability");
    return symbolic(Verdict::Unknown, "no catalog criterion decides");
}

}  // namespace

ConditionResult check_acp(const ProcessSpec& process, const CheckerOptions& opt) {
    const LevyTriplet& t = process.triplet;
    const Verdict asserted = acp_assertion(process);
    const StructuralProfile prof = profile(t);

    ConditionResult derived = symbolic(Verdict::Unknown, "no catalog criterion decides");
    if (prof.is_zero || prof.is_compound_poisson) {
        derived = symbolic(Verdict::Fails, prof.is_zero ? "zero process" : "compound Poisson: eta_T has an atom at 0");
    } else if (t.sigma2() > 0.0) {
        derived = symbolic(Verdict::Holds, "Gaussian part");
    } else if (prof.finite_variation && *prof.drift != 0.0) {
        derived = symbolic(Verdict::Holds, "finite variation with non-zero drift");
    } else if (check_one_sided_variation(t).holds()) {
        derived = symbolic(Verdict::Holds, "one-sided infinite variation");
    } else {
        const ConditionResult m = marginals_from_triplet(t, opt);
        if (m.holds()) {
            derived = symbolic(Verdict::Holds, "all marginals absolutely continuous: " + m.reason);
        } else if (asserted == Verdict::Unknown) {
            const ConditionResult h = check_hawkes(process, opt);
            if (h.holds()) derived = {Verdict::Holds, h.method, "Hawkes condition: " + h.reason, h.evidence};
        }
    }
    check_against(asserted, derived, "ACP");
    if (asserted != Verdict::Unknown && derived.verdict == Verdict::Unknown)
        return symbolic(asserted, asserted == Verdict::Holds ? "asserted" : "asserted (singular potential measure)");
    return derived;
}

ConditionResult check_marginals_ac(const ProcessSpec& process, const CheckerOptions& opt) {
    if (process.has(AssertedFlag::MarginalsAbsolutelyContinuous)) {
        const ConditionResult m = marginals_from_triplet(process.triplet, opt);
        check_against(Verdict::Holds, m, "marginals");
        return m.holds() ? m : symbolic(Verdict::Holds, "asserted");
    }
    ConditionResult m = marginals_from_triplet(process.triplet, opt);
    if (m.verdict == Verdict::Unknown &&
        (process.has(AssertedFlag::AcpFails) || process.has(AssertedFlag::PotentialMeasureSingular)))
        return symbolic(Verdict::Fails, "ACP asserted to fail, so some marginal is not absolutely continuous");
    return m;
}

ConditionResult suggest_unkilled_convergence(const ProcessSpec& xi, const ProcessSpec& eta) {
    const StructuralProfile pe = profile(eta.triplet);
    if (pe.is_zero) return symbolic(Verdict::Holds, "eta is the zero process");
    const LevyMeasure& nu = xi.triplet.measure();
    const ExtReal big_pos = nu.power_moment(Interval::open(1.0, ExtReal::pos_inf()), 1.0);
    const ExtReal big_neg = nu.power_moment(Interval::open(ExtReal::neg_inf(), -1.0), 1.0);
    if (!big_pos.is_finite() || !big_neg.is_finite())
        return symbolic(Verdict::Unknown, "E xi_1 is not finite; the helper does not decide");
    const double mean = xi.triplet.gamma() + big_pos.value() - big_neg.value();
    if (mean <= 0.0) return symbolic(Verdict::Fails, "E xi_1 <= 0: xi does not drift to +infinity");
    const ClosedSet supp = eta.triplet.measure().support();
    if (supp.empty() || (supp.inf().is_finite() && supp.sup().is_finite()))
        return symbolic(Verdict::Holds, "E xi_1 in (0, inf) and eta has bounded jumps");
    return symbolic(Verdict::Unknown, "eta has unbounded jumps; the helper does not decide");
}

}  // namespace kefun

#include "kefun/levy_model.hpp"

#include <algorithm>
#include <cmath>

#include "kefun/errors.hpp"

namespace kefun {

namespace {

bool measure_has_integrable_small_jumps(const LevyMeasure& nu) { return nu.abs_moment(1.0).is_finite(); }

double first_moment_unit_ball(const LevyMeasure& nu) { return nu.signed_moment(Interval::closed(-1.0, 1.0)); }

// Drift recovered by subtraction; cancellation noise at the 1e-12 relative level
// is snapped to an exact zero so compound Poisson processes are recognised.
double snapped_drift(double gamma, double moment) {
    const double d = gamma - moment;
    const double scale = std::max({1.0, std::abs(gamma), std::abs(moment)});
    return std::abs(d) <= 1e-12 * scale ? 0.0 : d;
}

}  // namespace

LevyTriplet::LevyTriplet(double sigma2, LevyMeasure nu, double gamma, std::optional<double> drift)
    : sigma2_(sigma2), nu_(std::move(nu)), gamma_(gamma), drift_(drift) {
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_)) throw SpecError("sigma2 must be finite and >= 0");
    if (!std::isfinite(gamma_)) throw SpecError("gamma must be finite");
}

LevyTriplet LevyTriplet::from_gamma(double sigma2, LevyMeasure nu, double gamma) {
    std::optional<double> drift;
    if (sigma2 == 0.0 && measure_has_integrable_small_jumps(nu))
        drift = snapped_drift(gamma, first_moment_unit_ball(nu));
    return LevyTriplet(sigma2, std::move(nu), gamma, drift);
}

LevyTriplet LevyTriplet::from_drift(double sigma2, LevyMeasure nu, double drift) {
    if (sigma2 != 0.0 || !measure_has_integrable_small_jumps(nu))
        throw SpecError("a drift can only be given for finite-variation processes (sigma2 = 0, integrable small jumps)");
    if (!std::isfinite(drift)) throw SpecError("drift must be finite");
    const double gamma = drift + first_moment_unit_ball(nu);
    return LevyTriplet(sigma2, std::move(nu), gamma, drift);
}

LevyTriplet LevyTriplet::with_both(double sigma2, LevyMeasure nu, double gamma, double drift) {
    if (sigma2 != 0.0 || !measure_has_integrable_small_jumps(nu))
        throw SpecError("drift given for a process of infinite variation");
    return LevyTriplet(sigma2, std::move(nu), gamma, drift);
}

std::optional<double> LevyTriplet::drift() const { return drift_; }

bool LevyTriplet::finite_variation() const { return drift_.has_value(); }

StructuralProfile profile(const LevyTriplet& triplet) {
    const LevyMeasure& nu = triplet.measure();
    StructuralProfile p;
    p.sigma2 = triplet.sigma2();
    p.drift = triplet.drift();
    p.finite_variation = p.drift.has_value();
    p.nu_total = nu.total_mass();
    p.nu_ac_total = nu.ac_mass();
    p.has_positive_jumps = nu.positive_mass() > ExtReal(0.0);
    p.has_negative_jumps = nu.negative_mass() > ExtReal(0.0);
    p.spectrally_positive = !p.has_negative_jumps;
    p.spectrally_negative = !p.has_positive_jumps;
    const ClosedSet supp = nu.support();
    p.zero_in_supp_nu = supp.contains(0.0);
    p.supp_nu_inf = supp.inf();
    p.supp_nu_sup = supp.sup();

    const bool no_jumps = p.nu_total == ExtReal(0.0);
    p.is_deterministic = p.sigma2 == 0.0 && no_jumps;
    p.is_zero = p.is_deterministic && p.drift.value_or(1.0) == 0.0;
    p.is_compound_poisson = p.sigma2 == 0.0 && ExtReal(0.0) < p.nu_total && p.nu_total.is_finite() &&
                            p.drift.has_value() && *p.drift == 0.0;
    p.is_subordinator = p.finite_variation && p.spectrally_positive && *p.drift >= 0.0;
    p.neg_is_subordinator = p.finite_variation && p.spectrally_negative && *p.drift <= 0.0;
    return p;
}

std::string to_string(AssertedFlag f) {
    switch (f) {
        case AssertedFlag::AcpHolds: return "ACP_holds";
        case AssertedFlag::AcpFails: return "ACP_fails";
        case AssertedFlag::PotentialMeasureSingular: return "potential_measure_singular";
        case AssertedFlag::UnkilledIntegralConverges: return "unkilled_integral_converges";
        case AssertedFlag::MarginalsAbsolutelyContinuous: return "marginals_absolutely_continuous";
    }
    return "?";
}

AssertedFlag asserted_flag_from_string(const std::string& s) {
    for (AssertedFlag f : {AssertedFlag::AcpHolds, AssertedFlag::AcpFails, AssertedFlag::PotentialMeasureSingular,
                           AssertedFlag::UnkilledIntegralConverges, AssertedFlag::MarginalsAbsolutelyContinuous}) {
        if (to_string(f) == s) return f;
    }
    throw SpecError("unknown asserted flag '" + s + "'");
}

ProcessSpec zero_process() { return ProcessSpec{LevyTriplet::from_gamma(0.0, LevyMeasure{}, 0.0), {}}; }

ProcessSpec pure_drift(double drift) { return ProcessSpec{LevyTriplet::from_gamma(0.0, LevyMeasure{}, drift), {}}; }

ProcessSpec brownian(double sigma2, double gamma) {
    return ProcessSpec{LevyTriplet::from_gamma(sigma2, LevyMeasure{}, gamma), {}};
}

ProcessSpec poisson(double rate, double jump) {
    LevyMeasure nu({Atoms{{Atom{jump, rate, std::nullopt}}}});
    return ProcessSpec{LevyTriplet::from_drift(0.0, std::move(nu), 0.0), {}};
}

}  // namespace kefun

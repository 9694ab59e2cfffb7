#pragma once

#include <string>

#include "kefun/conditions.hpp"
#include "kefun/integrand.hpp"
#include "kefun/levy_model.hpp"
#include "kefun/support.hpp"
#include "kefun/verdict.hpp"

namespace kefun {

/// Upper limit of a deterministic-integrand integral: fixed (possibly infinite) or an
/// independent random time with values in (0, inf).
struct IntegralStop {
    enum class Kind { FixedHorizon, RandomTime };
    Kind kind = Kind::FixedHorizon;
    ExtReal horizon = ExtReal::pos_inf();  ///< FixedHorizon only
    bool time_absolutely_continuous = true;  ///< RandomTime only: law of the time has a density
    std::string time_law = "exponential";    ///< RandomTime only: label for reports

    static IntegralStop fixed(ExtReal t) { return {Kind::FixedHorizon, t, true, ""}; }
    static IntegralStop exponential_time() { return {Kind::RandomTime, ExtReal::pos_inf(), true, "exponential"}; }
    static IntegralStop random_time(bool absolutely_continuous, std::string label) {
        return {Kind::RandomTime, ExtReal::pos_inf(), absolutely_continuous, std::move(label)};
    }
};

/// Law of int_0^tau e^{-xi_{s-}} d eta_s with tau ~ Exp(q), q > 0.
LawVerdict classify_continuity_killed(const ProcessSpec& xi, const ProcessSpec& eta, double q,
                                      const CheckerOptions& opt = {});

/// Law of int_0^inf e^{-xi_{s-}} d eta_s. Convergence must be asserted on xi or eta.
LawVerdict classify_ac_unkilled(const ProcessSpec& xi, const ProcessSpec& eta, const CheckerOptions& opt = {});

/// Law of int_0^t e^{-xi_{s-}} d eta_s for fixed t > 0.
LawVerdict classify_fixed_t(const ProcessSpec& xi, const ProcessSpec& eta, double t, const CheckerOptions& opt = {});

/// Law of int f(s) d eta_s up to a fixed or independent random time.
LawVerdict classify_deterministic_integrand(const IntegrandFunction& f, const ProcessSpec& eta, const IntegralStop& stop,
                                            const CheckerOptions& opt = {});

}  // namespace kefun

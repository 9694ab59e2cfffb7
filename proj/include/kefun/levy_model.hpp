#pragma once

#include <optional>
#include <set>
#include <string>

#include "kefun/ext_real.hpp"
#include "kefun/measure.hpp"

namespace kefun {

/// Characteristic triplet (sigma^2, nu, gamma) under the truncation 1_[-1,1].
///
/// Finite-variation processes may be built from their drift instead of gamma;
/// the drift is then kept exactly instead of being recovered by subtraction.
class LevyTriplet {
public:
    LevyTriplet() = default;

    static LevyTriplet from_gamma(double sigma2, LevyMeasure nu, double gamma);
    /// Requires finite variation (sigma2 == 0 and integrable |x| near 0).
    static LevyTriplet from_drift(double sigma2, LevyMeasure nu, double drift);
    /// Both gamma and the drift known independently (used by transforms).
    static LevyTriplet with_both(double sigma2, LevyMeasure nu, double gamma, double drift);

    [[nodiscard]] double sigma2() const { return sigma2_; }
    [[nodiscard]] const LevyMeasure& measure() const { return nu_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    /// Drift gamma - int_[-1,1] x nu(dx); present iff the process has finite variation.
    [[nodiscard]] std::optional<double> drift() const;
    [[nodiscard]] bool finite_variation() const;

private:
    LevyTriplet(double sigma2, LevyMeasure nu, double gamma, std::optional<double> drift);

    double sigma2_ = 0.0;
    LevyMeasure nu_;
    double gamma_ = 0.0;
    std::optional<double> drift_;
};

/// Case-split predicates of the support and continuity results.
struct StructuralProfile {
    bool is_zero = false;
    bool is_deterministic = false;
    bool is_subordinator = false;
    bool neg_is_subordinator = false;
    bool is_compound_poisson = false;
    bool finite_variation = false;
    bool spectrally_positive = false;
    bool spectrally_negative = false;
    std::optional<double> drift;
    ExtReal nu_total;
    ExtReal nu_ac_total;
    bool zero_in_supp_nu = false;
    ExtReal supp_nu_inf = ExtReal::pos_inf();
    ExtReal supp_nu_sup = ExtReal::neg_inf();
    // jump activity on each side, for the two-sided clauses
    bool has_positive_jumps = false;
    bool has_negative_jumps = false;
    double sigma2 = 0.0;

    friend bool operator==(const StructuralProfile&, const StructuralProfile&) = default;
};

StructuralProfile profile(const LevyTriplet& triplet);

enum class AssertedFlag {
    AcpHolds,
    AcpFails,
    PotentialMeasureSingular,
    UnkilledIntegralConverges,
    MarginalsAbsolutelyContinuous,
};

std::string to_string(AssertedFlag f);
AssertedFlag asserted_flag_from_string(const std::string& s);

/// A Levy process as consumed by classifiers and the simulator: its triplet
/// plus externally known analytic facts.
struct ProcessSpec {
    LevyTriplet triplet;
    std::set<AssertedFlag> asserted;

    [[nodiscard]] bool has(AssertedFlag f) const { return asserted.contains(f); }
};

// convenience builders used across tests and tools
ProcessSpec zero_process();
ProcessSpec pure_drift(double drift);
ProcessSpec brownian(double sigma2 = 1.0, double gamma = 0.0);
/// Unit-jump Poisson process of the given rate (drift 0).
ProcessSpec poisson(double rate = 1.0, double jump = 1.0);

}  // namespace kefun

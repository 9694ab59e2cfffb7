#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kefun/char_exponent.hpp"
#include "kefun/levy_model.hpp"

namespace kefun {

enum class Verdict { Holds, Fails, Unknown };
enum class Method { Symbolic, Numeric };

std::string to_string(Verdict v);
std::string to_string(Method m);

/// Sampled quantity behind a numeric verdict.
struct NumericEvidence {
    std::string quantity;        ///< what `values` holds, e.g. "-Re psi(z)/ln(1+|z|)"
    std::vector<double> grid;    ///< abscissae
    std::vector<double> values;  ///< quantity at each abscissa
    double estimate = 0.0;       ///< liminf or integral estimate
    bool stabilized = false;
};

struct ConditionResult {
    Verdict verdict = Verdict::Unknown;
    Method method = Method::Symbolic;
    std::string reason;
    std::optional<NumericEvidence> evidence;

    [[nodiscard]] bool holds() const { return verdict == Verdict::Holds; }
    [[nodiscard]] bool fails() const { return verdict == Verdict::Fails; }
};

/// Level a small-ball growth ratio is compared against.
struct GrowthThreshold {
    enum class Kind { Infinite, Positive, Above };
    Kind kind = Kind::Infinite;
    double level = 0.0;  ///< only for Above: the limit must exceed this

    static GrowthThreshold infinite() { return {Kind::Infinite, 0.0}; }
    static GrowthThreshold positive() { return {Kind::Positive, 0.0}; }
    /// Ratio must exceed 1/(4c): the Kallenberg variant for horizon c.
    static GrowthThreshold quarter_over(double c) { return {Kind::Above, 0.25 / c}; }
    /// Ratio must exceed 1/(2c): the Hartman-Wintner variant for horizon c.
    static GrowthThreshold half_over(double c) { return {Kind::Above, 0.5 / c}; }
    [[nodiscard]] std::string str() const;
};

/// Tunables of the numeric fallbacks.
struct CheckerOptions {
    int hw_max_doublings = 20;         ///< z grid reaches 2^this
    int hw_stable_window = 4;          ///< doublings over which the running min must settle
    double hw_stable_rel_change = 0.10;
    double hw_positive_floor = 0.05;   ///< numeric "positive" needs at least this much
    double hw_zero_ceiling = 1e-3;     ///< numeric "positive" fails below this
    double hw_band = 0.25;             ///< relative indeterminacy band around a finite level
    int hawkes_max_doublings = 20;
    double hawkes_converge_ratio = 0.75;
    double hawkes_diverge_ratio = 0.95;
};

/// lim eps^-2 |ln eps|^-1 (sigma^2 + int_{-eps}^{eps} x^2 nu(dx)) against the threshold.
ConditionResult check_kallenberg(const LevyTriplet& triplet, GrowthThreshold threshold);

/// liminf -Re psi(z) / ln(1 + |z|) against the threshold. Symbolic when the
/// exponent carries a catalog triplet, numeric on a geometric grid otherwise.
ConditionResult check_hartman_wintner(const CharExponent& psi, GrowthThreshold threshold,
                                      const CheckerOptions& opt = {});

/// int_0^1 x nu(dx) < inf = int_{-1}^0 |x| nu(dx), or the mirror statement.
ConditionResult check_one_sided_variation(const LevyTriplet& triplet);

/// int Re(1 / (1 - psi(z))) dz < inf.
ConditionResult check_hawkes(const ProcessSpec& process, const CheckerOptions& opt = {});

/// Absolute continuity of the potential measures.
ConditionResult check_acp(const ProcessSpec& process, const CheckerOptions& opt = {});

/// Absolute continuity of every marginal eta_t, t > 0.
ConditionResult check_marginals_ac(const ProcessSpec& process, const CheckerOptions& opt = {});

/// Conservative sufficient test for almost sure convergence of int_0^inf e^{-xi} d eta:
/// E xi_1 finite and positive, jumps of eta bounded. Not a characterisation.
ConditionResult suggest_unkilled_convergence(const ProcessSpec& xi, const ProcessSpec& eta);

}  // namespace kefun

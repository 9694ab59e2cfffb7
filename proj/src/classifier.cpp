#include "kefun/classifier.hpp"

#include <cmath>
#include <functional>

#include "kefun/errors.hpp"

namespace kefun {

namespace {

constexpr const char* kKilledAc = "killed-functional absolute-continuity theorem";
constexpr const char* kKilledCont = "killed-functional continuity proposition";
constexpr const char* kGaussXiKilled = "Gaussian-xi killed corollary";
constexpr const char* kCppXiKilled = "compound-Poisson-xi killed corollary";
constexpr const char* kUnkilledAc = "unkilled-functional absolute-continuity theorem";
constexpr const char* kUnkilledCont = "unkilled continuity criterion";
constexpr const char* kGaussUnkilled = "Gaussian unkilled corollary";
constexpr const char* kFixedAc = "fixed-horizon absolute-continuity theorem";
constexpr const char* kFixedCont = "fixed-horizon continuity corollary";
constexpr const char* kGaussXiFixed = "Gaussian-xi fixed-horizon corollary";
constexpr const char* kIntegrandCont = "deterministic-integrand continuity proposition";
constexpr const char* kIntegrandAc = "deterministic-integrand absolute-continuity corollary";
constexpr const char* kRandomStopAc = "randomly-stopped integral absolute-continuity corollary";

TrailEntry entry(std::string clause, std::string citation) {
    TrailEntry e;
    e.clause = std::move(clause);
    e.citation = std::move(citation);
    return e;
}

/// Ordered first-match search over sufficient conditions.
class ClauseSearch {
public:
    explicit ClauseSearch(Trail& trail) : trail_(trail) {}

    /// Runs the clause unless one already fired; the callback fills the entry and returns whether it fires.
    void attempt(const std::string& clause, const std::string& citation, const std::function<bool(TrailEntry&)>& body) {
        if (fired_) return;
        TrailEntry e = entry(clause, citation);
        fired_ = body(e);
        e.fact("fires", fired_);
        trail_.push_back(std::move(e));
    }
    [[nodiscard]] bool fired() const { return fired_; }

private:
    Trail& trail_;
    bool fired_ = false;
};

bool growth_condition(TrailEntry& e, const LevyTriplet& t, GrowthThreshold kallenberg, GrowthThreshold hw,
                      const CheckerOptions& opt) {
    const ConditionResult k = check_kallenberg(t, kallenberg);
    e.condition("kallenberg." + kallenberg.str(), k);
    if (k.holds()) return true;
    const ConditionResult h = check_hartman_wintner(CharExponent(t), hw, opt);
    e.condition("hartman_wintner." + hw.str(), h);
    return h.holds();
}

bool cpp_like(const StructuralProfile& p) { return p.is_compound_poisson || p.is_zero; }

bool nonzero_drift(const StructuralProfile& p) { return p.finite_variation && *p.drift != 0.0; }

}  // namespace

LawVerdict classify_continuity_killed(const ProcessSpec& xi, const ProcessSpec& eta, double q, const CheckerOptions& opt) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("killing rate q must be positive and finite");
    const StructuralProfile pe = profile(eta.triplet);
    const StructuralProfile px = profile(xi.triplet);
    Trail trail;

    TrailEntry cont = entry("killed-continuity", kKilledCont);
    cont.fact("eta.is_compound_poisson", pe.is_compound_poisson).fact("eta.is_zero", pe.is_zero);
    trail.push_back(cont);
    if (cpp_like(pe)) return LawVerdict(Tri::Yes, Tri::No, Tri::No, trail);

    ClauseSearch search(trail);
    search.attempt("killed-ac/v", std::string(kKilledAc) + " (v)", [&](TrailEntry& e) {
        e.fact("eta.finite_variation_nonzero_drift", nonzero_drift(pe));
        return nonzero_drift(pe);
    });
    search.attempt("killed-ac/i", std::string(kKilledAc) + " (i)", [&](TrailEntry& e) {
        return growth_condition(e, eta.triplet, GrowthThreshold::infinite(), GrowthThreshold::infinite(), opt);
    });
    search.attempt("killed-ac/ii", std::string(kKilledAc) + " (ii)", [&](TrailEntry& e) {
        e.fact("eta.nu_ac_total", pe.nu_ac_total.str());
        return pe.nu_ac_total.is_pos_inf();
    });
    search.attempt("killed-ac/iii", std::string(kKilledAc) + " (iii)", [&](TrailEntry& e) {
        e.fact("eta.nu_total", pe.nu_total.str());
        if (!pe.nu_total.is_pos_inf()) return false;
        const ConditionResult h = check_hawkes(xi, opt);
        e.condition("hawkes.xi", h);
        return h.holds();
    });
    search.attempt("killed-ac/iv", std::string(kKilledAc) + " (iv)", [&](TrailEntry& e) {
        e.fact("xi.nu_ac_total", px.nu_ac_total.str()).fact("eta.nu_total", pe.nu_total.str());
        return px.nu_ac_total.is_pos_inf() && pe.nu_total.is_pos_inf();
    });
    ConditionResult acp;
    search.attempt("killed-ac/vi", std::string(kKilledAc) + " (vi)", [&](TrailEntry& e) {
        e.fact("xi.compound_poisson_or_zero", cpp_like(px));
        if (!cpp_like(px)) return false;
        acp = check_acp(eta, opt);
        e.condition("acp.eta", acp);
        return acp.holds();
    });
    if (search.fired()) return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);

    if (px.sigma2 > 0.0) {
        trail.push_back(entry("killed-ac/gaussian-xi", kGaussXiKilled).fact("xi.sigma2", std::to_string(px.sigma2)));
        return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    }
    if (cpp_like(px) && acp.fails()) {
        trail.push_back(entry("killed-ac/cpp-xi-converse", kCppXiKilled).fact("acp.eta", to_string(acp.verdict)));
        return LawVerdict(Tri::No, Tri::Yes, Tri::No, trail);
    }
    return LawVerdict(Tri::No, Tri::Yes, Tri::Unknown, trail);
}

LawVerdict classify_ac_unkilled(const ProcessSpec& xi, const ProcessSpec& eta, const CheckerOptions& opt) {
    if (!xi.has(AssertedFlag::UnkilledIntegralConverges) && !eta.has(AssertedFlag::UnkilledIntegralConverges))
        throw PreconditionViolation("convergence of the unkilled integral must be asserted");
    const StructuralProfile pe = profile(eta.triplet);
    const StructuralProfile px = profile(xi.triplet);
    if (pe.is_zero) throw PreconditionViolation("eta must not be the zero process");
    Trail trail;

    const bool both_deterministic = pe.is_deterministic && px.is_deterministic;
    TrailEntry cont = entry("unkilled-continuity", kUnkilledCont);
    cont.fact("both_deterministic", both_deterministic);
    trail.push_back(cont);
    // two drifts: the integral is the constant drift_eta / drift_xi, which is non-zero
    if (both_deterministic) return LawVerdict(Tri::No, Tri::No, Tri::No, trail);

    ClauseSearch search(trail);
    search.attempt("unkilled-ac/v", std::string(kUnkilledAc) + " (v)", [&](TrailEntry& e) {
        e.fact("eta.finite_variation_nonzero_drift", nonzero_drift(pe));
        return nonzero_drift(pe);
    });
    search.attempt("unkilled-ac/viii", std::string(kUnkilledAc) + " (viii)", [&](TrailEntry& e) {
        e.fact("xi.spectrally_negative", px.spectrally_negative);
        return px.spectrally_negative;
    });
    search.attempt("unkilled-ac/i", std::string(kUnkilledAc) + " (i)", [&](TrailEntry& e) {
        return growth_condition(e, eta.triplet, GrowthThreshold::positive(), GrowthThreshold::positive(), opt);
    });
    search.attempt("unkilled-ac/ii", std::string(kUnkilledAc) + " (ii)", [&](TrailEntry& e) {
        e.fact("eta.nu_ac_total", pe.nu_ac_total.str());
        return ExtReal(0.0) < pe.nu_ac_total;
    });
    search.attempt("unkilled-ac/iii", std::string(kUnkilledAc) + " (iii)", [&](TrailEntry& e) {
        const ConditionResult h = check_hawkes(xi, opt);
        e.condition("hawkes.xi", h);
        return h.holds();
    });
    search.attempt("unkilled-ac/iv", std::string(kUnkilledAc) + " (iv)", [&](TrailEntry& e) {
        e.fact("xi.nu_ac_total", px.nu_ac_total.str());
        return ExtReal(0.0) < px.nu_ac_total;
    });
    search.attempt("unkilled-ac/vi", std::string(kUnkilledAc) + " (vi)", [&](TrailEntry& e) {
        e.fact("xi.is_compound_poisson", px.is_compound_poisson);
        if (!px.is_compound_poisson) return false;
        const ConditionResult a = check_acp(eta, opt);
        e.condition("acp.eta", a);
        return a.holds();
    });
    search.attempt("unkilled-ac/vii", std::string(kUnkilledAc) + " (vii)", [&](TrailEntry& e) {
        e.fact("eta.is_compound_poisson", pe.is_compound_poisson);
        if (!pe.is_compound_poisson) return false;
        const ConditionResult a = check_acp(xi, opt);
        e.condition("acp.xi", a);
        return a.holds();
    });
    if (search.fired()) return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    if (px.sigma2 + pe.sigma2 > 0.0) {
        trail.push_back(entry("unkilled-ac/gaussian", kGaussUnkilled));
        return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    }
    return LawVerdict(Tri::No, Tri::Yes, Tri::Unknown, trail);
}

LawVerdict classify_fixed_t(const ProcessSpec& xi, const ProcessSpec& eta, double t, const CheckerOptions& opt) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("horizon t must be positive and finite");
    const StructuralProfile pe = profile(eta.triplet);
    const StructuralProfile px = profile(xi.triplet);
    Trail trail;

    const bool no_gauss_finite_jumps =
        pe.sigma2 == 0.0 && px.sigma2 == 0.0 && pe.nu_total.is_finite() && px.nu_total.is_finite();
    TrailEntry cont = entry("fixed-t-continuity", kFixedCont);
    cont.fact("eta.is_zero", pe.is_zero)
        .fact("eta.is_compound_poisson", pe.is_compound_poisson)
        .fact("no_gaussian_and_finite_jump_activity", no_gauss_finite_jumps);
    trail.push_back(cont);
    if (cpp_like(pe)) return LawVerdict(Tri::Yes, Tri::No, Tri::No, trail);
    if (no_gauss_finite_jumps) return LawVerdict(Tri::Unknown, Tri::No, Tri::No, trail);

    ClauseSearch search(trail);
    search.attempt("fixed-t-ac/i", std::string(kFixedAc) + " (i)", [&](TrailEntry& e) {
        return growth_condition(e, eta.triplet, GrowthThreshold::quarter_over(t), GrowthThreshold::half_over(t), opt);
    });
    search.attempt("fixed-t-ac/ii", std::string(kFixedAc) + " (ii)", [&](TrailEntry& e) {
        e.fact("eta.nu_ac_total", pe.nu_ac_total.str());
        return pe.nu_ac_total.is_pos_inf();
    });
    search.attempt("fixed-t-ac/iii", std::string(kFixedAc) + " (iii)", [&](TrailEntry& e) {
        e.fact("eta.nu_total", pe.nu_total.str());
        if (!pe.nu_total.is_pos_inf()) return false;
        const ConditionResult h = check_hawkes(xi, opt);
        e.condition("hawkes.xi", h);
        return h.holds();
    });
    search.attempt("fixed-t-ac/iv", std::string(kFixedAc) + " (iv)", [&](TrailEntry& e) {
        e.fact("xi.nu_ac_total", px.nu_ac_total.str()).fact("eta.nu_total", pe.nu_total.str());
        return px.nu_ac_total.is_pos_inf() && pe.nu_total.is_pos_inf();
    });
    search.attempt("fixed-t-ac/v", std::string(kFixedAc) + " (v)", [&](TrailEntry& e) {
        const bool xi_active = px.sigma2 > 0.0 || px.nu_total.is_pos_inf();
        e.fact("eta.finite_variation_nonzero_drift", nonzero_drift(pe)).fact("xi.gaussian_or_infinite_activity", xi_active);
        return nonzero_drift(pe) && xi_active;
    });
    search.attempt("fixed-t-ac/vi", std::string(kFixedAc) + " (vi)", [&](TrailEntry& e) {
        e.fact("xi.compound_poisson_or_zero", cpp_like(px));
        if (!cpp_like(px)) return false;
        const ConditionResult m = check_marginals_ac(eta, opt);
        e.condition("marginals_ac.eta", m);
        return m.holds();
    });
    if (search.fired()) return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    if (px.sigma2 > 0.0) {
        trail.push_back(entry("fixed-t-ac/gaussian-xi", kGaussXiFixed));
        return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    }
    return LawVerdict(Tri::No, Tri::Yes, Tri::Unknown, trail);
}

LawVerdict classify_deterministic_integrand(const IntegrandFunction& f_in, const ProcessSpec& eta, const IntegralStop& stop,
                                            const CheckerOptions& opt) {
    const StructuralProfile pe = profile(eta.triplet);
    const LevyTriplet& t = eta.triplet;
    Trail trail;

    if (stop.kind == IntegralStop::Kind::FixedHorizon) {
        const IntegrandFunction f = f_in.restricted(stop.horizon);
        const ExtReal active = f.nonzero_measure();
        if (!(ExtReal(0.0) < active)) throw PreconditionViolation("integrand vanishes almost everywhere");
        const bool continuous = pe.sigma2 > 0.0 || pe.nu_total.is_pos_inf() ||
                                (active.is_pos_inf() && ExtReal(0.0) < pe.nu_total);
        TrailEntry cont = entry("integrand-continuity", kIntegrandCont);
        cont.fact("eta.sigma2_positive", pe.sigma2 > 0.0)
            .fact("nonzero_measure", active.str())
            .fact("eta.nu_total", pe.nu_total.str())
            .fact("continuous", continuous);
        if (!continuous) {
            // sigma^2 = 0 and finite image measure: a drift plus compound Poisson law
            const double drift = pe.drift.value_or(0.0);
            double shift = 0.0;
            if (drift != 0.0) {
                const ExtReal integral = f.integral();
                if (!integral.is_finite()) throw ParameterError("integral of f diverges against a non-zero drift");
                shift = drift * integral.value();
            }
            cont.fact("shift", std::to_string(shift));
            trail.push_back(cont);
            Tri atom = Tri::Unknown;
            if (shift == 0.0) {
                atom = Tri::Yes;
            } else if (pe.nu_total == ExtReal(0.0)) {
                atom = Tri::No;
            }
            return LawVerdict(atom, Tri::No, Tri::No, trail);
        }
        trail.push_back(cont);

        ClauseSearch search(trail);
        search.attempt("integrand-ac/i", std::string(kIntegrandAc) + " (i)", [&](TrailEntry& e) {
            e.fact("nonzero_measure", active.str());
            const GrowthThreshold k = active.is_finite() ? GrowthThreshold::quarter_over(active.value()) : GrowthThreshold::positive();
            const GrowthThreshold h = active.is_finite() ? GrowthThreshold::half_over(active.value()) : GrowthThreshold::positive();
            return growth_condition(e, t, k, h, opt);
        });
        search.attempt("integrand-ac/ii", std::string(kIntegrandAc) + " (ii)", [&](TrailEntry& e) {
            e.fact("eta.nu_ac_total", pe.nu_ac_total.str());
            return pe.nu_ac_total.is_pos_inf() || (active.is_pos_inf() && ExtReal(0.0) < pe.nu_ac_total);
        });
        search.attempt("integrand-ac/iii", std::string(kIntegrandAc) + " (iii)", [&](TrailEntry& e) {
            const bool lusin = f.lusin_n_inverse();
            const bool infinite_image = pe.nu_total.is_pos_inf() || (active.is_pos_inf() && ExtReal(0.0) < pe.nu_total);
            e.fact("f.lusin_n_inverse", lusin).fact("image_measure_infinite", infinite_image);
            return lusin && infinite_image;
        });
        search.attempt("integrand-ac/iv", std::string(kIntegrandAc) + " (iv)", [&](TrailEntry& e) {
            bool constant_piece = false;
            for (const IntegrandPiece& p : f.pieces())
                constant_piece = constant_piece || (p.form == IntegrandPiece::Form::Constant && !p.is_zero());
            e.fact("f.nonzero_constant_piece", constant_piece);
            if (!constant_piece) return false;
            const ConditionResult m = check_marginals_ac(eta, opt);
            e.condition("marginals_ac.eta", m);
            return m.holds();
        });
        if (search.fired()) return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
        return LawVerdict(Tri::No, Tri::Yes, Tri::Unknown, trail);
    }

    const IntegrandFunction& f = f_in;
    if (!f.nonzero_near_zero()) throw PreconditionViolation("integrand must be non-zero on a positive-measure set near 0");
    TrailEntry cont = entry("random-stop-continuity", kIntegrandCont);
    const bool continuous = pe.sigma2 > 0.0 || pe.nu_total.is_pos_inf();
    cont.fact("eta.sigma2_positive", pe.sigma2 > 0.0)
        .fact("eta.nu_total", pe.nu_total.str())
        .fact("eta.compound_poisson_or_zero", cpp_like(pe))
        .fact("time_law", stop.time_law);
    trail.push_back(cont);
    // eta has no jump before the random time with positive probability
    if (cpp_like(pe)) return LawVerdict(Tri::Yes, Tri::No, Tri::No, trail);

    ClauseSearch search(trail);
    search.attempt("random-stop-ac/i", std::string(kRandomStopAc) + " (i)", [&](TrailEntry& e) {
        return growth_condition(e, t, GrowthThreshold::infinite(), GrowthThreshold::infinite(), opt);
    });
    search.attempt("random-stop-ac/ii", std::string(kRandomStopAc) + " (ii)", [&](TrailEntry& e) {
        e.fact("eta.nu_ac_total", pe.nu_ac_total.str());
        return pe.nu_ac_total.is_pos_inf();
    });
    search.attempt("random-stop-ac/iii", std::string(kRandomStopAc) + " (iii)", [&](TrailEntry& e) {
        e.fact("f.lusin_n_inverse", f.lusin_n_inverse()).fact("eta.nu_total", pe.nu_total.str());
        return f.lusin_n_inverse() && pe.nu_total.is_pos_inf();
    });
    search.attempt("random-stop-ac/iv", std::string(kRandomStopAc) + " (iv)", [&](TrailEntry& e) {
        const bool const_start = f.constant_near_zero().has_value();
        e.fact("f.constant_nonzero_near_zero", const_start);
        if (!const_start) return false;
        const ConditionResult m = check_marginals_ac(eta, opt);
        e.condition("marginals_ac.eta", m);
        return m.holds();
    });
    search.attempt("random-stop-ac/v", std::string(kRandomStopAc) + " (v)", [&](TrailEntry& e) {
        const bool ae = f.nonzero_almost_everywhere() && !f.domain_end().is_finite();
        e.fact("eta.finite_variation_nonzero_drift", nonzero_drift(pe))
            .fact("f.nonzero_almost_everywhere", ae)
            .fact("time_absolutely_continuous", stop.time_absolutely_continuous);
        return nonzero_drift(pe) && ae && stop.time_absolutely_continuous;
    });
    if (search.fired()) return LawVerdict(Tri::No, Tri::Yes, Tri::Yes, trail);
    if (continuous) return LawVerdict(Tri::No, Tri::Yes, Tri::Unknown, trail);
    return LawVerdict(Tri::Unknown, Tri::Unknown, Tri::Unknown, trail);
}

}  // namespace kefun

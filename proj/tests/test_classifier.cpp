#include <doctest.h>

#include <cmath>

#include "kefun/classifier.hpp"
#include "kefun/errors.hpp"
#include "kefun/scenario.hpp"
#include "kefun/support.hpp"

using namespace kefun;

namespace {

ProcessSpec with_flag(ProcessSpec p, AssertedFlag f) {
    p.asserted.insert(f);
    return p;
}

ProcessSpec atoms(std::vector<Atom> list, double drift = 0.0) {
    return {LevyTriplet::from_drift(0.0, LevyMeasure({Atoms{std::move(list)}}), drift), {}};
}

ProcessSpec half_stable_subordinator() {
    return with_flag({LevyTriplet::from_drift(0.0, LevyMeasure({StablePiece{0.5, 1.0, 0.0, 1.0}}), 0.0), {}},
                     AssertedFlag::AcpHolds);
}

ProcessSpec lacunary_singular() {
    return with_flag({LevyTriplet::from_drift(0.0, LevyMeasure({LacunaryAtoms{0.5, 3, 1}}), 0.0), {}},
                     AssertedFlag::PotentialMeasureSingular);
}

}  // namespace

TEST_CASE("support of the killed functional") {
    SUBCASE("zero eta gives the point 0") {
        const auto d = classify_support(brownian(), zero_process(), 1.0);
        CHECK(d.shape == SupportShape::Point);
        CHECK(d.relation == SupportRelation::Equal);
        CHECK(d.set == ClosedSet::point(0.0));
    }
    SUBCASE("two drifts give the interval up to the drift ratio") {
        const auto d = classify_support(pure_drift(1.0), pure_drift(2.0), 1.0);
        CHECK(d.same_geometry(SupportDescriptor::interval(0.0, 2.0)));
        CHECK(d.relation == SupportRelation::Equal);
    }
    SUBCASE("infinite-variation eta gives the line") {
        for (const auto& xi : {zero_process(), pure_drift(1.0), poisson(), brownian()}) {
            const auto d = classify_support(xi, brownian(), 0.5);
            CHECK(d.shape == SupportShape::FullLine);
            CHECK(d.relation == SupportRelation::Equal);
        }
    }
    SUBCASE("subordinator eta gives the upper half line") {
        const auto d = classify_support(brownian(), half_stable_subordinator(), 1.0);
        CHECK(d.same_geometry(SupportDescriptor::half_line_up(0.0)));
    }
    SUBCASE("lattice example enumerates to the non-negative integers") {
        const auto d = classify_support(atoms({Atom{-std::log(2.0), 1.0, std::nullopt}}), poisson(), 1.0);
        CHECK(d.shape == SupportShape::SemigroupClosure);
        const auto set = enumerate_support(d, -0.5, 10.5, EnumerationOptions{12, 1e-9, 100000});
        for (int k = 0; k <= 10; ++k) CHECK(set.contains(k, 1e-9));
        for (const auto& s : set.segments()) {
            // exp(k ln 2) carries rounding, so near-equal points merge into tiny segments
            CHECK(s.hi.value() - s.lo.value() <= 1e-9);
            const double x = s.lo.value();
            CHECK(std::abs(x - std::round(x)) < 1e-9);
        }
    }
    SUBCASE("irrational jump ratio gives the line") {
        const auto eta = atoms({Atom{-1.0, 1.0, ExactNumber::parse("-1")}, Atom{std::sqrt(2.0), 1.0, ExactNumber::parse("sqrt(2)")}});
        const auto d = classify_support(poisson(), eta, 1.0);
        CHECK(d.shape == SupportShape::FullLine);
        CHECK(d.relation == SupportRelation::Equal);
    }
    SUBCASE("q must be positive") {
        CHECK_THROWS_AS((void)classify_support(brownian(), brownian(), 0.0), ParameterError);
    }
}

TEST_CASE("killed continuity and absolute continuity") {
    SUBCASE("Gaussian eta") {
        const auto v = classify_continuity_killed(brownian(), brownian(), 1.0);
        CHECK(v.absolutely_continuous() == Tri::Yes);
        CHECK(v.deciding_clause() == "killed-ac/i");
    }
    SUBCASE("compound Poisson eta has an atom at zero") {
        for (const auto& xi : {zero_process(), brownian(), poisson(), pure_drift(-1.0)}) {
            const auto v = classify_continuity_killed(xi, poisson(2.0), 1.0);
            CHECK(v.atom_at_zero() == Tri::Yes);
            CHECK(v.continuous() == Tri::No);
            CHECK(v.absolutely_continuous() == Tri::No);
        }
    }
    SUBCASE("compound Poisson xi with an ACP eta") {
        // the stable subordinator already meets the small-ball growth clause
        const auto v = classify_continuity_killed(poisson(), half_stable_subordinator(), 1.0);
        CHECK(v.absolutely_continuous() == Tri::Yes);
        CHECK(v.deciding_clause() == "killed-ac/i");
        // a lacunary eta fails every growth clause and is decided by ACP alone
        const auto lacunary = with_flag({LevyTriplet::from_drift(0.0, LevyMeasure({LacunaryAtoms{0.5, 3, 1}}), 0.0), {}},
                                        AssertedFlag::AcpHolds);
        const auto w = classify_continuity_killed(poisson(), lacunary, 1.0);
        CHECK(w.absolutely_continuous() == Tri::Yes);
        CHECK(w.deciding_clause() == "killed-ac/vi");
    }
    SUBCASE("singular potential measure gives a continuous singular law") {
        const auto v = classify_continuity_killed(zero_process(), lacunary_singular(), 1.0);
        CHECK(v.continuous() == Tri::Yes);
        CHECK(v.absolutely_continuous() == Tri::No);
        CHECK(v.atom_at_zero() == Tri::No);
    }
    SUBCASE("every trail entry names a clause and a citation") {
        const auto v = classify_continuity_killed(poisson(), half_stable_subordinator(), 1.0);
        REQUIRE_FALSE(v.trail().empty());
        for (const auto& e : v.trail()) {
            CHECK_FALSE(e.clause.empty());
            CHECK_FALSE(e.citation.empty());
        }
    }
}

TEST_CASE("unkilled absolute continuity") {
    SUBCASE("spectrally negative xi") {
        const auto xi = with_flag(brownian(1.0, 1.0), AssertedFlag::UnkilledIntegralConverges);
        const auto v = classify_ac_unkilled(xi, poisson());
        CHECK(v.absolutely_continuous() == Tri::Yes);
        CHECK(v.deciding_clause() == "unkilled-ac/viii");
    }
    SUBCASE("two compound Poisson processes away from zero stay undecided") {
        const auto xi = with_flag(poisson(), AssertedFlag::UnkilledIntegralConverges);
        const auto v = classify_ac_unkilled(xi, poisson(1.0, 2.0));
        CHECK(v.continuous() == Tri::Yes);
        CHECK(v.absolutely_continuous() == Tri::Unknown);
    }
    SUBCASE("Gaussian part on either side") {
        const auto xi = with_flag(brownian(0.5, 2.0), AssertedFlag::UnkilledIntegralConverges);
        for (const auto& eta : {poisson(), pure_drift(1.0), brownian()})
            CHECK(classify_ac_unkilled(xi, eta).absolutely_continuous() == Tri::Yes);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS((void)classify_ac_unkilled(pure_drift(1.0), brownian()), PreconditionViolation);
        CHECK_THROWS_AS((void)classify_ac_unkilled(with_flag(pure_drift(1.0), AssertedFlag::UnkilledIntegralConverges), zero_process()),
                        PreconditionViolation);
    }
}

TEST_CASE("fixed-horizon classification") {
    SUBCASE("Gaussian xi with a finite-variation drifting eta") {
        const auto v = classify_fixed_t(brownian(), atoms({Atom{1.0, 1.0, std::nullopt}}, 1.0), 1.0);
        CHECK(v.absolutely_continuous() == Tri::Yes);
        CHECK(v.deciding_clause() == "fixed-t-ac/v");
    }
    SUBCASE("both finite activity without Gaussian parts has an atom") {
        const auto v = classify_fixed_t(poisson(), atoms({Atom{1.0, 1.0, std::nullopt}}, 0.5), 1.0);
        CHECK(v.continuous() == Tri::No);
    }
    SUBCASE("Brownian eta") {
        const auto v = classify_fixed_t(poisson(), brownian(), 2.0);
        CHECK(v.absolutely_continuous() == Tri::Yes);
    }
}

TEST_CASE("deterministic integrands") {
    const auto one = IntegrandFunction::constant(1.0, 1.0);
    CHECK(classify_deterministic_integrand(one, brownian(), IntegralStop::fixed(1.0)).absolutely_continuous() == Tri::Yes);
    CHECK(classify_deterministic_integrand(one, poisson(), IntegralStop::fixed(1.0)).continuous() == Tri::No);
    const auto eta = with_flag(half_stable_subordinator(), AssertedFlag::MarginalsAbsolutelyContinuous);
    const auto v = classify_deterministic_integrand(IntegrandFunction::constant(2.0, ExtReal::pos_inf()), eta,
                                                    IntegralStop::exponential_time());
    CHECK(v.absolutely_continuous() == Tri::Yes);
}

TEST_CASE("verdict consistency is enforced") {
    CHECK_THROWS((void)LawVerdict(Tri::Yes, Tri::Yes, Tri::Unknown, Trail{TrailEntry{"x", "y", {}, {}}}));
    CHECK_THROWS((void)LawVerdict(Tri::Unknown, Tri::No, Tri::Yes, Trail{TrailEntry{"x", "y", {}, {}}}));
    CHECK_THROWS((void)LawVerdict(Tri::No, Tri::Unknown, Tri::Unknown, Trail{}));
    CHECK_NOTHROW((void)LawVerdict(Tri::Unknown, Tri::Unknown, Tri::Unknown, Trail{}));
}

TEST_CASE("golden table through the library") {
    const auto scenarios = load_scenarios(KEFUN_DATA_DIR "/golden_table.json");
    REQUIRE(scenarios.size() >= 30);
    for (const auto& s : scenarios) {
        CAPTURE(s.id);
        const auto c = classify(s);
        const auto check = check_expected(s, c);
        CHECK(check.has_expectation);
        CHECK(check.matched());
    }
}

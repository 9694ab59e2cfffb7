#include <doctest.h>

#include <cmath>

#include "kefun/errors.hpp"
#include "kefun/stats.hpp"
#include "kefun/verifier.hpp"

using namespace kefun;
using doctest::Approx;

namespace {

std::vector<double> exponential_sample(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> v(n);
    for (double& x : v) x = rng.exponential(1.0);
    return v;
}

}  // namespace

TEST_CASE("Kolmogorov distribution") {
    // tabulated quantiles of the limiting distribution
    CHECK(kolmogorov_quantile(0.05) == Approx(1.3581).epsilon(1e-4));
    CHECK(kolmogorov_quantile(0.01) == Approx(1.6276).epsilon(1e-4));
    CHECK(kolmogorov_survival(1.3581) == Approx(0.05).epsilon(1e-3));
    CHECK(ks_critical_two_sample(100, 100, 0.05) == Approx(1.3581 * std::sqrt(0.02)).epsilon(1e-3));
}

TEST_CASE("two-sample KS") {
    const std::vector<double> a{0.1, 0.4, 0.9, 1.3};
    CHECK(ks_two_sample(a, a).statistic() == 0.0);
    const std::vector<double> b{5.0, 6.0};
    CHECK(ks_two_sample(a, b).statistic() == 1.0);
    // tiny samples cannot reject at the asymptotic critical value
    CHECK(ks_two_sample(a, b).outcome() == Outcome::Pass);
    std::vector<double> low(100), high(100);
    for (int i = 0; i < 100; ++i) {
        low[i] = i;
        high[i] = 1000 + i;
    }
    CHECK(ks_two_sample(low, high).outcome() == Outcome::Fail);

    int passes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        passes += ks_two_sample(exponential_sample(10000, 2 * seed), exponential_sample(10000, 2 * seed + 1)).outcome() == Outcome::Pass;
    CHECK(passes >= 19);
}

TEST_CASE("one-sample KS") {
    const auto v = exponential_sample(10000, 3);
    CHECK(ks_one_sample(v, [](double x) { return 1.0 - std::exp(-x); }).outcome() == Outcome::Pass);
    CHECK(ks_one_sample(v, [](double x) { return 1.0 - std::exp(-2.0 * x); }).outcome() == Outcome::Fail);
}

TEST_CASE("support coverage") {
    SUBCASE("samples inside the interval") {
        std::vector<double> v;
        for (int i = 0; i <= 20000; ++i) v.push_back(2.0 * i / 20000.0);
        const auto r = support_coverage_test(v, SupportDescriptor::interval(0.0, 2.0));
        CHECK(r.diagnostics.at("outside_fraction") == 0.0);
        CHECK(r.outcome() == Outcome::Pass);
    }
    SUBCASE("points outside a point support") {
        const std::vector<double> v{0.0, 1.0, 2.0};
        const auto r = support_coverage_test(v, SupportDescriptor::zero());
        CHECK(r.diagnostics.at("outside_fraction") == Approx(2.0 / 3.0));
        CHECK(r.outcome() == Outcome::Fail);
    }
    SUBCASE("a gap in the sample is detected") {
        std::vector<double> v;
        for (int i = 0; i < 20000; ++i) {
            const double x = 2.0 * i / 20000.0;
            if (x < 0.5 || x > 1.5) v.push_back(x);
        }
        const auto r = support_coverage_test(v, SupportDescriptor::interval(0.0, 2.0));
        CHECK(r.diagnostics.at("outside_fraction") == 0.0);
        CHECK(r.outcome() == Outcome::Fail);
    }
    SUBCASE("a superset descriptor skips the outside check") {
        auto d = SupportDescriptor::interval(0.0, 1.0);
        d.relation = SupportRelation::Superset;
        std::vector<double> v;
        for (int i = 0; i <= 4000; ++i) v.push_back(-1.0 + 3.0 * i / 4000.0);
        const auto r = support_coverage_test(v, d);
        CHECK(r.diagnostics.count("outside_fraction") == 0);
        CHECK(r.outcome() == Outcome::Pass);
    }
}

TEST_CASE("atom at zero") {
    std::vector<double> v(1000, 0.0);
    for (std::size_t i = 0; i < 500; ++i) v[i] = 1.0 + static_cast<double>(i);
    const auto r = atom_at_zero_test(v, 1e-12, 0.5);
    CHECK(r.diagnostics.at("mass") == 0.5);
    CHECK(r.outcome() == Outcome::Pass);
    CHECK(atom_at_zero_test(v, 1e-12, 0.3).outcome() == Outcome::Fail);
    CHECK(atom_at_zero_test(v).outcome() == Outcome::Inconclusive);
    CHECK_THROWS_AS((void)atom_at_zero_test(v, 0.0), ParameterError);
}

TEST_CASE("max atom screen") {
    const auto e = exponential_sample(100000, 4);
    CHECK(max_atom_screen(e, 1e-3, 0.01).statistic() < 0.01);
    std::vector<double> half = exponential_sample(10000, 5);
    for (std::size_t i = 0; i < half.size(); i += 2) half[i] = 0.0;
    const auto r = max_atom_screen(half, 1e-9, 0.4, true);
    CHECK(r.statistic() == Approx(0.5).epsilon(1e-3));
    CHECK(r.diagnostics.at("window_start") == 0.0);
    CHECK(r.outcome() == Outcome::Pass);
}

TEST_CASE("stationarity") {
    SUBCASE("Brownian pair is stationary") {
        CHECK(stationarity_test(brownian(), brownian(), 1.0, 0.5, 20000, RngStream(6, 0)).outcome() == Outcome::Pass);
    }
    SUBCASE("constant start far from the law fails") {
        const std::vector<double> start(20000, 1000.0);
        const auto r = stationarity_test(brownian(), brownian(), 1.0, 0.1, start.size(), RngStream(6, 1), {},
                                         std::span<const double>(start));
        CHECK(r.outcome() == Outcome::Fail);
    }
    SUBCASE("zero eta from zero is trivially stationary") {
        const std::vector<double> start(1000, 0.0);
        const auto r = stationarity_test(brownian(), zero_process(), 1.0, 0.3, start.size(), RngStream(6, 2), {},
                                         std::span<const double>(start));
        CHECK(r.statistic() == 0.0);
        CHECK(r.outcome() == Outcome::Pass);
    }
}

TEST_CASE("support inclusion and tallies") {
    const std::vector<double> outer{0.0, 1.0, 2.0};
    const std::vector<double> inner{0.0, 2.0, 1.0 + 1e-12};
    CHECK(support_inclusion_test(inner, outer, 1e-9).outcome() == Outcome::Pass);
    const std::vector<double> stray{0.5};
    CHECK(support_inclusion_test(stray, outer, 1e-9).statistic() == 1.0);

    std::vector<EmpiricalReport> reports(3);
    reports[0].checks.push_back({"a", 1.0, 2.0, Direction::AtMost});
    reports[1].checks.push_back({"a", 3.0, 2.0, Direction::AtMost});
    const auto t = tally(reports);
    CHECK(t.passes == 1);
    CHECK(t.failures == 1);
    CHECK(t.inconclusive == 1);
    CHECK(t.acceptable(1));
    CHECK_FALSE(t.acceptable(0));
}

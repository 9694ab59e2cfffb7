#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "kefun/char_exponent.hpp"
#include "kefun/conditions.hpp"
#include "kefun/transform.hpp"
#include "oracles.hpp"

using namespace kefun;
using doctest::Approx;

namespace {

void check_close(Complex got, Complex want, double tol) {
    CHECK(std::abs(got - want) <= tol * (1.0 + std::abs(want)));
}

ProcessSpec half_stable_subordinator() {
    ProcessSpec p{LevyTriplet::from_drift(0.0, LevyMeasure({StablePiece{0.5, 1.0, 0.0, 1.0}}), 0.0), {}};
    p.asserted.insert(AssertedFlag::AcpHolds);
    return p;
}

ProcessSpec stable(double alpha) {
    return {LevyTriplet::from_gamma(0.0, LevyMeasure({StablePiece{alpha, 1.0, 1.0, 1.0}}), 0.0), {}};
}

}  // namespace

TEST_CASE("characteristic exponent examples") {
    CHECK(char_exponent(brownian().triplet, 2.0).real() == Approx(-2.0));
    CHECK(char_exponent(brownian().triplet, 2.0).imag() == Approx(0.0));
    for (double z : {0.3, 1.0, 7.5}) check_close(char_exponent(poisson().triplet, z), std::exp(Complex(0, z)) - 1.0, 1e-13);
    for (const auto& p : {brownian(), poisson(2.0), stable(1.5), half_stable_subordinator(), pure_drift(3.0)})
        CHECK(std::abs(char_exponent(p.triplet, 0.0)) == 0.0);
}

TEST_CASE("exponent of atomic triplets matches the direct sum") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> loc(-3.0, 3.0), mass(0.1, 2.0), zs(-20.0, 20.0);
    for (int trial = 0; trial < 20; ++trial) {
        oracle::AtomList list;
        std::vector<Atom> atoms;
        for (int k = 0; k < 4; ++k) {
            const double x = loc(gen), m = mass(gen);
            list.emplace_back(x, m);
            atoms.push_back(Atom{x, m, std::nullopt});
        }
        const double s2 = trial % 3 == 0 ? 0.5 : 0.0, gamma = loc(gen);
        const auto t = LevyTriplet::from_gamma(s2, LevyMeasure({Atoms{atoms}}), gamma);
        const double z = zs(gen);
        check_close(char_exponent(t, z), oracle::atomic_exponent(s2, gamma, list, z), 1e-12);
    }
}

TEST_CASE("stable and power densities against quadrature") {
    // Re psi for the symmetric stable piece with cutoff 1:
    // -2 int_0^1 (1 - cos zx) x^(-1-alpha) dx, computed after x = v^2 to smooth the origin
    // (for alpha = 1.5 the integrand tends to z^2 at v = 0)
    const double alpha = 1.5, z = 6.0;
    const double want = -2.0 * oracle::simpson(
        [&](double v) { return v == 0.0 ? z * z : 2.0 * std::pow(std::sin(0.5 * z * v * v), 2) * std::pow(v, -2.0 - 2.0 * alpha) * 2.0 * v; }, 0.0,
        1.0, 200000);
    CHECK(char_exponent(stable(alpha).triplet, z).real() == Approx(want).epsilon(1e-8));

    // constant density on (-2, -0.5): explicit sine/cosine integrals
    const auto t = LevyTriplet::from_gamma(0.0, LevyMeasure({DensityPiece::constant(-2.0, -0.5, 0.8)}), 0.1);
    const double zz = 2.5;
    const double re = 0.8 * oracle::simpson([&](double x) { return std::cos(zz * x) - 1.0; }, -2.0, -0.5);
    const double im = 0.1 * zz + 0.8 * oracle::simpson([&](double x) { return std::sin(zz * x); }, -2.0, -1.0) +
                      0.8 * oracle::simpson([&](double x) { return std::sin(zz * x) - zz * x; }, -1.0, -0.5);
    check_close(char_exponent(t, zz), Complex(re, im), 1e-10);
}

TEST_CASE("oscillatory helper integrals") {
    const double p = -1.5;
    const double want = oracle::simpson(
        [&](double v) { return v == 0.0 ? 0.0 : std::pow(v * v, p) * 2.0 * std::pow(std::sin(0.5 * v * v), 2) * 2.0 * v; }, 0.0, std::sqrt(10.0), 200000);
    CHECK(oscillatory::one_minus_cos(p, 0.0, 10.0) == Approx(want).epsilon(1e-10));
    const double s = oracle::simpson([](double u) { return std::sin(u) / u; }, 1.0, 40.0, 400000);
    CHECK(oscillatory::sine(-1.0, 1.0, 40.0) == Approx(s).epsilon(1e-10));
}

TEST_CASE("transform of constant integrands") {
    SUBCASE("f = 1 on [0, t] scales the triplet by t") {
        const auto eta = LevyTriplet::from_gamma(0.7, LevyMeasure({Atoms{{Atom{0.5, 2.0, std::nullopt}}}}), -0.3);
        const double t = 2.5;
        const auto r = transform_triplet(IntegrandFunction::constant(1.0, t), t, eta);
        CHECK(r.sigma2() == Approx(0.7 * t));
        CHECK(r.gamma() == Approx(-0.3 * t));
        CHECK(r.measure().total_mass().value() == Approx(2.0 * t));
        CHECK(r.measure().mass(Interval::closed(0.5, 0.5)).value() == Approx(2.0 * t));
    }
    SUBCASE("f = 2 on [0, 1] of a Poisson process moves the atom to 2 and zeroes gamma") {
        const auto r = transform_triplet(IntegrandFunction::constant(2.0, 1.0), 1.0, poisson().triplet);
        CHECK(r.sigma2() == 0.0);
        CHECK(r.gamma() == Approx(0.0).epsilon(1e-15));
        CHECK(r.measure().mass(Interval::closed(2.0, 2.0)) == ExtReal(1.0));
        CHECK(r.measure().total_mass() == ExtReal(1.0));
    }
    SUBCASE("e^-s against unit drift on [0, inf)") {
        const auto r = transform_triplet(IntegrandFunction::exponential(1.0, 1.0, ExtReal::pos_inf()), ExtReal::pos_inf(),
                                         pure_drift(1.0).triplet);
        CHECK(r.sigma2() == 0.0);
        CHECK(r.measure().is_zero());
        CHECK(r.gamma() == Approx(1.0));
    }
}

TEST_CASE("transformed exponent examples") {
    const auto two = transform_exponent(IntegrandFunction::constant(2.0, 1.0), 1.0, poisson().triplet);
    CHECK(std::abs(two(M_PI)) < 1e-12);
    const auto decay = transform_exponent(IntegrandFunction::exponential(1.0, 1.0, ExtReal::pos_inf()), ExtReal::pos_inf(),
                                          brownian().triplet);
    for (double z : {0.5, 2.0, 5.0}) check_close(decay(z), Complex(-z * z / 4.0, 0.0), 1e-9);
}

TEST_CASE("exponential integrand against Poisson: image triplet and exponent agree with quadrature") {
    const auto f = IntegrandFunction::exponential(1.5, 0.8, 4.0);
    const auto eta = poisson(2.0).triplet;
    const auto tri = transform_triplet(f, 4.0, eta);
    const auto psi = transform_exponent(f, 4.0, eta);
    for (double z : {0.4, 3.0, 11.0}) {
        const double re = oracle::simpson([&](double s) { return 2.0 * (std::cos(1.5 * std::exp(-0.8 * s) * z) - 1.0); }, 0.0, 4.0);
        const double im = oracle::simpson([&](double s) { return 2.0 * std::sin(1.5 * std::exp(-0.8 * s) * z); }, 0.0, 4.0);
        check_close(psi(z), Complex(re, im), 1e-9);
        check_close(char_exponent(tri, z), Complex(re, im), 1e-7);
    }
}

TEST_CASE("random step integrands on atomic eta against the brute-force image") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> val(-3.0, 3.0), len(0.1, 1.5), mass(0.1, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> breaks{0.0}, values;
        for (int k = 0; k < 3; ++k) {
            breaks.push_back(breaks.back() + len(gen));
            values.push_back(k == 1 && trial % 4 == 0 ? 0.0 : val(gen));
        }
        oracle::AtomList atoms;
        std::vector<Atom> cat;
        for (int k = 0; k < 3; ++k) {
            const double x = val(gen), m = mass(gen);
            atoms.emplace_back(x, m);
            cat.push_back(Atom{x, m, std::nullopt});
        }
        const double gamma = val(gen), s2 = trial % 2 ? 0.3 : 0.0;
        const auto eta = LevyTriplet::from_gamma(s2, LevyMeasure({Atoms{cat}}), gamma);
        const auto f = IntegrandFunction::step(breaks, {values[0], values[1], values[2]});
        const auto r = transform_triplet(f, breaks.back(), eta);

        double want_s2 = 0.0, want_gamma = 0.0;
        oracle::AtomList image;
        for (int k = 0; k < 3; ++k) {
            const double c = values[k], l = breaks[k + 1] - breaks[k];
            if (c == 0.0) continue;
            want_s2 += l * c * c * s2;
            want_gamma += l * c * gamma;
            for (const auto& [x, m] : atoms) {
                want_gamma += l * m * ((std::abs(c * x) <= 1.0 ? c * x : 0.0) - c * (std::abs(x) <= 1.0 ? x : 0.0));
                image.emplace_back(c * x, l * m);
            }
        }
        CHECK(r.sigma2() == Approx(want_s2).epsilon(1e-10));
        CHECK(r.gamma() == Approx(want_gamma).epsilon(1e-10));
        for (double z : {0.7, 2.3, 9.1})
            check_close(char_exponent(r, z), oracle::atomic_exponent(want_s2, want_gamma, image, z), 1e-10);
    }
}

TEST_CASE("Kallenberg condition") {
    for (auto th : {GrowthThreshold::infinite(), GrowthThreshold::positive(), GrowthThreshold::quarter_over(0.5)})
        CHECK(check_kallenberg(brownian().triplet, th).holds());
    CHECK(check_kallenberg(poisson().triplet, GrowthThreshold::infinite()).fails());
    CHECK(check_kallenberg(stable(1.2).triplet, GrowthThreshold::infinite()).holds());
    CHECK(check_kallenberg(stable(1.2).triplet, GrowthThreshold::infinite()).method == Method::Symbolic);
}

TEST_CASE("Hartman-Wintner condition") {
    CHECK(check_hartman_wintner(CharExponent(brownian().triplet), GrowthThreshold::infinite()).holds());
    CHECK(check_hartman_wintner(CharExponent(poisson().triplet), GrowthThreshold::positive()).fails());
    const auto poisson_drift = LevyTriplet::from_drift(0.0, poisson().triplet.measure(), 1.0);
    CHECK(check_hartman_wintner(CharExponent(poisson_drift), GrowthThreshold::positive()).fails());

    SUBCASE("numeric path on a bare callable") {
        // a logarithmic exponent settles at ratio 2
        const CharExponent log_growth([](double z) { return Complex(-2.0 * std::log1p(std::abs(z)), 0.0); });
        const auto pos = check_hartman_wintner(log_growth, GrowthThreshold::positive());
        CHECK(pos.method == Method::Numeric);
        CHECK(pos.holds());
        REQUIRE(pos.evidence.has_value());
        CHECK(pos.evidence->stabilized);
        CHECK(pos.evidence->estimate == Approx(2.0));
        CHECK(check_hartman_wintner(log_growth, GrowthThreshold::infinite()).fails());
        CHECK(check_hartman_wintner(log_growth, GrowthThreshold::half_over(1.0)).holds());
        // unbounded growth cannot be certified on a finite grid
        const CharExponent gauss([](double z) { return Complex(-0.5 * z * z, 0.0); });
        CHECK(check_hartman_wintner(gauss, GrowthThreshold::infinite()).verdict == Verdict::Unknown);
        const CharExponent bounded([](double z) { return std::exp(Complex(0.0, z)) - 1.0; });
        CHECK(check_hartman_wintner(bounded, GrowthThreshold::positive()).fails());
    }
}

TEST_CASE("Hawkes condition") {
    CHECK(check_hawkes(brownian()).holds());
    CHECK(check_hawkes(poisson()).fails());
    const ProcessSpec sub{LevyTriplet::from_drift(0.0, poisson(2.0).triplet.measure(), 1.0), {}};
    CHECK(check_hawkes(sub).holds());
}

TEST_CASE("absolute continuity of potential measures") {
    CHECK(check_acp(brownian()).holds());
    CHECK(check_acp(poisson()).fails());
    CHECK(check_acp(half_stable_subordinator()).holds());
}

TEST_CASE("unkilled convergence suggestion is conservative") {
    CHECK(suggest_unkilled_convergence(pure_drift(1.0), brownian()).holds());
    CHECK(suggest_unkilled_convergence(brownian(1.0, -1.0), brownian()).fails());
    CHECK(suggest_unkilled_convergence(pure_drift(0.0), pure_drift(1.0)).fails());
}

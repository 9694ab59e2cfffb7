#include "kefun/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "kefun/errors.hpp"
#include "kefun/parallel.hpp"
#include "kefun/stats.hpp"

namespace kefun {

namespace {

std::vector<double> sorted_copy(std::span<const double> s) {
    std::vector<double> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
}

double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= sorted.size()) return sorted.back();
    return sorted[k] + (pos - static_cast<double>(k)) * (sorted[k + 1] - sorted[k]);
}

bool any_in(const std::vector<double>& sorted, double lo, double hi) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), lo);
    return it != sorted.end() && *it <= hi;
}

void require_nonempty(std::span<const double> s, const char* what) {
    if (s.empty()) throw ParameterError(std::string(what) + ": empty sample");
}

}  // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(Direction d) { return d == Direction::AtMost ? "at_most" : "at_least"; }

Outcome EmpiricalReport::outcome() const {
    if (checks.empty()) return Outcome::Inconclusive;
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); }) ? Outcome::Pass
                                                                                            : Outcome::Fail;
}

EmpiricalReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level) {
    require_nonempty(a, "ks_two_sample");
    require_nonempty(b, "ks_two_sample");
    EmpiricalReport r;
    r.test = "ks_two_sample";
    r.checks.push_back({"ks_distance", ks_statistic(a, b), ks_critical_two_sample(a.size(), b.size(), level), Direction::AtMost});
    r.diagnostics["level"] = level;
    r.diagnostics["n_a"] = static_cast<double>(a.size());
    r.diagnostics["n_b"] = static_cast<double>(b.size());
    return r;
}

EmpiricalReport ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf, double level) {
    require_nonempty(sample, "ks_one_sample");
    const std::vector<double> s = sorted_copy(sample);
    EmpiricalReport r;
    r.test = "ks_one_sample";
    r.checks.push_back({"ks_distance", ks_statistic_one_sample(std::span<const double>(s), cdf),
                        ks_critical_one_sample(s.size(), level), Direction::AtMost});
    r.diagnostics["level"] = level;
    r.diagnostics["n"] = static_cast<double>(s.size());
    return r;
}

EmpiricalReport support_coverage_test(std::span<const double> sample, const SupportDescriptor& descriptor,
                                      const SupportTestOptions& opt) {
    require_nonempty(sample, "support_coverage_test");
    const std::vector<double> s = sorted_copy(sample);
    const double lo = s.front();
    const double hi = s.back();
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("support_coverage_test: non-finite sample");

    const bool whole = descriptor.shape == SupportShape::FullLine;
    const ClosedSet set = whole ? ClosedSet::whole_line()
                                : enumerate_support(descriptor, lo - 1.0 - opt.eps, hi + 1.0 + opt.eps, opt.enumeration);

    EmpiricalReport r;
    r.test = "support_coverage";
    r.notes["descriptor"] = descriptor.str();
    r.notes["relation"] = to_string(descriptor.relation);
    r.diagnostics["eps"] = opt.eps;
    r.diagnostics["sample_min"] = lo;
    r.diagnostics["sample_max"] = hi;
    // a Superset descriptor is an inner bound: the support contains it, so samples may fall outside
    if (descriptor.relation == SupportRelation::Equal) {
        std::size_t outside = 0;
        for (double x : s)
            if (!set.contains(x, opt.eps)) ++outside;
        const double outside_fraction = static_cast<double>(outside) / static_cast<double>(s.size());
        r.checks.push_back({"outside_fraction", outside_fraction, opt.max_outside, Direction::AtMost});
        r.diagnostics["outside_fraction"] = outside_fraction;
    } else {
        r.notes["outside_fraction"] = "skipped: the support contains the described set";
    }

    const double qlo = quantile(s, opt.lower_quantile);
    const double qhi = quantile(s, opt.upper_quantile);
    // coarsen the grid so that a cell holds min_cell_samples samples on average
    const double cap = std::max(1.0, std::floor(static_cast<double>(s.size()) / opt.min_cell_samples));
    const double width = std::max(opt.grid, (qhi - qlo) / cap);
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((qhi - qlo) / width)));
    std::size_t support_cells = 0;
    std::size_t hit = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        const double c0 = qlo + static_cast<double>(k) * width;
        const double c1 = std::min(c0 + width, std::max(qhi, c0));
        if (set.clipped(c0, c1).empty()) continue;
        ++support_cells;
        if (any_in(s, c0 - opt.eps, c1 + opt.eps)) ++hit;
    }
    const double coverage = support_cells == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(support_cells);
    r.checks.push_back({"coverage", coverage, opt.min_coverage, Direction::AtLeast});
    r.diagnostics["coverage"] = coverage;
    r.diagnostics["cell_width"] = width;
    r.diagnostics["support_cells"] = static_cast<double>(support_cells);
    r.diagnostics["uncovered_cells"] = static_cast<double>(support_cells - hit);
    r.diagnostics["quantile_low"] = qlo;
    r.diagnostics["quantile_high"] = qhi;
    return r;
}

EmpiricalReport atom_at_zero_test(std::span<const double> sample, double eps, std::optional<double> predicted,
                                  double sigmas) {
    require_nonempty(sample, "atom_at_zero_test");
    if (!(eps > 0.0)) throw ParameterError("atom_at_zero_test: eps must be positive");
    const double n = static_cast<double>(sample.size());
    const auto zeros = std::count_if(sample.begin(), sample.end(), [eps](double x) { return std::abs(x) <= eps; });
    const double mass = static_cast<double>(zeros) / n;
    EmpiricalReport r;
    r.test = "atom_at_zero";
    r.diagnostics["mass"] = mass;
    r.diagnostics["radius"] = sigmas * std::sqrt(mass * (1.0 - mass) / n);
    r.diagnostics["eps"] = eps;
    if (predicted) {
        const double p = *predicted;
        const double sd = std::sqrt(p * (1.0 - p) / n);
        r.diagnostics["predicted"] = p;
        r.checks.push_back({"deviation_in_sd", sd > 0.0 ? std::abs(mass - p) / sd : (mass == p ? 0.0 : INFINITY), sigmas,
                            Direction::AtMost});
    }
    return r;
}

EmpiricalReport max_atom_screen(std::span<const double> sample, double window, double threshold, bool expect_atom) {
    require_nonempty(sample, "max_atom_screen");
    if (!(window > 0.0)) throw ParameterError("max_atom_screen: window must be positive");
    const std::vector<double> s = sorted_copy(sample);
    std::size_t best = 0;
    double where = s.front();
    std::size_t i = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        while (s[j] - s[i] > window) ++i;
        if (j - i + 1 > best) {
            best = j - i + 1;
            where = s[i];
        }
    }
    const double mass = static_cast<double>(best) / static_cast<double>(s.size());
    EmpiricalReport r;
    r.test = "max_atom_screen";
    r.checks.push_back({"max_window_mass", mass, threshold, expect_atom ? Direction::AtLeast : Direction::AtMost});
    r.diagnostics["window"] = window;
    r.diagnostics["window_start"] = where;
    r.notes["expectation"] = expect_atom ? "atom" : "continuous";
    return r;
}

EmpiricalReport stationarity_test(const ProcessSpec& xi, const ProcessSpec& eta, double q, double t, std::size_t n,
                                  RngStream rng, const SimulationParams& params,
                                  std::optional<std::span<const double>> input, double level, int workers) {
    if (!(t > 0.0)) throw ParameterError("stationarity_test: t must be positive");
    std::vector<double> start;
    if (input) {
        start.assign(input->begin(), input->end());
    } else {
        start.resize(n);
        const RngStream source = rng.child(0);
        parallel_for(n, workers, [&](std::size_t i) { start[i] = killed_functional_sample(xi, eta, q, source.child(i), params); });
    }
    const std::vector<double> moved = gou_step(start, xi, eta, q, t, rng.child(1), params, workers);
    EmpiricalReport r = ks_two_sample(start, moved, level);
    r.test = "stationarity";
    r.diagnostics["q"] = q;
    r.diagnostics["t"] = t;
    r.notes["input"] = input ? "supplied" : "killed functional";
    return r;
}

EmpiricalReport support_inclusion_test(std::span<const double> inner, std::span<const double> outer, double eps,
                                       double max_outside) {
    require_nonempty(inner, "support_inclusion_test");
    require_nonempty(outer, "support_inclusion_test");
    const std::vector<double> o = sorted_copy(outer);
    std::size_t outside = 0;
    for (double x : inner)
        if (!any_in(o, x - eps, x + eps)) ++outside;
    EmpiricalReport r;
    r.test = "support_inclusion";
    const double frac = static_cast<double>(outside) / static_cast<double>(inner.size());
    r.checks.push_back({"outside_fraction", frac, max_outside, Direction::AtMost});
    r.diagnostics["eps"] = eps;
    return r;
}

SeedTally tally(std::span<const EmpiricalReport> reports) {
    SeedTally t;
    for (const EmpiricalReport& r : reports) {
        switch (r.outcome()) {
            case Outcome::Pass: ++t.passes; break;
            case Outcome::Fail: ++t.failures; break;
            case Outcome::Inconclusive: ++t.inconclusive; break;
        }
    }
    return t;
}

}  // namespace kefun

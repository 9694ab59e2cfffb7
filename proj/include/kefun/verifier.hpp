#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kefun/simulator.hpp"
#include "kefun/support.hpp"

namespace kefun {

enum class Outcome { Pass, Fail, Inconclusive };
std::string to_string(Outcome o);

/// statistic <= threshold (AtMost) or statistic >= threshold (AtLeast).
enum class Direction { AtMost, AtLeast };
std::string to_string(Direction d);

struct Check {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    Direction direction = Direction::AtMost;

    [[nodiscard]] bool passed() const {
        return direction == Direction::AtMost ? statistic <= threshold : statistic >= threshold;
    }
};

/// Result of one empirical test. The outcome is a function of the checks only:
/// Pass iff every check passes, Inconclusive iff there are none.
struct EmpiricalReport {
    std::string scenario_id;
    std::string test;
    std::vector<Check> checks;
    std::map<std::string, double> diagnostics;
    std::map<std::string, std::string> notes;

    [[nodiscard]] Outcome outcome() const;
    [[nodiscard]] double statistic() const { return checks.empty() ? 0.0 : checks.front().statistic; }
    [[nodiscard]] double threshold() const { return checks.empty() ? 0.0 : checks.front().threshold; }
};

/// Two-sample KS test with the asymptotic critical value at `level`.
EmpiricalReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level = 0.01);

/// One-sample KS test against a continuous CDF.
EmpiricalReport ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf,
                              double level = 0.01);

struct SupportTestOptions {
    double eps = 1e-6;           ///< fattening of the descriptor set
    double grid = 1e-2;          ///< smallest coverage cell width
    double min_cell_samples = 50;  ///< cells are widened until the sample averages this many per cell
    double max_outside = 0.0;    ///< allowed fraction of samples outside the fattened set
    double min_coverage = 0.95;  ///< required fraction of hit cells
    double lower_quantile = 0.025;
    double upper_quantile = 0.975;
    EnumerationOptions enumeration{64, 1e-9, 200000};
};

/// Equal descriptors: share of samples outside the eps-fattened set. Both relations:
/// share of the set's cells inside the central sample quantiles that receive a sample
/// (a Superset descriptor is a subset of the support, so only coverage applies).
EmpiricalReport support_coverage_test(std::span<const double> sample, const SupportDescriptor& descriptor,
                                      const SupportTestOptions& opt = {});

/// Estimates P(|V| <= eps) and, given a prediction, checks it within `sigmas`
/// binomial standard deviations.
EmpiricalReport atom_at_zero_test(std::span<const double> sample, double eps = 1e-12,
                                  std::optional<double> predicted = std::nullopt, double sigmas = 3.0);

/// Largest empirical mass of a closed window of the given width. With
/// expect_atom the check is mass >= threshold, otherwise mass <= threshold.
EmpiricalReport max_atom_screen(std::span<const double> sample, double window, double threshold,
                                bool expect_atom = false);

/// KS distance between a batch and its image under gou_step. Without an input
/// batch, killed samples are drawn from rng.child(0); the step uses rng.child(1).
EmpiricalReport stationarity_test(const ProcessSpec& xi, const ProcessSpec& eta, double q, double t, std::size_t n,
                                  RngStream rng, const SimulationParams& params = {},
                                  std::optional<std::span<const double>> input = std::nullopt, double level = 0.01,
                                  int workers = 1);

/// Share of `inner` samples farther than eps from every `outer` sample.
EmpiricalReport support_inclusion_test(std::span<const double> inner, std::span<const double> outer, double eps,
                                       double max_outside = 0.0);

/// Multi-seed summary: passes when at most `allowed_failures` reports fail.
struct SeedTally {
    int passes = 0;
    int failures = 0;
    int inconclusive = 0;
    [[nodiscard]] bool acceptable(int allowed_failures = 1) const { return failures <= allowed_failures; }
};
SeedTally tally(std::span<const EmpiricalReport> reports);

}  // namespace kefun

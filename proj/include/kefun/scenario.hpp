#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kefun/io.hpp"

namespace kefun {

enum class ScenarioMode { Killed, Unkilled, FixedHorizon, DeterministicIntegrand };
std::string to_string(ScenarioMode m);

/// Options for the empirical checks run by `verify`.
struct VerifyOptions {
    double level = 0.01;
    std::optional<double> support_eps;     ///< default: 1e-6 exact schemes, 1e-3 grid schemes
    double support_grid = 1e-2;
    double min_coverage = 0.95;
    std::optional<double> atom_mass;        ///< predicted P(V = 0)
    double atom_eps = 1e-12;
    double atom_window = 1e-9;              ///< max-atom screen window
    double continuous_max_mass = 0.01;      ///< screen threshold when the law is continuous
    std::optional<double> stationarity_t;   ///< run the GOU stationarity test with this step
    std::optional<double> start_constant;   ///< stationarity start X_0 = constant (negative control)
    double max_seed_failure_share = 0.1;     ///< failing seeds allowed, as a share of all seeds (rounded down)

    [[nodiscard]] int allowed_seed_failures(std::size_t seeds) const;
};

/// One (xi, eta, q, mode) combination, optionally with its expected classification.
struct Scenario {
    std::string id;
    ScenarioMode mode = ScenarioMode::Killed;
    ProcessSpec xi;
    ProcessSpec eta;
    double q = 0.0;  ///< killing rate; 0 means unkilled
    double t = 0.0;  ///< fixed horizon
    std::optional<IntegrandFunction> integrand;
    IntegralStop stop;
    SimulationParams params;
    VerifyOptions verify;
    std::optional<io::Json> expected;
};

/// Parses one scenario; `path` prefixes error messages.
Scenario scenario_from_json(const io::Json& j, const std::string& path);
io::Json to_json(const Scenario& s);

/// A document is either one scenario or {"scenarios": [...]}; both need schema_version.
std::vector<Scenario> scenarios_from_json(const io::Json& doc);
std::vector<Scenario> load_scenarios(const std::string& file);

struct Classification {
    std::optional<SupportDescriptor> support;  ///< killed mode only
    LawVerdict verdict;
};

/// Routes the scenario to the classifier matching its mode.
Classification classify(const Scenario& s, const CheckerOptions& opt = {});
io::Json to_json(const Classification& c);

/// Comparison with the scenario's "expected" block (shape, endpoints, flags, clause).
struct ExpectationCheck {
    bool has_expectation = false;
    std::vector<std::string> mismatches;
    [[nodiscard]] bool matched() const { return mismatches.empty(); }
};
ExpectationCheck check_expected(const Scenario& s, const Classification& c);

/// Same shape and relation, segment endpoints equal up to a relative tolerance.
bool geometry_matches(const SupportDescriptor& a, const SupportDescriptor& b, double rel_tol = 1e-12);

/// n samples of the scenario's functional. Throws SpecError for the deterministic-integrand mode.
SampleBatch simulate(const Scenario& s, std::size_t n, std::uint64_t seed, int workers = 1);

/// All empirical checks that apply to a scenario, for one seed.
std::vector<EmpiricalReport> verify_batch(const Scenario& s, const Classification& c, const SampleBatch& batch,
                                          std::uint64_t seed, int workers = 1);

}  // namespace kefun

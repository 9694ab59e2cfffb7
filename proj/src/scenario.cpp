#include "kefun/scenario.hpp"

#include <cmath>
#include <fstream>

#include "kefun/errors.hpp"

namespace kefun {

namespace {

using io::Json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SpecError(path + ": " + msg); }

double number(const Json& j, const std::string& path) {
    if (!j.is_number() || !std::isfinite(j.get<double>())) fail(path, "expected a finite number");
    return j.get<double>();
}

std::optional<double> optional_number(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) return std::nullopt;
    return number(j.at(key), path + "." + key);
}

ScenarioMode mode_from_string(const std::string& s, const std::string& path) {
    for (ScenarioMode m : {ScenarioMode::Killed, ScenarioMode::Unkilled, ScenarioMode::FixedHorizon,
                           ScenarioMode::DeterministicIntegrand})
        if (to_string(m) == s) return m;
    fail(path, "unknown mode '" + s + "'");
}

VerifyOptions verify_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    static const std::vector<std::string> known{"level", "support_eps", "support_grid", "min_coverage", "atom_mass",
                                                "atom_eps", "atom_window", "continuous_max_mass", "stationarity_t",
                                                "start_constant", "max_seed_failure_share"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) fail(path + "." + k, "unknown field");
    VerifyOptions o;
    o.level = optional_number(j, "level", path).value_or(o.level);
    o.support_eps = optional_number(j, "support_eps", path);
    o.support_grid = optional_number(j, "support_grid", path).value_or(o.support_grid);
    o.min_coverage = optional_number(j, "min_coverage", path).value_or(o.min_coverage);
    o.atom_mass = optional_number(j, "atom_mass", path);
    o.atom_eps = optional_number(j, "atom_eps", path).value_or(o.atom_eps);
    o.atom_window = optional_number(j, "atom_window", path).value_or(o.atom_window);
    o.continuous_max_mass = optional_number(j, "continuous_max_mass", path).value_or(o.continuous_max_mass);
    o.stationarity_t = optional_number(j, "stationarity_t", path);
    o.start_constant = optional_number(j, "start_constant", path);
    o.max_seed_failure_share = optional_number(j, "max_seed_failure_share", path).value_or(o.max_seed_failure_share);
    if (o.max_seed_failure_share < 0.0 || o.max_seed_failure_share >= 1.0)
        fail(path + ".max_seed_failure_share", "must lie in [0, 1)");
    if (!(o.level > 0.0 && o.level < 1.0)) fail(path + ".level", "must lie in (0, 1)");
    if (o.atom_mass && (*o.atom_mass < 0.0 || *o.atom_mass > 1.0)) fail(path + ".atom_mass", "must lie in [0, 1]");
    if (o.stationarity_t && !(*o.stationarity_t > 0.0)) fail(path + ".stationarity_t", "must be positive");
    return o;
}

Json verify_to_json(const VerifyOptions& o) {
    Json j{{"level", o.level},
           {"support_grid", o.support_grid},
           {"min_coverage", o.min_coverage},
           {"atom_eps", o.atom_eps},
           {"atom_window", o.atom_window},
           {"continuous_max_mass", o.continuous_max_mass},
           {"max_seed_failure_share", o.max_seed_failure_share}};
    if (o.support_eps) j["support_eps"] = *o.support_eps;
    if (o.atom_mass) j["atom_mass"] = *o.atom_mass;
    if (o.stationarity_t) j["stationarity_t"] = *o.stationarity_t;
    if (o.start_constant) j["start_constant"] = *o.start_constant;
    return j;
}

IntegralStop stop_from_json(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) fail(path + ".kind", "expected 'fixed' or 'random'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        if (!j.contains("horizon")) fail(path + ".horizon", "missing required field");
        const ExtReal h = io::ext_real_from_json(j.at("horizon"), path + ".horizon");
        if (!(ExtReal(0.0) < h)) fail(path + ".horizon", "must be positive");
        return IntegralStop::fixed(h);
    }
    if (kind == "random") {
        bool ac = true;
        if (j.contains("absolutely_continuous")) {
            if (!j.at("absolutely_continuous").is_boolean()) fail(path + ".absolutely_continuous", "expected a boolean");
            ac = j.at("absolutely_continuous").get<bool>();
        }
        std::string law = "exponential";
        if (j.contains("law")) {
            if (!j.at("law").is_string()) fail(path + ".law", "expected a string");
            law = j.at("law").get<std::string>();
        }
        return IntegralStop::random_time(ac, law);
    }
    fail(path + ".kind", "expected 'fixed' or 'random'");
}

Json stop_to_json(const IntegralStop& s) {
    if (s.kind == IntegralStop::Kind::FixedHorizon) return Json{{"kind", "fixed"}, {"horizon", io::to_json(s.horizon)}};
    return Json{{"kind", "random"}, {"absolutely_continuous", s.time_absolutely_continuous}, {"law", s.time_law}};
}

bool close(ExtReal a, ExtReal b, double tol) {
    if (!a.is_finite() || !b.is_finite()) return a == b;
    const double x = a.value();
    const double y = b.value();
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

bool sets_match(const ClosedSet& a, const ClosedSet& b, double tol) {
    if (a.segments().size() != b.segments().size()) return false;
    for (std::size_t i = 0; i < a.segments().size(); ++i)
        if (!close(a.segments()[i].lo, b.segments()[i].lo, tol) || !close(a.segments()[i].hi, b.segments()[i].hi, tol))
            return false;
    return true;
}

void collect_entries(const Trail& trail, std::vector<const TrailEntry*>& out) {
    for (const TrailEntry& e : trail) out.push_back(&e);
}

void collect_entries(const SupportDescriptor& d, std::vector<const TrailEntry*>& out) {
    collect_entries(d.trail, out);
    if (d.refinement) collect_entries(*d.refinement, out);
}

/// Exact-arithmetic schemes get the tight fattening, grid schemes the loose one.
bool exact_scheme(const Scenario& s) {
    const JumpModel x(s.xi.triplet, s.params);
    const JumpModel e(s.eta.triplet, s.params);
    return x.exact_jumps() && e.exact_jumps() && x.gaussian_rate() == 0.0 && e.gaussian_rate() == 0.0;
}

}  // namespace

int VerifyOptions::allowed_seed_failures(std::size_t seeds) const {
    return static_cast<int>(std::floor(max_seed_failure_share * static_cast<double>(seeds) + 1e-9));
}

std::string to_string(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::Killed: return "killed";
        case ScenarioMode::Unkilled: return "unkilled";
        case ScenarioMode::FixedHorizon: return "fixed_t";
        case ScenarioMode::DeterministicIntegrand: return "deterministic_integrand";
    }
    return "killed";
}

namespace {

Scenario parse_scenario(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a scenario object");
    static const std::vector<std::string> known{"schema_version", "id", "description", "mode", "xi", "eta", "q", "t",
                                                "integrand", "stop", "params", "verify", "expected"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) fail(path + "." + k, "unknown field");

    Scenario s;
    if (!j.contains("id") || !j.at("id").is_string()) fail(path + ".id", "expected a string id");
    s.id = j.at("id").get<std::string>();
    const std::string& at = path;

    if (j.contains("q")) {
        s.q = number(j.at("q"), at + ".q");
        if (s.q < 0.0) fail(at + ".q", "killing rate must be non-negative");
    }
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) fail(at + ".mode", "expected a string");
        s.mode = mode_from_string(j.at("mode").get<std::string>(), at + ".mode");
    } else {
        s.mode = s.q > 0.0 ? ScenarioMode::Killed : ScenarioMode::Unkilled;
    }
    if (j.contains("t")) s.t = number(j.at("t"), at + ".t");

    const bool integrand_mode = s.mode == ScenarioMode::DeterministicIntegrand;
    if (!j.contains("eta")) fail(at + ".eta", "missing required field");
    s.eta = io::process_from_json(j.at("eta"), at + ".eta");
    if (j.contains("xi")) {
        if (integrand_mode) fail(at + ".xi", "not used by the deterministic-integrand mode");
        s.xi = io::process_from_json(j.at("xi"), at + ".xi");
    } else if (!integrand_mode) {
        fail(at + ".xi", "missing required field");
    }
    if (j.contains("params")) s.params = io::params_from_json(j.at("params"), at + ".params");
    if (j.contains("verify")) s.verify = verify_from_json(j.at("verify"), at + ".verify");
    if (j.contains("expected")) {
        if (!j.at("expected").is_object()) fail(at + ".expected", "expected an object");
        s.expected = j.at("expected");
        for (const auto& [k, v] : s.expected->items()) {
            if (k != "support" && k != "verdict" && k != "clause" && k != "citation") fail(at + ".expected." + k, "unknown field");
            if ((k == "clause" || k == "citation") && !v.is_string()) fail(at + ".expected." + k, "expected a string");
        }
        if (s.expected->contains("support")) io::support_from_json(s.expected->at("support"), at + ".expected.support");
        if (s.expected->contains("verdict")) {
            const Json& v = s.expected->at("verdict");
            for (const char* k : {"atom_at_zero", "continuous", "absolutely_continuous"})
                if (v.contains(k)) {
                    if (!v.at(k).is_string()) fail(at + ".expected.verdict." + k, "expected yes/no/unknown");
                    try {
                        (void)tri_from_string(v.at(k).get<std::string>());
                    } catch (const SpecError& e) {
                        fail(at + ".expected.verdict." + k, e.what());
                    }
                }
        }
    }

    switch (s.mode) {
        case ScenarioMode::Killed:
            if (!(s.q > 0.0)) fail(at + ".q", "killed mode needs q > 0");
            break;
        case ScenarioMode::Unkilled:
            if (s.q != 0.0) fail(at + ".q", "unkilled mode needs q = 0");
            if (!s.xi.has(AssertedFlag::UnkilledIntegralConverges) && !s.eta.has(AssertedFlag::UnkilledIntegralConverges))
                fail(at + ".q", "q = 0 requires the unkilled_integral_converges assertion on xi or eta");
            break;
        case ScenarioMode::FixedHorizon:
            if (!(s.t > 0.0)) fail(at + ".t", "fixed_t mode needs t > 0");
            break;
        case ScenarioMode::DeterministicIntegrand:
            if (!j.contains("integrand")) fail(at + ".integrand", "missing required field");
            if (!j.contains("stop")) fail(at + ".stop", "missing required field");
            s.integrand = io::integrand_from_json(j.at("integrand"), at + ".integrand");
            s.stop = stop_from_json(j.at("stop"), at + ".stop");
            break;
    }
    return s;
}

}  // namespace

Scenario scenario_from_json(const Json& j, const std::string& path) {
    try {
        return parse_scenario(j, path);
    } catch (const SpecError& e) {
        if (j.is_object() && j.contains("id") && j.at("id").is_string())
            throw SpecError(std::string(e.what()) + " (scenario '" + j.at("id").get<std::string>() + "')");
        throw;
    }
}

Json to_json(const Scenario& s) {
    Json j{{"schema_version", io::kSchemaVersion}, {"id", s.id}, {"mode", to_string(s.mode)}, {"eta", io::to_json(s.eta)},
           {"params", io::to_json(s.params)},      {"verify", verify_to_json(s.verify)}};
    if (s.mode != ScenarioMode::DeterministicIntegrand) j["xi"] = io::to_json(s.xi);
    if (s.mode == ScenarioMode::Killed) j["q"] = s.q;
    if (s.mode == ScenarioMode::Unkilled) j["q"] = 0.0;
    if (s.mode == ScenarioMode::FixedHorizon) j["t"] = s.t;
    if (s.integrand) j["integrand"] = io::to_json(*s.integrand);
    if (s.mode == ScenarioMode::DeterministicIntegrand) j["stop"] = stop_to_json(s.stop);
    if (s.expected) j["expected"] = *s.expected;
    return j;
}

std::vector<Scenario> scenarios_from_json(const Json& doc) {
    io::require_schema_version(doc);
    std::vector<Scenario> out;
    if (doc.contains("scenarios")) {
        const Json& list = doc.at("scenarios");
        if (!list.is_array()) fail("$.scenarios", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) out.push_back(scenario_from_json(list[i], "$.scenarios[" + std::to_string(i) + "]"));
    } else {
        out.push_back(scenario_from_json(doc, "$"));
    }
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw SpecError(file + ": cannot open scenario file");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError(file + ": invalid JSON: " + e.what());
    }
    return scenarios_from_json(doc);
}

Classification classify(const Scenario& s, const CheckerOptions& opt) {
    switch (s.mode) {
        case ScenarioMode::Killed:
            return {classify_support(s.xi, s.eta, s.q), classify_continuity_killed(s.xi, s.eta, s.q, opt)};
        case ScenarioMode::Unkilled: return {std::nullopt, classify_ac_unkilled(s.xi, s.eta, opt)};
        case ScenarioMode::FixedHorizon: return {std::nullopt, classify_fixed_t(s.xi, s.eta, s.t, opt)};
        case ScenarioMode::DeterministicIntegrand:
            return {std::nullopt, classify_deterministic_integrand(*s.integrand, s.eta, s.stop, opt)};
    }
    throw std::logic_error("classify: unknown mode");
}

Json to_json(const Classification& c) {
    Json j{{"verdict", io::to_json(c.verdict)}};
    if (c.support) j["support"] = io::to_json(*c.support);
    return j;
}

bool geometry_matches(const SupportDescriptor& a, const SupportDescriptor& b, double rel_tol) {
    if (a.shape != b.shape || a.relation != b.relation) return false;
    if (a.is_semigroup())
        return sets_match(a.generators, b.generators, rel_tol) && geometry_matches(*a.log_factors, *b.log_factors, rel_tol);
    return sets_match(a.set, b.set, rel_tol);
}

ExpectationCheck check_expected(const Scenario& s, const Classification& c) {
    ExpectationCheck out;
    if (!s.expected) return out;
    out.has_expectation = true;
    const Json& e = *s.expected;
    if (e.contains("support")) {
        const SupportDescriptor want = io::support_from_json(e.at("support"), "expected.support");
        if (!c.support) {
            out.mismatches.push_back("support: expected " + want.str() + ", none computed");
        } else if (!geometry_matches(want, *c.support)) {
            out.mismatches.push_back("support: expected " + to_string(want.shape) + " " + want.str() + ", got " +
                                     to_string(c.support->shape) + " " + c.support->str());
        }
    }
    if (e.contains("verdict")) {
        const Json& v = e.at("verdict");
        const std::pair<const char*, Tri> flags[] = {{"atom_at_zero", c.verdict.atom_at_zero()},
                                                     {"continuous", c.verdict.continuous()},
                                                     {"absolutely_continuous", c.verdict.absolutely_continuous()}};
        for (const auto& [name, got] : flags) {
            if (!v.contains(name)) continue;
            const Tri want = tri_from_string(v.at(name).get<std::string>());
            if (want != got) out.mismatches.push_back(std::string(name) + ": expected " + to_string(want) + ", got " + to_string(got));
        }
    }
    if (e.contains("clause")) {
        const std::string want = e.at("clause").get<std::string>();
        std::vector<const TrailEntry*> seen;
        if (c.support) collect_entries(*c.support, seen);
        collect_entries(c.verdict.trail(), seen);
        const auto hit = std::find_if(seen.begin(), seen.end(), [&](const TrailEntry* t) { return t->clause == want; });
        if (hit == seen.end()) {
            out.mismatches.push_back("clause: expected " + want + " in the trail");
        } else if (e.contains("citation") && e.at("citation").get<std::string>() != (*hit)->citation) {
            out.mismatches.push_back("citation: expected '" + e.at("citation").get<std::string>() + "', got '" +
                                     (*hit)->citation + "'");
        }
    }
    return out;
}

SampleBatch simulate(const Scenario& s, std::size_t n, std::uint64_t seed, int workers) {
    if (n == 0) throw ParameterError("sample count must be at least 1");
    switch (s.mode) {
        case ScenarioMode::Killed:
            return sample_batch(s.xi, s.eta, FunctionalKind::Killed, s.q, n, seed, s.params, workers, s.id);
        case ScenarioMode::Unkilled:
            return sample_batch(s.xi, s.eta, FunctionalKind::Unkilled, 0.0, n, seed, s.params, workers, s.id);
        case ScenarioMode::FixedHorizon:
            return sample_batch(s.xi, s.eta, FunctionalKind::FixedHorizon, s.t, n, seed, s.params, workers, s.id);
        case ScenarioMode::DeterministicIntegrand:
            throw SpecError(s.id + ": the deterministic-integrand mode is classification only");
    }
    throw std::logic_error("simulate: unknown mode");
}

std::vector<EmpiricalReport> verify_batch(const Scenario& s, const Classification& c, const SampleBatch& batch,
                                          std::uint64_t seed, int workers) {
    std::vector<EmpiricalReport> out;
    const std::vector<double>& v = batch.values;
    const double n = static_cast<double>(v.size());
    const VerifyOptions& o = s.verify;

    if (c.support) {
        SupportTestOptions opt;
        opt.eps = o.support_eps.value_or(exact_scheme(s) ? 1e-6 : 1e-3);
        opt.grid = o.support_grid;
        opt.min_coverage = o.min_coverage;
        out.push_back(support_coverage_test(v, *c.support, opt));
    }

    EmpiricalReport atom = atom_at_zero_test(v, o.atom_eps, o.atom_mass);
    const double mass = atom.diagnostics.at("mass");
    if (!o.atom_mass) {
        // no prediction: check the sign of the verdict only
        if (c.verdict.atom_at_zero() == Tri::Yes) atom.checks.push_back({"mass", mass, 10.0 / n, Direction::AtLeast});
        if (c.verdict.atom_at_zero() == Tri::No) atom.checks.push_back({"mass", mass, 1e-3, Direction::AtMost});
    }
    out.push_back(atom);

    if (c.verdict.continuous() == Tri::Yes) out.push_back(max_atom_screen(v, o.atom_window, o.continuous_max_mass, false));
    if (c.verdict.continuous() == Tri::No) out.push_back(max_atom_screen(v, o.atom_window, 10.0 / n, true));

    if (o.stationarity_t && s.mode == ScenarioMode::Killed) {
        const RngStream rng(seed, 0x5747A710ULL);
        if (o.start_constant) {
            const std::vector<double> start(v.size(), *o.start_constant);
            out.push_back(stationarity_test(s.xi, s.eta, s.q, *o.stationarity_t, v.size(), rng, s.params,
                                            std::span<const double>(start), o.level, workers));
        } else {
            out.push_back(stationarity_test(s.xi, s.eta, s.q, *o.stationarity_t, v.size(), rng, s.params,
                                            std::span<const double>(v), o.level, workers));
        }
    }
    for (EmpiricalReport& r : out) r.scenario_id = s.id;
    return out;
}

}  // namespace kefun

#include "kefun/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "kefun/errors.hpp"
#include "kefun/scenario.hpp"

namespace kefun::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Options {
    std::string scenario;
    std::string id;
    std::size_t n = 10000;
    std::uint64_t seed = 42;
    std::string seeds;
    std::string out;
    std::string params;
    std::string format = "table";
    int workers = 1;
};

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

/// --params is inline JSON or @file.
Json read_params_override(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw SpecError("--params: cannot open " + text.substr(1));
        body.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw SpecError(std::string("--params: invalid JSON: ") + e.what());
    }
}

std::vector<Scenario> load_selected(const Options& o) {
    std::vector<Scenario> all = load_scenarios(o.scenario);
    if (!o.id.empty()) {
        auto it = std::find_if(all.begin(), all.end(), [&](const Scenario& s) { return s.id == o.id; });
        if (it == all.end()) throw SpecError(o.scenario + ": no scenario with id '" + o.id + "'");
        all = {*it};
    }
    if (!o.params.empty()) {
        const Json overrides = read_params_override(o.params);
        for (Scenario& s : all) s.params = io::params_from_json(overrides, "--params", s.params);
    }
    return all;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + path.string());
    f << text;
}

std::string verdict_row(const Scenario& s, const Classification& c) {
    std::ostringstream row;
    row << s.id << "  [" << to_string(s.mode) << "]";
    if (c.support) row << "  support " << to_string(c.support->shape) << " " << c.support->str();
    row << "  atom " << to_string(c.verdict.atom_at_zero()) << "  continuous " << to_string(c.verdict.continuous())
        << "  ac " << to_string(c.verdict.absolutely_continuous());
    const std::string clause = c.verdict.deciding_clause();
    if (!clause.empty()) row << "  by " << clause;
    return row.str();
}

int cmd_classify(const Options& o, std::ostream& out) {
    const std::vector<Scenario> scenarios = load_selected(o);
    Json rows = Json::array();
    int mismatched = 0;
    int checked = 0;
    std::ostringstream table;
    for (const Scenario& s : scenarios) {
        const Classification c = classify(s);
        const ExpectationCheck e = check_expected(s, c);
        Json row{{"id", s.id}, {"mode", to_string(s.mode)}, {"classification", to_json(c)}};
        if (e.has_expectation) {
            ++checked;
            if (!e.matched()) ++mismatched;
            row["expected_match"] = e.matched();
            row["mismatches"] = e.mismatches;
        }
        rows.push_back(row);
        table << verdict_row(s, c);
        if (e.has_expectation) table << "  " << (e.matched() ? "MATCH" : "MISMATCH");
        table << '\n';
        for (const std::string& m : e.mismatches) table << "    " << m << '\n';
    }
    if (checked > 0) table << checked - mismatched << "/" << checked << " expectations matched\n";

    const Json doc{{"schema_version", io::kSchemaVersion}, {"results", rows}};
    if (!o.out.empty()) write_file(o.out, doc.dump(2) + "\n");
    if (o.format == "json") {
        out << doc.dump(2) << '\n';
    } else {
        out << table.str();
    }
    return mismatched == 0 ? kPass : kVerificationFailure;
}

std::string batch_csv(const Scenario& s, const SampleBatch& b) {
    std::string text;
    text.reserve(b.values.size() * 24 + 512);
    auto header = [&](const std::string& k, const std::string& v) { text += "# " + k + ": " + v + "\n"; };
    header("kefun", "simulate");
    header("schema_version", std::to_string(io::kSchemaVersion));
    header("scenario", s.id);
    header("functional", to_string(b.kind));
    if (b.kind == FunctionalKind::Killed) header("q", format_double(b.rate));
    if (b.kind == FunctionalKind::FixedHorizon) header("t", format_double(b.horizon));
    header("n", std::to_string(b.values.size()));
    header("seed", std::to_string(b.seed));
    header("params", io::to_json(b.params).dump());
    for (double v : b.values) {
        text += format_double(v);
        text += '\n';
    }
    return text;
}

const Scenario& single(const std::vector<Scenario>& scenarios, const std::string& file) {
    if (scenarios.size() != 1)
        throw SpecError(file + ": holds " + std::to_string(scenarios.size()) + " scenarios; select one with --id");
    return scenarios.front();
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const std::vector<Scenario> scenarios = load_selected(o);
    const Scenario& s = single(scenarios, o.scenario);
    const SampleBatch b = simulate(s, o.n, o.seed, o.workers);
    const std::string csv = batch_csv(s, b);
    if (o.out.empty()) {
        out << csv;
    } else {
        write_file(o.out, csv);
    }
    return kPass;
}

struct ScenarioRun {
    Json report;
    bool passed = false;
};

ScenarioRun verify_scenario(const Scenario& s, const Options& o, const std::vector<std::uint64_t>& seeds) {
    const Classification c = classify(s);
    const ExpectationCheck e = check_expected(s, c);
    Json per_seed = Json::array();
    int failing_seeds = 0;
    for (std::uint64_t seed : seeds) {
        const SampleBatch b = simulate(s, o.n, seed, o.workers);
        const std::vector<EmpiricalReport> reports = verify_batch(s, c, b, seed, o.workers);
        const SeedTally t = tally(reports);
        if (t.failures > 0) ++failing_seeds;
        Json tests = Json::array();
        for (const EmpiricalReport& r : reports) tests.push_back(io::to_json(r));
        per_seed.push_back(Json{{"seed", seed}, {"passed", t.failures == 0}, {"tests", tests}});
    }
    const int allowed = s.verify.allowed_seed_failures(seeds.size());
    ScenarioRun run;
    run.passed = failing_seeds <= allowed;
    run.report = Json{{"schema_version", io::kSchemaVersion},
                      {"scenario", to_json(s)},
                      {"classification", to_json(c)},
                      {"n", o.n},
                      {"seeds", seeds},
                      {"failing_seeds", failing_seeds},
                      {"allowed_seed_failures", allowed},
                      {"outcome", run.passed ? "pass" : "fail"},
                      {"per_seed", per_seed}};
    if (e.has_expectation) run.report["expectation_mismatches"] = e.mismatches;
    return run;
}

std::string summary_line(const Json& report) {
    std::ostringstream line;
    line << report.at("scenario").at("id").get<std::string>() << "  " << report.at("outcome").get<std::string>()
         << "  failing seeds " << report.at("failing_seeds").get<int>() << "/" << report.at("seeds").size()
         << " (allowed " << report.at("allowed_seed_failures").get<int>() << ")";
    return line.str();
}

void seed_table(const Json& report, std::ostream& out) {
    for (const Json& seed : report.at("per_seed")) {
        for (const Json& t : seed.at("tests")) {
            out << "    seed " << seed.at("seed").get<std::uint64_t>() << "  " << std::left << std::setw(18)
                << t.at("test").get<std::string>() << std::right << " " << t.at("outcome").get<std::string>();
            for (const Json& c : t.at("checks"))
                out << "  " << c.at("name").get<std::string>() << "="
                    << (c.at("statistic").is_number() ? fixed(c.at("statistic").get<double>()) : std::string("inf"))
                    << (c.at("direction").get<std::string>() == "at_most" ? "<=" : ">=")
                    << fixed(c.at("threshold").get<double>());
            out << '\n';
        }
    }
}

int cmd_verify(const Options& o, std::ostream& out) {
    const std::vector<Scenario> scenarios = load_selected(o);
    const std::vector<std::uint64_t> seeds = o.seeds.empty() ? std::vector<std::uint64_t>{o.seed} : parse_seed_list(o.seeds);
    if (!o.out.empty()) fs::create_directories(o.out);
    Json all = Json::array();
    bool passed = true;
    for (const Scenario& s : scenarios) {
        const ScenarioRun run = verify_scenario(s, o, seeds);
        passed = passed && run.passed;
        if (!o.out.empty()) write_file(fs::path(o.out) / (s.id + ".json"), run.report.dump(2) + "\n");
        if (o.format == "table") {
            out << summary_line(run.report) << '\n';
            seed_table(run.report, out);
        }
        all.push_back(run.report);
    }
    if (o.format == "json") out << Json{{"schema_version", io::kSchemaVersion}, {"reports", all}}.dump(2) << '\n';
    return passed ? kPass : kVerificationFailure;
}

int cmd_report(const Options& o, std::ostream& out) {
    if (o.out.empty() || !fs::is_directory(o.out)) throw SpecError("report: --out must name a directory of verify reports");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(o.out))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    Json rows = Json::array();
    int failed = 0;
    for (const fs::path& p : files) {
        std::ifstream in(p);
        Json r;
        try {
            r = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw SpecError(p.string() + ": invalid JSON: " + e.what());
        }
        io::require_schema_version(r, p.string());
        if (!r.contains("outcome") || !r.contains("scenario")) throw SpecError(p.string() + ": not a verify report");
        if (r.at("outcome") != "pass") ++failed;
        if (o.format == "table") out << summary_line(r) << '\n';
        rows.push_back(Json{{"file", p.filename().string()},
                            {"scenario", r.at("scenario").at("id")},
                            {"outcome", r.at("outcome")},
                            {"failing_seeds", r.at("failing_seeds")}});
    }
    if (o.format == "json") {
        out << Json{{"schema_version", io::kSchemaVersion}, {"reports", rows}, {"failed", failed}}.dump(2) << '\n';
    } else {
        out << files.size() - static_cast<std::size_t>(failed) << "/" << files.size() << " scenarios passed\n";
    }
    return failed == 0 ? kPass : kVerificationFailure;
}

}  // namespace

int default_workers() {
    if (const char* env = std::getenv("KEFUN_WORKERS")) {
        int w = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, w);
        if (ec == std::errc() && ptr == end && w > 0) return w;
    }
    return 1;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto parse = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw ParameterError("--seeds: bad seed '" + std::string(s) + "'");
        return v;
    };
    std::string_view rest = text;
    while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const std::size_t dash = item.find('-');
        if (dash == std::string_view::npos) {
            seeds.push_back(parse(item));
        } else {
            const std::uint64_t a = parse(item.substr(0, dash));
            const std::uint64_t b = parse(item.substr(dash + 1));
            if (b < a || b - a > 100000) throw ParameterError("--seeds: bad range '" + std::string(item) + "'");
            for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
        }
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (seeds.empty()) throw ParameterError("--seeds: empty list");
    return seeds;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Support and continuity of killed exponential functionals of Levy processes"};
    app.require_subcommand(1);
    Options o;
    o.workers = default_workers();

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", o.scenario, "scenario JSON file");
        if (needs_scenario) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "symbolic support and continuity verdicts");
    common(classify_cmd, true);
    classify_cmd->add_option("--id", o.id, "only this scenario");
    classify_cmd->add_option("--out", o.out, "also write the JSON result here");

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "write a sample batch as CSV");
    common(simulate_cmd, true);
    simulate_cmd->add_option("--id", o.id, "scenario id when the file holds several");
    simulate_cmd->add_option("--n", o.n, "sample count")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", o.seed, "seed");
    simulate_cmd->add_option("--out", o.out, "CSV file (default stdout)");
    simulate_cmd->add_option("--params", o.params, "simulation parameter overrides, JSON or @file");
    simulate_cmd->add_option("--workers", o.workers, "worker threads (default $KEFUN_WORKERS or 1)")->check(CLI::PositiveNumber);

    CLI::App* verify_cmd = app.add_subcommand("verify", "classify, simulate and run the empirical checks");
    common(verify_cmd, true);
    verify_cmd->add_option("--id", o.id, "only this scenario");
    verify_cmd->add_option("--n", o.n, "samples per seed")->check(CLI::PositiveNumber);
    auto* seed_opt = verify_cmd->add_option("--seed", o.seed, "single seed");
    verify_cmd->add_option("--seeds", o.seeds, "seed list, e.g. 1-10 or 3,5,8")->excludes(seed_opt);
    verify_cmd->add_option("--out", o.out, "directory for per-scenario report JSON");
    verify_cmd->add_option("--params", o.params, "simulation parameter overrides, JSON or @file");
    verify_cmd->add_option("--workers", o.workers, "worker threads (default $KEFUN_WORKERS or 1)")->check(CLI::PositiveNumber);

    CLI::App* report_cmd = app.add_subcommand("report", "summarise a directory of verify reports");
    report_cmd->add_option("--out", o.out, "report directory")->required();
    report_cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    }

    try {
        if (*classify_cmd) return cmd_classify(o, out);
        if (*simulate_cmd) return cmd_simulate(o, out);
        if (*verify_cmd) return cmd_verify(o, out);
        return cmd_report(o, out);
    } catch (const SpecError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParameterError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionViolation& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace kefun::cli

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kefun/cli.hpp"
#include "kefun/errors.hpp"
#include "kefun/io.hpp"
#include "kefun/scenario.hpp"

using namespace kefun;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "kefun");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("kefun-test-" + std::to_string(std::rand()) + "-" + std::to_string(counter_++))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] std::string file(const std::string& name, const std::string& body) const {
        const auto p = path_ / name;
        std::ofstream(p) << body;
        return p.string();
    }
    [[nodiscard]] std::string str() const { return path_.string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

Json interval_scenario() {
    return Json::parse(R"({
      "schema_version": 1, "id": "interval",
      "xi": {"drift": 1}, "eta": {"drift": 2}, "q": 1,
      "expected": {"support": {"shape": "closed_interval", "set": [[0, 2]]},
                   "verdict": {"atom_at_zero": "no", "continuous": "yes", "absolutely_continuous": "yes"}}
    })");
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

TEST_CASE("json round trips") {
    const LevyMeasure nu({Atoms{{Atom{std::sqrt(2.0), 1.5, ExactNumber::parse("sqrt(2)")}}},
                          DensityPiece::power(0.0, ExtReal::pos_inf(), 2.0, -1.5), StablePiece{1.2, 1.0, 0.5, 0.8},
                          LacunaryAtoms{0.5, 3, -1}});
    const ProcessSpec p{LevyTriplet::from_gamma(0.3, nu, -0.1), {AssertedFlag::AcpHolds}};
    const Json j = io::to_json(p);
    CHECK(io::to_json(io::process_from_json(j, "$")) == j);

    const IntegrandFunction f({IntegrandPiece{0.0, 1.0, IntegrandPiece::Form::Constant, 2.0, 0.0},
                               IntegrandPiece{1.0, ExtReal::pos_inf(), IntegrandPiece::Form::Exponential, 1.0, 0.5}});
    CHECK(io::to_json(io::integrand_from_json(io::to_json(f), "$")) == io::to_json(f));

    SimulationParams sp;
    sp.grid_step = 0.005;
    sp.small_jumps = SmallJumpPolicy::Drop;
    CHECK(io::to_json(io::params_from_json(io::to_json(sp), "$")) == io::to_json(sp));

    const auto s = scenario_from_json(interval_scenario(), "$");
    const auto back = scenario_from_json(to_json(s), "$");
    CHECK(to_json(back) == to_json(s));
}

TEST_CASE("scenario validation reports the field") {
    SUBCASE("schema version is required") {
        Json doc = interval_scenario();
        doc.erase("schema_version");
        CHECK_THROWS_AS((void)scenarios_from_json(doc), SpecError);
    }
    SUBCASE("negative killing rate") {
        Json doc = interval_scenario();
        doc["q"] = -1;
        try {
            (void)scenarios_from_json(doc);
            FAIL("expected an error");
        } catch (const SpecError& e) {
            CHECK(std::string(e.what()).find("q") != std::string::npos);
            CHECK(std::string(e.what()).find("interval") != std::string::npos);
        }
    }
    SUBCASE("unknown verify option") {
        Json doc = interval_scenario();
        doc["verify"] = {{"levle", 0.05}};
        CHECK_THROWS_AS((void)scenarios_from_json(doc), SpecError);
    }
    SUBCASE("unkilled mode needs a convergence assertion") {
        Json doc = interval_scenario();
        doc["q"] = 0;
        doc["mode"] = "unkilled";
        CHECK_THROWS_AS((void)scenarios_from_json(doc), SpecError);
        doc["eta"]["asserted"] = {"unkilled_integral_converges"};
        CHECK_NOTHROW((void)scenarios_from_json(doc));
    }
    SUBCASE("bad exact tag") {
        Json doc = interval_scenario();
        doc["eta"] = Json::parse(R"j({"measure": [{"type": "atoms", "atoms": [{"location": 1, "mass": 1, "exact": "sqrt(x)"}]}]})j");
        CHECK_THROWS_AS((void)scenarios_from_json(doc), SpecError);
    }
}

TEST_CASE("seed lists") {
    CHECK(cli::parse_seed_list("1,4,7-9") == std::vector<std::uint64_t>{1, 4, 7, 8, 9});
    CHECK(cli::parse_seed_list("5") == std::vector<std::uint64_t>{5});
    CHECK_THROWS_AS((void)cli::parse_seed_list("3-1"), ParameterError);
    CHECK_THROWS_AS((void)cli::parse_seed_list("a"), ParameterError);
}

TEST_CASE("classify command") {
    const auto golden = run_cli({"classify", "--scenario", KEFUN_DATA_DIR "/golden_table.json"});
    CHECK(golden.code == cli::kPass);
    CHECK(golden.out.find("MISMATCH") == std::string::npos);

    TempDir dir;
    Json wrong = interval_scenario();
    wrong["expected"]["support"]["set"] = {{0, 3}};
    const auto mismatch = run_cli({"classify", "--scenario", dir.file("wrong.json", wrong.dump())});
    CHECK(mismatch.code == cli::kVerificationFailure);

    const auto json = run_cli({"classify", "--scenario", dir.file("ok.json", interval_scenario().dump()), "--format", "json"});
    REQUIRE(json.code == cli::kPass);
    const Json doc = Json::parse(json.out);
    CHECK(doc.at("results").at(0).at("expected_match") == true);
}

TEST_CASE("exit codes for bad input") {
    TempDir dir;
    CHECK(run_cli({"classify", "--scenario", dir.file("broken.json", "{ not json")}).code == cli::kInputError);
    Json neg = interval_scenario();
    neg["q"] = -2;
    const auto r = run_cli({"classify", "--scenario", dir.file("neg.json", neg.dump())});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("input error") != std::string::npos);
    CHECK(run_cli({"classify"}).code == cli::kInputError);
    CHECK(run_cli({"frobnicate"}).code == cli::kInputError);
    CHECK(run_cli({"--help"}).code == cli::kPass);
}

TEST_CASE("runtime errors map to exit 3") {
    TempDir dir;
    const Json divergent = Json::parse(R"({"schema_version": 1, "id": "divergent", "mode": "unkilled", "q": 0,
        "xi": {"sigma2": 1, "gamma": -1}, "eta": {"sigma2": 1, "asserted": ["unkilled_integral_converges"]},
        "params": {"max_horizon": 8}})");
    const auto r = run_cli({"simulate", "--scenario", dir.file("d.json", divergent.dump()), "--n", "5"});
    CHECK(r.code == cli::kRuntimeError);
}

TEST_CASE("simulate output equals the library batch") {
    TempDir dir;
    const std::string file = dir.file("s.json", interval_scenario().dump());
    const auto r = run_cli({"simulate", "--scenario", file, "--n", "200", "--seed", "9"});
    REQUIRE(r.code == cli::kPass);
    const auto batch = simulate(load_scenarios(file).front(), 200, 9);
    std::istringstream lines(r.out);
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        if (line.starts_with("#")) continue;
        REQUIRE(i < batch.values.size());
        CHECK(line == format_value(batch.values[i++]));
    }
    CHECK(i == 200);
    CHECK(r.out.find("# seed: 9") != std::string::npos);

    const auto one = run_cli({"simulate", "--scenario", file, "--n", "1"});
    CHECK(one.code == cli::kPass);
}

TEST_CASE("verify and report") {
    TempDir dir;
    Json s = interval_scenario();
    s["verify"] = {{"stationarity_t", 0.5}};
    const std::string file = dir.file("v.json", s.dump());
    const std::string out = dir.str() + "/reports";
    const auto r = run_cli({"verify", "--scenario", file, "--n", "5000", "--seeds", "1-3", "--out", out});
    CHECK(r.code == cli::kPass);
    std::ifstream in(out + "/interval.json");
    REQUIRE(in.good());
    const Json report = Json::parse(in);
    CHECK(report.at("outcome") == "pass");
    CHECK(report.at("per_seed").size() == 3);
    CHECK(run_cli({"report", "--out", out}).code == cli::kPass);

    Json bad = interval_scenario();
    bad["id"] = "negative-control";
    bad["q"] = 1;
    bad["eta"] = Json{{"sigma2", 1}};
    bad["xi"] = Json{{"sigma2", 1}};
    bad.erase("expected");
    bad["verify"] = {{"stationarity_t", 0.1}, {"start_constant", 1000}};
    const auto neg = run_cli({"verify", "--scenario", dir.file("neg.json", bad.dump()), "--n", "5000", "--seed", "1", "--out", out});
    CHECK(neg.code == cli::kVerificationFailure);
    CHECK(run_cli({"report", "--out", out}).code == cli::kVerificationFailure);
}

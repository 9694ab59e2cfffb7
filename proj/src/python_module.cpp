#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "kefun/char_exponent.hpp"
#include "kefun/cli.hpp"
#include "kefun/errors.hpp"
#include "kefun/io.hpp"
#include "kefun/scenario.hpp"
#include "kefun/transform.hpp"

namespace py = pybind11;
using kefun::io::Json;

namespace {

// Documents cross the boundary as JSON text; the Python wrapper handles dicts.
Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw kefun::SpecError(std::string("invalid JSON: ") + e.what());
    }
}

kefun::Scenario single_scenario(const std::string& text) {
    auto scenarios = kefun::scenarios_from_json(parse(text));
    if (scenarios.size() != 1) throw kefun::SpecError("expected exactly one scenario");
    return std::move(scenarios.front());
}

std::string classify_json(const std::string& text) {
    Json results = Json::array();
    for (const kefun::Scenario& s : kefun::scenarios_from_json(parse(text))) {
        const kefun::Classification c = kefun::classify(s);
        const kefun::ExpectationCheck check = kefun::check_expected(s, c);
        Json row{{"id", s.id}, {"mode", kefun::to_string(s.mode)}, {"classification", kefun::to_json(c)}};
        if (check.has_expectation) {
            row["expected_match"] = check.matched();
            row["mismatches"] = check.mismatches;
        }
        results.push_back(std::move(row));
    }
    return results.dump();
}

std::vector<double> simulate(const std::string& text, std::size_t n, std::uint64_t seed, int workers) {
    const kefun::Scenario s = single_scenario(text);
    py::gil_scoped_release release;
    return kefun::simulate(s, n, seed, workers).values;
}

kefun::ExtReal horizon_from(const py::object& t) {
    const double v = t.cast<double>();
    return std::isinf(v) && v > 0 ? kefun::ExtReal::pos_inf() : kefun::ExtReal(v);
}

std::string transform_json(const std::string& integrand, const py::object& horizon, const std::string& eta) {
    const auto f = kefun::io::integrand_from_json(parse(integrand), "$.integrand");
    const auto triplet = kefun::io::triplet_from_json(parse(eta), "$.eta");
    return kefun::io::to_json(kefun::transform_triplet(f, horizon_from(horizon), triplet)).dump();
}

std::complex<double> exponent(const std::string& process, double z) {
    return kefun::char_exponent(kefun::io::triplet_from_json(parse(process), "$"), z);
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{"kefun"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = 0;
    {
        py::gil_scoped_release release;
        code = kefun::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exponential functionals of Levy processes: classification and simulation";

    auto base = py::register_exception<kefun::Error>(m, "KefunError", PyExc_RuntimeError);
    py::register_exception<kefun::SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<kefun::ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<kefun::PreconditionViolation>(m, "PreconditionViolation", PyExc_ValueError);
    py::register_exception<kefun::HorizonExceeded>(m, "HorizonExceeded", base.ptr());

    m.attr("SCHEMA_VERSION") = kefun::io::kSchemaVersion;
    m.def("classify_json", &classify_json, py::arg("document"));
    m.def("simulate_json", &simulate, py::arg("document"), py::arg("n"), py::arg("seed") = 42, py::arg("workers") = 1);
    m.def("transform_json", &transform_json, py::arg("integrand"), py::arg("horizon"), py::arg("eta"));
    m.def("char_exponent_json", &exponent, py::arg("process"), py::arg("z"));
    m.def("run_cli", &run_cli, py::arg("args"));
}

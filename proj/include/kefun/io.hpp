#pragma once

#include <json.hpp>
#include <string>

#include "kefun/classifier.hpp"
#include "kefun/simulator.hpp"
#include "kefun/verifier.hpp"

namespace kefun::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Throws SpecError with the field path when `j` lacks a valid schema_version.
void require_schema_version(const Json& j, const std::string& path = "$");

Json to_json(ExtReal x);
ExtReal ext_real_from_json(const Json& j, const std::string& path);

Json to_json(const LevyMeasure& nu);
LevyMeasure measure_from_json(const Json& j, const std::string& path);

Json to_json(const LevyTriplet& t);
/// Object with sigma2 (default 0), measure (default empty) and gamma or drift
/// (drift 0 when neither is given).
LevyTriplet triplet_from_json(const Json& j, const std::string& path);

/// Triplet fields plus "asserted": [flag names].
Json to_json(const ProcessSpec& p);
ProcessSpec process_from_json(const Json& j, const std::string& path);

Json to_json(const IntegrandFunction& f);
IntegrandFunction integrand_from_json(const Json& j, const std::string& path);

Json to_json(const SimulationParams& p);
/// Applies the fields present in `j` on top of `base`.
SimulationParams params_from_json(const Json& j, const std::string& path, SimulationParams base = {});

Json to_json(const ClosedSet& s);
ClosedSet closed_set_from_json(const Json& j, const std::string& path);

Json to_json(const ConditionResult& r);
Json to_json(const Trail& trail);
Json to_json(const LawVerdict& v);
Json to_json(const SupportDescriptor& d);
/// Expected-support form: shape, relation and set (or log_factors/generators).
SupportDescriptor support_from_json(const Json& j, const std::string& path);

Json to_json(const EmpiricalReport& r);

}  // namespace kefun::io

#include "kefun/io.hpp"

#include <cmath>
#include <initializer_list>

#include "kefun/errors.hpp"

namespace kefun::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SpecError(path + ": " + msg); }

std::string field(const std::string& path, const std::string& key) { return path + "." + key; }

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* allowed : keys) known = known || k == allowed;
        if (!known) fail(field(path, k), "unknown field");
    }
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double number_or(const Json& j, const char* key, const std::string& path, double fallback) {
    return j.contains(key) ? number(j.at(key), field(path, key)) : fallback;
}

double required_number(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(field(path, key), "missing required field");
    return number(j.at(key), field(path, key));
}

std::string string_of(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

/// Runs a library constructor, re-labelling its SpecError with the field path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SpecError& e) {
        fail(path, e.what());
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
}

MeasureComponent component_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    if (!j.contains("type")) fail(field(path, "type"), "missing component type");
    const std::string type = string_of(j.at("type"), field(path, "type"));
    if (type == "atoms") {
        allow_keys(j, path, {"type", "atoms"});
        if (!j.contains("atoms") || !j.at("atoms").is_array()) fail(field(path, "atoms"), "expected an array");
        Atoms atoms;
        std::size_t i = 0;
        for (const Json& a : j.at("atoms")) {
            const std::string p = field(path, "atoms") + "[" + std::to_string(i++) + "]";
            require_object(a, p);
            allow_keys(a, p, {"location", "mass", "exact"});
            Atom atom;
            if (a.contains("exact")) {
                const std::string text = string_of(a.at("exact"), field(p, "exact"));
                atom.exact = at_path(field(p, "exact"), [&] { return ExactNumber::parse(text); });
                atom.location = atom.exact->value();
                if (a.contains("location") && std::abs(number(a.at("location"), field(p, "location")) - atom.location) >
                                                  1e-12 * std::max(1.0, std::abs(atom.location)))
                    fail(field(p, "location"), "disagrees with the exact value");
            } else {
                atom.location = required_number(a, "location", p);
            }
            atom.mass = required_number(a, "mass", p);
            atoms.atoms.push_back(atom);
        }
        return atoms;
    }
    if (type == "density") {
        allow_keys(j, path, {"type", "lo", "hi", "coef", "exponent", "family"});
        const ExtReal lo = ext_real_from_json(j.contains("lo") ? j.at("lo") : Json(), field(path, "lo"));
        const ExtReal hi = ext_real_from_json(j.contains("hi") ? j.at("hi") : Json(), field(path, "hi"));
        const double coef = required_number(j, "coef", path);
        std::string family = j.contains("exponent") ? "power" : "constant";
        if (j.contains("family")) family = string_of(j.at("family"), field(path, "family"));
        if (family == "constant") {
            if (j.contains("exponent") && number(j.at("exponent"), field(path, "exponent")) != 0.0)
                fail(field(path, "exponent"), "constant family has exponent 0");
            return DensityPiece::constant(lo, hi, coef);
        }
        if (family == "power") return DensityPiece::power(lo, hi, coef, required_number(j, "exponent", path));
        fail(field(path, "family"), "expected 'constant' or 'power'");
    }
    if (type == "stable") {
        allow_keys(j, path, {"type", "alpha", "c_plus", "c_minus", "cutoff"});
        StablePiece s;
        s.alpha = required_number(j, "alpha", path);
        s.c_plus = number_or(j, "c_plus", path, 0.0);
        s.c_minus = number_or(j, "c_minus", path, 0.0);
        s.cutoff = number_or(j, "cutoff", path, 1.0);
        return s;
    }
    if (type == "lacunary") {
        allow_keys(j, path, {"type", "alpha", "growth", "sign"});
        LacunaryAtoms l;
        l.alpha = required_number(j, "alpha", path);
        if (j.contains("growth")) l.growth = integer(j.at("growth"), field(path, "growth"));
        if (j.contains("sign")) l.sign = integer(j.at("sign"), field(path, "sign"));
        return l;
    }
    fail(field(path, "type"), "unknown component type '" + type + "'");
}

Json segment_list(const ClosedSet& s) {
    Json out = Json::array();
    for (const Segment& seg : s.segments()) out.push_back(Json::array({to_json(seg.lo), to_json(seg.hi)}));
    return out;
}

}  // namespace

void require_schema_version(const Json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("schema_version")) fail(field(path, "schema_version"), "missing required field");
    const Json& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        fail(field(path, "schema_version"), "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
}

Json to_json(ExtReal x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    return x.value();
}

ExtReal ext_real_from_json(const Json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return ExtReal::pos_inf();
        if (s == "-inf") return ExtReal::neg_inf();
        fail(path, "expected a number, \"inf\" or \"-inf\"");
    }
    if (j.is_null()) fail(path, "missing required field");
    return number(j, path);
}

Json to_json(const LevyMeasure& nu) {
    Json out = Json::array();
    for (const MeasureComponent& c : nu.components()) {
        if (const auto* a = std::get_if<Atoms>(&c)) {
            Json atoms = Json::array();
            for (const Atom& at : a->atoms) {
                Json o{{"location", at.location}, {"mass", at.mass}};
                if (at.exact) o["exact"] = at.exact->str();
                atoms.push_back(o);
            }
            out.push_back({{"type", "atoms"}, {"atoms", atoms}});
        } else if (const auto* d = std::get_if<DensityPiece>(&c)) {
            Json o{{"type", "density"}, {"lo", to_json(d->lo)}, {"hi", to_json(d->hi)}, {"coef", d->coef}};
            o["family"] = d->family == DensityFamily::Constant ? "constant" : "power";
            if (d->family == DensityFamily::Power) o["exponent"] = d->exponent;
            out.push_back(o);
        } else if (const auto* s = std::get_if<StablePiece>(&c)) {
            out.push_back({{"type", "stable"}, {"alpha", s->alpha}, {"c_plus", s->c_plus}, {"c_minus", s->c_minus},
                           {"cutoff", s->cutoff}});
        } else if (const auto* l = std::get_if<LacunaryAtoms>(&c)) {
            out.push_back({{"type", "lacunary"}, {"alpha", l->alpha}, {"growth", l->growth}, {"sign", l->sign}});
        }
    }
    return out;
}

LevyMeasure measure_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of measure components");
    std::vector<MeasureComponent> parts;
    for (std::size_t i = 0; i < j.size(); ++i) parts.push_back(component_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return at_path(path, [&] { return LevyMeasure(std::move(parts)); });
}

Json to_json(const LevyTriplet& t) {
    Json out{{"sigma2", t.sigma2()}, {"measure", to_json(t.measure())}, {"gamma", t.gamma()}};
    if (auto d = t.drift()) out["drift"] = *d;
    return out;
}

LevyTriplet triplet_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    const double sigma2 = number_or(j, "sigma2", path, 0.0);
    LevyMeasure nu = j.contains("measure") ? measure_from_json(j.at("measure"), field(path, "measure")) : LevyMeasure();
    const bool has_gamma = j.contains("gamma");
    const bool has_drift = j.contains("drift");
    return at_path(path, [&] {
        if (has_gamma && has_drift)
            return LevyTriplet::with_both(sigma2, nu, number(j.at("gamma"), field(path, "gamma")),
                                          number(j.at("drift"), field(path, "drift")));
        if (has_gamma) return LevyTriplet::from_gamma(sigma2, nu, number(j.at("gamma"), field(path, "gamma")));
        if (has_drift) return LevyTriplet::from_drift(sigma2, nu, number(j.at("drift"), field(path, "drift")));
        // neither given: zero drift when it exists, else zero gamma
        try {
            return LevyTriplet::from_drift(sigma2, nu, 0.0);
        } catch (const SpecError&) {
            return LevyTriplet::from_gamma(sigma2, nu, 0.0);
        }
    });
}

Json to_json(const ProcessSpec& p) {
    Json out = to_json(p.triplet);
    Json flags = Json::array();
    for (AssertedFlag f : p.asserted) flags.push_back(to_string(f));
    out["asserted"] = flags;
    return out;
}

ProcessSpec process_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    allow_keys(j, path, {"sigma2", "measure", "gamma", "drift", "asserted", "label"});
    ProcessSpec p;
    p.triplet = triplet_from_json(j, path);
    if (j.contains("asserted")) {
        const Json& a = j.at("asserted");
        if (!a.is_array()) fail(field(path, "asserted"), "expected an array of flag names");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string p_i = field(path, "asserted") + "[" + std::to_string(i) + "]";
            const std::string name = string_of(a[i], p_i);
            p.asserted.insert(at_path(p_i, [&] { return asserted_flag_from_string(name); }));
        }
    }
    if (p.has(AssertedFlag::AcpHolds) && (p.has(AssertedFlag::AcpFails) || p.has(AssertedFlag::PotentialMeasureSingular)))
        fail(field(path, "asserted"), "ACP asserted to hold and to fail");
    return p;
}

Json to_json(const IntegrandFunction& f) {
    Json pieces = Json::array();
    for (const IntegrandPiece& p : f.pieces()) {
        Json o{{"start", p.start}, {"end", to_json(p.end)}};
        if (p.form == IntegrandPiece::Form::Constant) {
            o["form"] = "constant";
            o["value"] = p.a;
        } else {
            o["form"] = "exponential";
            o["a"] = p.a;
            o["b"] = p.b;
        }
        pieces.push_back(o);
    }
    return Json{{"pieces", pieces}};
}

IntegrandFunction integrand_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    allow_keys(j, path, {"pieces"});
    if (!j.contains("pieces") || !j.at("pieces").is_array()) fail(field(path, "pieces"), "expected an array");
    std::vector<IntegrandPiece> pieces;
    std::size_t i = 0;
    for (const Json& pj : j.at("pieces")) {
        const std::string p = field(path, "pieces") + "[" + std::to_string(i++) + "]";
        require_object(pj, p);
        allow_keys(pj, p, {"start", "end", "form", "value", "a", "b"});
        IntegrandPiece piece;
        piece.start = required_number(pj, "start", p);
        piece.end = ext_real_from_json(pj.contains("end") ? pj.at("end") : Json(), field(p, "end"));
        const std::string form = pj.contains("form") ? string_of(pj.at("form"), field(p, "form")) : "constant";
        if (form == "constant") {
            piece.form = IntegrandPiece::Form::Constant;
            piece.a = required_number(pj, "value", p);
        } else if (form == "exponential") {
            piece.form = IntegrandPiece::Form::Exponential;
            piece.a = required_number(pj, "a", p);
            piece.b = required_number(pj, "b", p);
        } else {
            fail(field(p, "form"), "expected 'constant' or 'exponential'");
        }
        pieces.push_back(piece);
    }
    return at_path(path, [&] { return IntegrandFunction(std::move(pieces)); });
}

Json to_json(const SimulationParams& p) {
    return Json{{"grid_step", p.grid_step},
                {"small_jump_cutoff", p.small_jump_cutoff},
                {"small_jumps", to_string(p.small_jumps)},
                {"force_grid", p.force_grid},
                {"tail_tol", p.tail_tol},
                {"initial_horizon", p.initial_horizon},
                {"max_horizon", p.max_horizon}};
}

SimulationParams params_from_json(const Json& j, const std::string& path, SimulationParams base) {
    require_object(j, path);
    allow_keys(j, path, {"grid_step", "small_jump_cutoff", "small_jumps", "force_grid", "tail_tol", "initial_horizon", "max_horizon"});
    base.grid_step = number_or(j, "grid_step", path, base.grid_step);
    base.small_jump_cutoff = number_or(j, "small_jump_cutoff", path, base.small_jump_cutoff);
    if (j.contains("small_jumps")) {
        const std::string s = string_of(j.at("small_jumps"), field(path, "small_jumps"));
        base.small_jumps = at_path(field(path, "small_jumps"), [&] { return small_jump_policy_from_string(s); });
    }
    if (j.contains("force_grid")) {
        if (!j.at("force_grid").is_boolean()) fail(field(path, "force_grid"), "expected a boolean");
        base.force_grid = j.at("force_grid").get<bool>();
    }
    base.tail_tol = number_or(j, "tail_tol", path, base.tail_tol);
    base.initial_horizon = number_or(j, "initial_horizon", path, base.initial_horizon);
    base.max_horizon = number_or(j, "max_horizon", path, base.max_horizon);
    if (!(base.grid_step > 0.0)) fail(field(path, "grid_step"), "must be positive");
    if (!(base.small_jump_cutoff > 0.0)) fail(field(path, "small_jump_cutoff"), "must be positive");
    at_path(path, [&] { base.validate(); });
    return base;
}

Json to_json(const ClosedSet& s) { return segment_list(s); }

ClosedSet closed_set_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [lo, hi] pairs");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const Json& s = j[i];
        if (s.is_number()) {
            const double x = number(s, p);
            segs.push_back(Segment{x, x});
            continue;
        }
        if (!s.is_array() || s.size() != 2) fail(p, "expected [lo, hi]");
        const ExtReal lo = ext_real_from_json(s[0], p + "[0]");
        const ExtReal hi = ext_real_from_json(s[1], p + "[1]");
        if (hi < lo) fail(p, "lo exceeds hi");
        segs.push_back(Segment{lo, hi});
    }
    return ClosedSet::from_segments(std::move(segs));
}

Json to_json(const ConditionResult& r) {
    Json out{{"verdict", to_string(r.verdict)}, {"method", to_string(r.method)}, {"reason", r.reason}};
    if (r.evidence) {
        const NumericEvidence& e = *r.evidence;
        out["evidence"] = Json{{"quantity", e.quantity},
                               {"grid", e.grid},
                               {"values", e.values},
                               {"estimate", e.estimate},
                               {"stabilized", e.stabilized}};
    }
    return out;
}

Json to_json(const Trail& trail) {
    Json out = Json::array();
    for (const TrailEntry& e : trail) {
        Json facts = Json::object();
        for (const auto& [k, v] : e.facts) facts[k] = v;
        Json conds = Json::object();
        for (const auto& [k, v] : e.conditions) conds[k] = to_json(v);
        out.push_back(Json{{"clause", e.clause}, {"citation", e.citation}, {"facts", facts}, {"conditions", conds}});
    }
    return out;
}

Json to_json(const LawVerdict& v) {
    return Json{{"atom_at_zero", to_string(v.atom_at_zero())},
                {"continuous", to_string(v.continuous())},
                {"absolutely_continuous", to_string(v.absolutely_continuous())},
                {"deciding_clause", v.deciding_clause()},
                {"trail", to_json(v.trail())}};
}

Json to_json(const SupportDescriptor& d) {
    Json out{{"shape", to_string(d.shape)}, {"relation", to_string(d.relation)}, {"description", d.str()}};
    if (d.is_semigroup()) {
        out["log_factors"] = to_json(*d.log_factors);
        out["generators"] = segment_list(d.generators);
    } else {
        out["set"] = segment_list(d.set);
    }
    if (d.refinement) out["refinement"] = to_json(*d.refinement);
    out["trail"] = to_json(d.trail);
    return out;
}

SupportDescriptor support_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    SupportDescriptor d;
    if (!j.contains("shape")) fail(field(path, "shape"), "missing required field");
    d.shape = at_path(field(path, "shape"), [&] { return support_shape_from_string(string_of(j.at("shape"), field(path, "shape"))); });
    const std::string rel = j.contains("relation") ? string_of(j.at("relation"), field(path, "relation")) : "equal";
    if (rel == "equal") {
        d.relation = SupportRelation::Equal;
    } else if (rel == "superset") {
        d.relation = SupportRelation::Superset;
    } else {
        fail(field(path, "relation"), "expected 'equal' or 'superset'");
    }
    if (d.is_semigroup()) {
        if (!j.contains("log_factors")) fail(field(path, "log_factors"), "missing required field");
        d.log_factors = std::make_shared<const SupportDescriptor>(support_from_json(j.at("log_factors"), field(path, "log_factors")));
        d.generators = closed_set_from_json(j.contains("generators") ? j.at("generators") : Json(), field(path, "generators"));
    } else {
        if (d.shape == SupportShape::FullLine && !j.contains("set")) {
            d.set = ClosedSet::whole_line();
        } else {
            d.set = closed_set_from_json(j.contains("set") ? j.at("set") : Json(), field(path, "set"));
        }
    }
    return d;
}

Json to_json(const EmpiricalReport& r) {
    Json checks = Json::array();
    for (const Check& c : r.checks)
        checks.push_back(Json{{"name", c.name},
                              {"statistic", c.statistic},
                              {"threshold", c.threshold},
                              {"direction", to_string(c.direction)},
                              {"passed", c.passed()}});
    return Json{{"scenario_id", r.scenario_id}, {"test", r.test},         {"outcome", to_string(r.outcome())},
                {"checks", checks},             {"diagnostics", r.diagnostics}, {"notes", r.notes}};
}

}  // namespace kefun::io

#pragma once

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/error.hpp"
#include "lcs/grw.hpp"
#include "lcs/immersion.hpp"

namespace lcs {

// Scenario document: one GRW chart, named submanifolds, a list of registry
// check ids, and evaluation options. Unknown keys are rejected, not ignored.
struct SubmanifoldSpec {
    std::string name;
    // coordinate_slice: listed coordinates vary, the rest are pinned
    // immersion: explicit parameter box and component expressions
    std::string kind; // "coordinate_slice" | "immersion"
    std::vector<std::string> coordinates;                 // slice
    std::vector<std::pair<std::string, double>> fixed;    // slice
    std::vector<std::string> parameters;                  // immersion
    std::vector<std::pair<double, double>> box;           // immersion
    std::vector<std::string> map;                         // immersion
    std::string expect_class; // optional: invariant | anti_invariant | neither
};

struct ScenarioDoc {
    std::string name;
    GrwSpec manifold;
    std::string prefer = "t"; // coordinate used as the structure candidate
    std::vector<SubmanifoldSpec> submanifolds;
    std::vector<std::string> checks;
    Engine engine = Engine::jets;
    std::uint64_t seed = 42;
    int samples = 32;
    double tolerance = -1.0; // negative: engine default
};

namespace detail {

using Json = nlohmann::ordered_json;

// shortest round-trip text: safe to feed back through the expression parser
inline std::string double_literal(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& msg) {
    fail(errc::schema, path + ": " + msg);
}

inline void reject_unknown_keys(const Json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok |= key == a;
        if (!ok) {
            std::string known;
            for (const char* a : allowed) {
                if (!known.empty()) known += ", ";
                known += a;
            }
            schema_fail(path + "." + key, "unknown key (known keys: " + known + ")");
        }
    }
}

inline double require_number(const Json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    return j.get<double>();
}

inline std::string require_string(const Json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected a string");
    return j.get<std::string>();
}

inline std::pair<double, double> require_interval(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        schema_fail(path, "expected an interval [lo, hi]");
    const double lo = require_number(j[0], path + "[0]");
    const double hi = require_number(j[1], path + "[1]");
    if (!(lo < hi)) schema_fail(path, "interval must satisfy lo < hi");
    return {lo, hi};
}

} // namespace detail

inline ScenarioDoc parse_scenario(const std::string& text,
                                  const std::vector<std::string>& known_check_ids,
                                  const std::string& default_name = "") {
    using detail::Json;
    using detail::schema_fail;
    Json root;
    try {
        root = Json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::schema, std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) fail(errc::schema, "scenario must be a JSON object");
    detail::reject_unknown_keys(root, "scenario",
                                {"name", "manifold", "structure", "submanifolds",
                                 "checks", "engine", "seed", "samples", "tolerance"});

    ScenarioDoc doc;
    doc.name = root.contains("name")
                   ? detail::require_string(root["name"], "scenario.name")
                   : default_name;

    if (!root.contains("manifold")) schema_fail("scenario.manifold", "required");
    {
        const Json& m = root["manifold"];
        if (!m.is_object()) schema_fail("scenario.manifold", "expected an object");
        detail::reject_unknown_keys(
            m, "manifold", {"dim", "warp", "t_interval", "fiber", "fiber_intervals"});
        if (!m.contains("dim") || !m["dim"].is_number_integer())
            schema_fail("manifold.dim", "required integer");
        doc.manifold.dim = m["dim"].get<int>();
        if (doc.manifold.dim < 3 || doc.manifold.dim > 8)
            schema_fail("manifold.dim", "dimension must lie in [3, 8]");
        if (!m.contains("warp")) schema_fail("manifold.warp", "required");
        doc.manifold.warp_text = detail::require_string(m["warp"], "manifold.warp");
        if (!m.contains("t_interval")) schema_fail("manifold.t_interval", "required");
        doc.manifold.t_interval =
            detail::require_interval(m["t_interval"], "manifold.t_interval");
        if (m.contains("fiber")) {
            const Json& f = m["fiber"];
            if (f.is_string()) {
                const std::string kind = f.get<std::string>();
                if (kind == "flat") doc.manifold.fiber = FiberKind::flat;
                else if (kind == "sphere_block") doc.manifold.fiber = FiberKind::sphere_block;
                else schema_fail("manifold.fiber", "expected flat | sphere_block | "
                                                   "{entries: [...]}");
            } else if (f.is_object()) {
                detail::reject_unknown_keys(f, "manifold.fiber", {"entries"});
                doc.manifold.fiber = FiberKind::explicit_matrix;
                if (!f.contains("entries") || !f["entries"].is_array())
                    schema_fail("manifold.fiber.entries", "required array");
                for (std::size_t i = 0; i < f["entries"].size(); ++i)
                    doc.manifold.fiber_entries.push_back(detail::require_string(
                        f["entries"][i],
                        "manifold.fiber.entries[" + std::to_string(i) + "]"));
            } else {
                schema_fail("manifold.fiber", "expected a string or object");
            }
        }
        if (m.contains("fiber_intervals")) {
            if (!m["fiber_intervals"].is_array())
                schema_fail("manifold.fiber_intervals", "expected an array of intervals");
            for (std::size_t i = 0; i < m["fiber_intervals"].size(); ++i)
                doc.manifold.fiber_intervals.push_back(detail::require_interval(
                    m["fiber_intervals"][i],
                    "manifold.fiber_intervals[" + std::to_string(i) + "]"));
        }
    }

    if (root.contains("structure")) {
        const Json& s = root["structure"];
        if (!s.is_object()) schema_fail("scenario.structure", "expected an object");
        detail::reject_unknown_keys(s, "structure", {"prefer"});
        if (s.contains("prefer"))
            doc.prefer = detail::require_string(s["prefer"], "structure.prefer");
    }

    if (root.contains("submanifolds")) {
        const Json& subs = root["submanifolds"];
        if (!subs.is_array()) schema_fail("scenario.submanifolds", "expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const std::string path = "submanifolds[" + std::to_string(i) + "]";
            const Json& s = subs[i];
            if (!s.is_object()) schema_fail(path, "expected an object");
            detail::reject_unknown_keys(s, path,
                                        {"name", "kind", "coordinates", "fixed",
                                         "parameters", "box", "map", "expect_class"});
            SubmanifoldSpec sub;
            if (!s.contains("name")) schema_fail(path + ".name", "required");
            sub.name = detail::require_string(s["name"], path + ".name");
            if (!names.insert(sub.name).second)
                schema_fail(path + ".name", "duplicate submanifold name");
            if (!s.contains("kind")) schema_fail(path + ".kind", "required");
            sub.kind = detail::require_string(s["kind"], path + ".kind");
            if (sub.kind == "coordinate_slice") {
                if (!s.contains("coordinates") || !s["coordinates"].is_array())
                    schema_fail(path + ".coordinates", "required array");
                for (std::size_t k = 0; k < s["coordinates"].size(); ++k)
                    sub.coordinates.push_back(detail::require_string(
                        s["coordinates"][k],
                        path + ".coordinates[" + std::to_string(k) + "]"));
                if (s.contains("fixed")) {
                    if (!s["fixed"].is_object())
                        schema_fail(path + ".fixed", "expected an object");
                    for (const auto& [key, value] : s["fixed"].items())
                        sub.fixed.emplace_back(
                            key, detail::require_number(value, path + ".fixed." + key));
                }
            } else if (sub.kind == "immersion") {
                if (!s.contains("parameters") || !s["parameters"].is_array())
                    schema_fail(path + ".parameters", "required array");
                for (std::size_t k = 0; k < s["parameters"].size(); ++k)
                    sub.parameters.push_back(detail::require_string(
                        s["parameters"][k],
                        path + ".parameters[" + std::to_string(k) + "]"));
                if (!s.contains("box") || !s["box"].is_array() ||
                    s["box"].size() != sub.parameters.size())
                    schema_fail(path + ".box",
                                "required: one interval per parameter");
                for (std::size_t k = 0; k < s["box"].size(); ++k)
                    sub.box.push_back(detail::require_interval(
                        s["box"][k], path + ".box[" + std::to_string(k) + "]"));
                if (!s.contains("map") || !s["map"].is_array())
                    schema_fail(path + ".map", "required array of expressions");
                for (std::size_t k = 0; k < s["map"].size(); ++k)
                    sub.map.push_back(detail::require_string(
                        s["map"][k], path + ".map[" + std::to_string(k) + "]"));
            } else {
                schema_fail(path + ".kind", "expected coordinate_slice | immersion");
            }
            if (s.contains("expect_class")) {
                sub.expect_class =
                    detail::require_string(s["expect_class"], path + ".expect_class");
                if (sub.expect_class != "invariant" &&
                    sub.expect_class != "anti_invariant" && sub.expect_class != "neither")
                    schema_fail(path + ".expect_class",
                                "expected invariant | anti_invariant | neither");
            }
            doc.submanifolds.push_back(std::move(sub));
        }
    }

    if (!root.contains("checks") || !root["checks"].is_array() || root["checks"].empty())
        fail(errc::schema, "scenario.checks: required non-empty array of check ids");
    for (std::size_t i = 0; i < root["checks"].size(); ++i) {
        const std::string id = detail::require_string(
            root["checks"][i], "checks[" + std::to_string(i) + "]");
        bool known = false;
        for (const auto& k : known_check_ids) known |= k == id;
        if (!known) {
            std::string valid;
            for (const auto& k : known_check_ids) {
                if (!valid.empty()) valid += ", ";
                valid += k;
            }
            fail(errc::registry, "checks[" + std::to_string(i) + "]: unknown check id '" +
                                     id + "' (valid ids: " + valid + ")");
        }
        doc.checks.push_back(id);
    }

    if (root.contains("engine")) {
        const std::string e = detail::require_string(root["engine"], "scenario.engine");
        if (e == "jet") doc.engine = Engine::jets;
        else if (e == "fd") doc.engine = Engine::finite_difference;
        else schema_fail("scenario.engine", "expected jet | fd");
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer()) schema_fail("scenario.seed", "expected an integer");
        doc.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("samples")) {
        if (!root["samples"].is_number_integer())
            schema_fail("scenario.samples", "expected an integer");
        doc.samples = root["samples"].get<int>();
        if (doc.samples < 1 || doc.samples > 4096)
            schema_fail("scenario.samples", "expected 1..4096");
    }
    if (root.contains("tolerance")) {
        doc.tolerance = detail::require_number(root["tolerance"], "scenario.tolerance");
        if (!(doc.tolerance > 0)) schema_fail("scenario.tolerance", "must be positive");
    }

    // dimension bookkeeping for immersions (slices validated on resolution)
    for (const auto& sub : doc.submanifolds) {
        const int m = sub.kind == "immersion" ? static_cast<int>(sub.parameters.size())
                                              : static_cast<int>(sub.coordinates.size());
        if (m < 1) fail(errc::dimension, "submanifold '" + sub.name + "': empty parameter list");
        if (m >= doc.manifold.dim)
            fail(errc::dimension, "submanifold '" + sub.name + "': m = " +
                                      std::to_string(m) + " must be < n = " +
                                      std::to_string(doc.manifold.dim));
        if (sub.kind == "immersion" &&
            static_cast<int>(sub.map.size()) != doc.manifold.dim)
            fail(errc::dimension, "submanifold '" + sub.name +
                                      "': map needs one expression per ambient coordinate");
    }
    return doc;
}

inline ScenarioDoc load_scenario(const std::string& path,
                                 const std::vector<std::string>& known_check_ids) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot read scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string stem = path;
    if (const auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (const auto dot = stem.find_last_of('.'); dot != std::string::npos)
        stem = stem.substr(0, dot);
    return parse_scenario(buffer.str(), known_check_ids, stem);
}

// resolve a submanifold spec against the ambient chart
inline Immersion resolve_immersion(const SubmanifoldSpec& spec, const ChartDomain& ambient) {
    Immersion imm;
    imm.n = ambient.dim;
    if (spec.kind == "coordinate_slice") {
        imm.m = static_cast<int>(spec.coordinates.size());
        imm.params.dim = imm.m;
        imm.params.names = spec.coordinates;
        for (const auto& cname : spec.coordinates) {
            int idx = -1;
            for (int i = 0; i < ambient.dim; ++i)
                if (ambient.names[i] == cname) idx = i;
            if (idx < 0)
                fail(errc::schema, "submanifold '" + spec.name + "': unknown coordinate '" +
                                       cname + "'");
            imm.params.box.push_back(ambient.box[idx]);
        }
        for (int A = 0; A < ambient.dim; ++A) {
            const std::string& cname = ambient.names[A];
            bool kept = false;
            for (const auto& k : spec.coordinates) kept |= k == cname;
            if (kept) {
                imm.map.push_back(expr::parse(cname, imm.params.names));
                continue;
            }
            bool fixed_found = false;
            double value = 0.0;
            for (const auto& [k, v] : spec.fixed)
                if (k == cname) {
                    fixed_found = true;
                    value = v;
                }
            if (!fixed_found)
                fail(errc::schema, "submanifold '" + spec.name + "': coordinate '" + cname +
                                       "' is neither kept nor fixed");
            if (value < ambient.box[A].first || value > ambient.box[A].second)
                fail(errc::schema, "submanifold '" + spec.name + "': fixed value for '" +
                                       cname + "' lies outside the chart box");
            imm.map.push_back(expr::parse(detail::double_literal(value), imm.params.names));
        }
        for (const auto& [k, v] : spec.fixed) {
            bool known = false;
            for (const auto& cname : ambient.names) known |= cname == k;
            if (!known)
                fail(errc::schema, "submanifold '" + spec.name + "': fixed coordinate '" +
                                       k + "' does not exist");
            (void)v;
        }
    } else {
        imm.m = static_cast<int>(spec.parameters.size());
        imm.params.dim = imm.m;
        imm.params.names = spec.parameters;
        imm.params.box = spec.box;
        for (std::size_t k = 0; k < spec.map.size(); ++k) {
            try {
                imm.map.push_back(expr::parse(spec.map[k], spec.parameters));
            } catch (const Error& e) {
                fail(errc::schema, "submanifold '" + spec.name + "' map[" +
                                       std::to_string(k) + "]: " + e.what());
            }
        }
    }
    imm.params.validate(1);
    return imm;
}

} // namespace lcs

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/version.hpp"

namespace lcs {

// One row of the report. Status is "pass"/"fail" for asserted checks and
// "diagnostic" for checks the registry does not assert in this situation.
struct CheckResult {
    std::string id;        // registry id, possibly suffixed [submanifold]
    std::string equation;  // display tag
    std::string target;    // "ambient" or submanifold name (class)
    std::string status;    // pass | fail | diagnostic
    double tolerance = 0.0;
    double residual_max = 0.0;
    double residual_mean = 0.0;
    std::vector<std::pair<std::string, double>> coefficients;
    std::string note;
    double elapsed_sec = 0.0; // serialized only on request: timings vary run to run
};

struct Report {
    std::string scenario;
    std::string engine;
    std::uint64_t seed = 0;
    int samples = 0;
    double tolerance = 0.0;
    std::vector<CheckResult> checks;

    int count(const char* status) const {
        int c = 0;
        for (const auto& r : checks) c += r.status == status;
        return c;
    }
    bool any_failure() const { return count("fail") > 0; }
};

namespace fmt {

// locale-independent float text; 17 significant digits round-trip doubles
inline std::string full(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline std::string brief(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 3);
    return std::string(buf, r.ptr);
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

} // namespace fmt

// JSON with insertion-ordered keys and 17-significant-digit floats; emitted
// by hand so the bytes are a stable function of the report alone.
inline std::string emit_json(const Report& rep, bool timings = false) {
    std::string out;
    out += "{\n";
    out += "  \"tool\": \"" + std::string(kToolName) + " " + kToolVersion + "\",\n";
    out += "  \"scenario\": \"" + fmt::json_escape(rep.scenario) + "\",\n";
    out += "  \"engine\": \"" + rep.engine + "\",\n";
    out += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
    out += "  \"samples\": " + std::to_string(rep.samples) + ",\n";
    out += "  \"tolerance\": " + fmt::full(rep.tolerance) + ",\n";
    out += "  \"summary\": {\"pass\": " + std::to_string(rep.count("pass")) +
           ", \"fail\": " + std::to_string(rep.count("fail")) +
           ", \"diagnostic\": " + std::to_string(rep.count("diagnostic")) +
           ", \"total\": " + std::to_string(rep.checks.size()) + "},\n";
    out += "  \"checks\": [";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const CheckResult& r = rep.checks[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"id\": \"" + fmt::json_escape(r.id) + "\"";
        out += ", \"equation\": \"" + fmt::json_escape(r.equation) + "\"";
        out += ", \"target\": \"" + fmt::json_escape(r.target) + "\"";
        out += ", \"status\": \"" + r.status + "\"";
        out += ", \"tolerance\": " + fmt::full(r.tolerance);
        out += ", \"residual_max\": " + fmt::full(r.residual_max);
        out += ", \"residual_mean\": " + fmt::full(r.residual_mean);
        if (!r.coefficients.empty()) {
            out += ", \"coefficients\": {";
            for (std::size_t k = 0; k < r.coefficients.size(); ++k) {
                if (k) out += ", ";
                out += "\"" + fmt::json_escape(r.coefficients[k].first) +
                       "\": " + fmt::full(r.coefficients[k].second);
            }
            out += "}";
        }
        if (!r.note.empty()) out += ", \"note\": \"" + fmt::json_escape(r.note) + "\"";
        if (timings) out += ", \"elapsed_sec\": " + fmt::full(r.elapsed_sec);
        out += "}";
    }
    out += "\n  ]\n}\n";
    return out;
}

// fixed-width table: one row per check, summary line at the end
inline std::string emit_text(const Report& rep, bool timings = false) {
    std::string out;
    out += std::string(kToolName) + " " + kToolVersion + "  scenario=" + rep.scenario +
           "  engine=" + rep.engine + "  seed=" + std::to_string(rep.seed) +
           "  samples=" + std::to_string(rep.samples) +
           "  tolerance=" + fmt::full(rep.tolerance) + "\n\n";
    std::size_t idw = 4, tgw = 6, eqw = 8;
    for (const auto& r : rep.checks) {
        idw = std::max(idw, r.id.size());
        tgw = std::max(tgw, r.target.size());
        eqw = std::max(eqw, r.equation.size());
    }
    out += fmt::pad("check", idw + 2) + fmt::pad("equation", eqw + 2) +
           fmt::pad("target", tgw + 2) + fmt::pad("status", 12) +
           fmt::pad("max-resid", 13) + fmt::pad("mean-resid", 13);
    if (timings) out += fmt::pad("elapsed", 12);
    out += "note\n";
    out += std::string(idw + eqw + tgw + 6 + 12 + 13 + 13 + (timings ? 12 : 0) + 4, '-') +
           "\n";
    for (const auto& r : rep.checks) {
        out += fmt::pad(r.id, idw + 2) + fmt::pad(r.equation, eqw + 2) +
               fmt::pad(r.target, tgw + 2) + fmt::pad(r.status, 12) +
               fmt::pad(fmt::brief(r.residual_max), 13) +
               fmt::pad(fmt::brief(r.residual_mean), 13);
        if (timings) out += fmt::pad(fmt::brief(r.elapsed_sec), 12);
        std::string note = r.note;
        for (const auto& [k, v] : r.coefficients) {
            if (!note.empty()) note += "; ";
            note += k + "=" + fmt::brief(v);
        }
        out += note + "\n";
    }
    out += "\nsummary: " + std::to_string(rep.count("pass")) + " pass, " +
           std::to_string(rep.count("fail")) + " fail, " +
           std::to_string(rep.count("diagnostic")) + " diagnostic\n";
    return out;
}

} // namespace lcs

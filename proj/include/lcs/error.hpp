#pragma once

#include <stdexcept>
#include <string>

namespace lcs {

enum class errc {
    domain,            // point outside chart box
    signature,         // metric degenerate or wrong signature
    input,             // bad argument (e.g. spacelike "prefer" vector)
    structure,         // warp function violates structure requirements
    not_lcs,           // derived connection is not of concircular form
    alpha_degenerate,  // |alpha| below threshold somewhere on the chart
    unsupported,       // valence or operation not implemented
    misuse,            // operation applied outside its precondition
    degenerate_metric, // pullback metric singular
    dimension,         // dimension bookkeeping violated
    registry,          // unknown check id
    syntax,            // expression parse failure
    schema,            // scenario document invalid
    io,                // file not readable / writable
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::domain: return "domain";
        case errc::signature: return "signature";
        case errc::input: return "input";
        case errc::structure: return "structure";
        case errc::not_lcs: return "not_lcs";
        case errc::alpha_degenerate: return "alpha_degenerate";
        case errc::unsupported: return "unsupported";
        case errc::misuse: return "misuse";
        case errc::degenerate_metric: return "degenerate_metric";
        case errc::dimension: return "dimension";
        case errc::registry: return "registry";
        case errc::syntax: return "syntax";
        case errc::schema: return "schema";
        case errc::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace lcs

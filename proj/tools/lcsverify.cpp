// lcsverify: runs identity-check scenarios for Lorentzian concircular
// structure charts and their submanifolds, and prints the check registry.
//
// exit codes: 0 all asserted checks pass (diagnostics never fail a run),
//             1 at least one asserted check failed,
//             2 input error (CLI, file, schema or registry).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lcs/registry.hpp"
#include "lcs/report.hpp"
#include "lcs/scenario.hpp"
#include "lcs/version.hpp"

namespace {

int run_verify(const std::string& path, const std::string& format,
               const std::string& engine, long long seed, int samples, double tolerance,
               const std::string& out_path, int threads, bool timings) {
    lcs::ScenarioDoc doc;
    try {
        doc = lcs::load_scenario(path, lcs::registry_ids());
        if (!engine.empty()) {
            if (engine == "jet") doc.engine = lcs::Engine::jets;
            else if (engine == "fd") doc.engine = lcs::Engine::finite_difference;
            else lcs::fail(lcs::errc::input, "engine must be jet | fd");
        }
        if (seed >= 0) doc.seed = static_cast<std::uint64_t>(seed);
        if (samples > 0) doc.samples = samples;
        if (tolerance > 0) doc.tolerance = tolerance;
    } catch (const lcs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const lcs::Report report = lcs::run_checks(doc, threads);
    const std::string body = format == "json" ? lcs::emit_json(report, timings)
                                              : lcs::emit_text(report, timings);
    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
        out << body;
    }
    return report.any_failure() ? 1 : 0;
}

int run_list_checks() {
    std::size_t idw = 4;
    for (const auto& spec : lcs::check_registry())
        idw = std::max(idw, std::string(spec.id).size());
    std::cout << lcs::fmt::pad("id", idw + 2) << lcs::fmt::pad("equation", 12)
              << lcs::fmt::pad("scope", 13) << lcs::fmt::pad("asserted", 22)
              << "description\n";
    for (const auto& spec : lcs::check_registry()) {
        const char* assertability = nullptr;
        switch (spec.assertability) {
            case lcs::Assertability::always: assertability = "yes"; break;
            case lcs::Assertability::const_alpha: assertability = "if alpha constant"; break;
            case lcs::Assertability::geodesic_gated:
                assertability = "if totally geodesic";
                break;
            case lcs::Assertability::expected_class:
                assertability = "if class expected";
                break;
            case lcs::Assertability::diagnostic: assertability = "diagnostic"; break;
        }
        std::cout << lcs::fmt::pad(spec.id, idw + 2) << lcs::fmt::pad(spec.equation, 12)
                  << lcs::fmt::pad(
                         spec.scope == lcs::Scope::ambient ? "ambient" : "submanifold", 13)
                  << lcs::fmt::pad(assertability, 22) << spec.description << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(lcs::kToolName) + " " + lcs::kToolVersion +
                 " - numerical identity checks for Lorentzian concircular "
                 "structure charts"};
    app.require_subcommand(1);

    std::string scenario_path, format = "text", engine, out_path;
    long long seed = -1;
    int samples = 0, threads = 1;
    double tolerance = 0.0;
    bool timings = false;

    CLI::App* verify = app.add_subcommand("verify", "run a scenario's checks");
    verify->add_option("scenario", scenario_path, "scenario JSON file")->required();
    verify->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--engine", engine, "override the scenario engine (jet | fd)")
        ->check(CLI::IsMember({"jet", "fd"}));
    verify->add_option("--seed", seed, "override the sampling seed");
    verify->add_option("--samples", samples, "override the sample-point count");
    verify->add_option("--tolerance", tolerance, "override the base tolerance");
    verify->add_option("--out", out_path, "write the report to a file");
    verify->add_option("--threads", threads, "worker threads for check execution")
        ->check(CLI::Range(1, 64));
    verify->add_flag("--timings", timings,
                     "include per-check wall times (breaks byte determinism)");

    CLI::App* list = app.add_subcommand("list-checks", "print the check registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) return run_list_checks();
    return run_verify(scenario_path, format, engine, seed, samples, tolerance, out_path,
                      threads, timings);
}

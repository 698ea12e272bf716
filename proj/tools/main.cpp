#include <CLI11.hpp>
#include <iostream>

#include "lorgeo/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lorgeo: scenario-driven checks for Lorentz group actions, "
                 "root/weight decompositions and warped products"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool parallel = false;
    bool timings = false;
    std::vector<std::string> tolerance_args;

    auto* run = app.add_subcommand("run", "run a scenario file and print the report");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--format", format, "report format: json | text")
        ->check(CLI::IsMember({"json", "text"}));
    run->add_option("--seed", seed, "override the scenario seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    run->add_flag("--parallel", parallel, "run checks concurrently");
    run->add_flag("--timings", timings, "include per-check timings in JSON output");
    run->add_option("--tolerance", tolerance_args,
                    "override a tolerance, key=value (repeatable)");

    auto* list = app.add_subcommand("list-builtins",
                                    "print builtin algebras, spaces, actions and checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            std::cout << lorgeo::list_builtins().dump(2) << "\n";
            return 0;
        }
        lorgeo::RunOptions options;
        if (seed_given) options.seed_override = seed;
        options.parallel = parallel;
        for (const auto& kv : tolerance_args) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "bad --tolerance argument (need key=value): " << kv << "\n";
                return 2;
            }
            options.tolerance_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        lorgeo::Report report = lorgeo::run_scenario(scenario_path, options);
        std::cout << lorgeo::emit_report(report,
                                         format == "json" ? lorgeo::ReportFormat::Json
                                                          : lorgeo::ReportFormat::Text,
                                         timings);
        return report.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lorgeo {

using Json = nlohmann::ordered_json;

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    std::map<std::string, double> tolerance_overrides;
    bool parallel = false;
};

struct CheckResult {
    std::string name;
    std::string status;  // "pass" | "fail" | "error"
    Json values;
    double runtime_ms = 0.0;
};

struct Report {
    std::string scenario_name;
    std::string scenario_hash;
    std::uint64_t seed = 0;
    Json tolerances;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    bool any_error() const;
    int exit_code() const;  // 0 all pass, 1 any fail, 2 any error
};

enum class ReportFormat { Json, Text };

/// Load and execute a scenario file. Check failures are captured in the
/// report; only load-time problems (bad JSON, unknown check names) throw.
Report run_scenario(const std::string& path, const RunOptions& options = {});

/// Same, from in-memory scenario bytes.
Report run_scenario_bytes(const std::string& bytes, const RunOptions& options = {});

/// Serialize a report. The JSON form is byte-stable for identical scenario
/// bytes and seed; timings are only included on request since they vary
/// between runs. The text form is a human-readable table with timings.
std::string emit_report(const Report& report, ReportFormat format,
                        bool with_timings = false);

/// Catalog of builtin algebras, spaces, and registered checks.
Json list_builtins();

std::vector<std::string> registered_check_names();

}  // namespace lorgeo

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "choquard/experiments.hpp"
#include "choquard/solver.hpp"

namespace choquard {

/// Config violations carry a path-to-field diagnostic ("solver.tol_energy: ...").
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DiagnosticsConfig {
    double sobolev_s = 0.0;  // 0 -> sharp constant for the grid dimension
    double hls_c1 = 1.0;
};

struct ResolvedConfig {
    SolveConfig solve;
    std::int64_t memory_cap_bytes = RieszPlan::kDefaultMemoryCap;
    std::optional<std::string> init_field_path;
    std::vector<double> eps_list;
    std::vector<double> lambda_list;
    std::optional<nlohmann::json> path_potential;  // sweep-lambda bound potential
    BatteryConfig battery;
    DiagnosticsConfig diagnostics;
    RadialOracleConfig oracle;
    nlohmann::json echo;  // fully resolved, defaults materialized
};

/// Parses and validates a config file. Unknown keys are rejected with a
/// nearest-key suggestion; physical validity errors name the violated
/// assumption (alpha in (0,N), lambda in [1/2,1], ...).
ResolvedConfig parse_config(const std::string& path);
ResolvedConfig parse_config_json(const nlohmann::json& j);

PotentialSpec potential_from_json(const nlohmann::json& j, int dim, double alpha);
NonlinSpec nonlinearity_from_json(const nlohmann::json& j, int dim, double alpha);

nlohmann::json assumption_report_to_json(const AssumptionReport& rep);
nlohmann::json battery_report_to_json(const BatteryReport& rep);
nlohmann::json solve_result_to_json(const SolveResult& res, const ResolvedConfig& cfg);
nlohmann::json sweep_result_to_json(const SweepResult& res);

/// Deterministic run manifest: config echo, tool version, plan fingerprint,
/// seed, wall time, per-stage timings, and the output inventory with
/// content hashes.
class RunManifest {
public:
    RunManifest(const ResolvedConfig& cfg, std::string tool_version);
    void set_plan_fingerprint(std::uint64_t hash);
    void add_timing(const std::string& stage, double seconds);
    void add_output(const std::string& path);
    void set_wall_time(double seconds);
    void write(const std::string& dir) const;

private:
    nlohmann::json j_;
};

std::string tool_version();

}  // namespace choquard

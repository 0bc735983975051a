#include "choquard/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "choquard/io.hpp"

namespace choquard {

namespace {

using nlohmann::json;

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end()) continue;
        std::string best;
        int best_d = 4;
        for (const auto& k : allowed) {
            int d = edit_distance(it.key(), k);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        std::ostringstream os;
        os << where << ": unknown key \"" << it.key() << "\"";
        if (!best.empty()) os << " (did you mean \"" << best << "\"?)";
        throw ConfigError(os.str());
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T def) {
    if (!obj.contains(key)) return def;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

PotentialVariant potential_variant_from_string(const std::string& s) {
    if (s == "constant") return PotentialVariant::kConstant;
    if (s == "remark14_i") return PotentialVariant::kRemark14i;
    if (s == "remark14_ii") return PotentialVariant::kRemark14ii;
    if (s == "remark14_iii") return PotentialVariant::kRemark14iii;
    if (s == "remark17") return PotentialVariant::kRemark17;
    if (s == "remark110") return PotentialVariant::kRemark110;
    if (s == "user_table") return PotentialVariant::kUserTable;
    throw ConfigError("potential.variant: unknown variant \"" + s +
                      "\" (constant, remark14_i, remark14_ii, remark14_iii, remark17, "
                      "remark110, user_table)");
}

NonlinVariant nonlin_variant_from_string(const std::string& s) {
    if (s == "power") return NonlinVariant::kPowerP;
    if (s == "pekar") return NonlinVariant::kPekar;
    if (s == "two_power") return NonlinVariant::kTwoPower;
    throw ConfigError("nonlinearity.variant: unknown variant \"" + s +
                      "\" (power, pekar, two_power)");
}

json potential_echo(const PotentialSpec& p) {
    json j;
    j["variant"] = to_string(p.variant);
    if (p.variant == PotentialVariant::kConstant) {
        j["Vinf"] = p.v_inf;
    } else if (p.variant == PotentialVariant::kUserTable) {
        j["Vinf"] = p.v_inf;
        j["table_r"] = p.table_r;
        j["table_v"] = p.table_v;
    } else {
        j["a"] = p.a;
        j["b"] = p.b;
        if (p.variant == PotentialVariant::kRemark17 ||
            p.variant == PotentialVariant::kRemark110)
            j["beta"] = p.beta;
    }
    j["theta"] = p.theta;
    j["theta_prime"] = p.theta_prime;
    j["theta_second"] = p.theta_second;
    j["rbar"] = p.rbar;
    return j;
}

json nonlin_echo(const NonlinSpec& n) {
    json j;
    j["variant"] = to_string(n.variant);
    j["p"] = n.p;
    if (n.variant == NonlinVariant::kTwoPower) {
        j["q"] = n.q;
        j["kappa"] = n.kappa;
    }
    j["s0"] = n.s0;
    return j;
}

}  // namespace

PotentialSpec potential_from_json(const json& j, int dim, double alpha) {
    if (!j.is_object()) throw ConfigError("potential: expected an object");
    reject_unknown_keys(j,
                        {"variant", "a", "b", "beta", "Vinf", "theta", "theta_prime",
                         "theta_second", "rbar", "table_r", "table_v"},
                        "potential");
    if (!j.contains("variant")) throw ConfigError("potential.variant: required");
    PotentialVariant variant = potential_variant_from_string(j.at("variant").get<std::string>());
    PotentialParams params;
    params.a = get_or(j, "a", 0.0);
    params.b = get_or(j, "b", 0.0);
    params.beta = get_or(j, "beta", 0.0);
    params.v_inf = get_or(j, "Vinf", 1.0);
    if (j.contains("theta")) params.theta = j.at("theta").get<double>();
    if (j.contains("theta_prime")) params.theta_prime = j.at("theta_prime").get<double>();
    if (j.contains("theta_second")) params.theta_second = j.at("theta_second").get<double>();
    if (j.contains("rbar")) params.rbar = j.at("rbar").get<double>();
    params.table_r = get_or(j, "table_r", std::vector<double>{});
    params.table_v = get_or(j, "table_v", std::vector<double>{});
    try {
        return make_potential(variant, params, dim, alpha);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    }
}

NonlinSpec nonlinearity_from_json(const json& j, int dim, double alpha) {
    if (!j.is_object()) throw ConfigError("nonlinearity: expected an object");
    reject_unknown_keys(j, {"variant", "p", "q", "kappa", "s0", "enforce_window"},
                        "nonlinearity");
    if (!j.contains("variant")) throw ConfigError("nonlinearity.variant: required");
    NonlinVariant variant = nonlin_variant_from_string(j.at("variant").get<std::string>());
    NonlinParams params;
    params.p = get_or(j, "p", 2.0);
    params.q = get_or(j, "q", 0.0);
    params.kappa = get_or(j, "kappa", 0.0);
    params.s0 = get_or(j, "s0", 1.0);
    const bool enforce = get_or(j, "enforce_window", true);
    try {
        return make_nonlinearity(variant, params, dim, alpha, enforce);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("nonlinearity: ") + e.what());
    }
}

ResolvedConfig parse_config_json(const json& root) {
    if (!root.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(root,
                        {"grid", "alpha", "potential", "nonlinearity", "lambda", "eps",
                         "solver", "sweep", "verify", "diagnostics", "oracle"},
                        "config");

    ResolvedConfig out;
    if (!root.contains("grid")) throw ConfigError("grid: required");
    const json& jg = root.at("grid");
    reject_unknown_keys(jg, {"N", "L", "n", "memory_cap_gib"}, "grid");
    const int dim = get_or(jg, "N", 3);
    const double length = get_or(jg, "L", 16.0);
    const int n = get_or(jg, "n", 32);
    const double cap_gib = get_or(jg, "memory_cap_gib", 4.0);
    if (!(cap_gib > 0.0)) throw ConfigError("grid.memory_cap_gib: must be positive");
    out.memory_cap_bytes = static_cast<std::int64_t>(cap_gib * (1LL << 30));
    try {
        out.solve.grid = make_grid(dim, length, n);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }

    out.solve.alpha = get_or(root, "alpha", 2.0);
    if (!(out.solve.alpha > 0.0 && out.solve.alpha < dim)) {
        std::ostringstream os;
        os << "alpha: must satisfy 0 < alpha < N = " << dim
           << " (the Riesz potential I_alpha is only defined for alpha in (0, N))";
        throw ConfigError(os.str());
    }

    if (!root.contains("potential")) throw ConfigError("potential: required");
    out.solve.potential = potential_from_json(root.at("potential"), dim, out.solve.alpha);
    if (out.solve.potential.variant == PotentialVariant::kUserTable) {
        const double need = 0.5 * length * std::sqrt(static_cast<double>(dim));
        if (out.solve.potential.table_r.back() < need) {
            std::ostringstream os;
            os << "potential.table_r: table must cover the grid's corner radius " << need;
            throw ConfigError(os.str());
        }
    }
    if (!root.contains("nonlinearity")) throw ConfigError("nonlinearity: required");
    out.solve.nonlin = nonlinearity_from_json(root.at("nonlinearity"), dim, out.solve.alpha);

    out.solve.lambda = get_or(root, "lambda", 1.0);
    if (!(out.solve.lambda >= 0.5 && out.solve.lambda <= 1.0))
        throw ConfigError("lambda: must lie in [1/2, 1] (the admissible functional family)");
    out.solve.eps = get_or(root, "eps", 0.0);
    if (!(out.solve.eps >= 0.0))
        throw ConfigError("eps: must be nonnegative (0 means the unscaled problem)");

    const json js = root.contains("solver") ? root.at("solver") : json::object();
    reject_unknown_keys(js,
                        {"amplitude", "width", "center", "widths", "init_field",
                         "max_iterations", "step0", "max_halvings", "tol_energy",
                         "tol_pohozaev", "tol_gradient", "seed", "fiber_samples", "fiber_lo",
                         "fiber_hi", "radial_bins"},
                        "solver");
    out.solve.init.amplitude = get_or(js, "amplitude", 2.0);
    out.solve.init.width = get_or(js, "width", 0.0);
    if (js.contains("center")) {
        auto c = js.at("center").get<std::vector<double>>();
        if (c.size() != static_cast<size_t>(dim))
            throw ConfigError("solver.center: needs exactly N entries");
        for (int d = 0; d < dim; ++d) out.solve.init.center[static_cast<size_t>(d)] = c[static_cast<size_t>(d)];
    }
    out.solve.widths = get_or(js, "widths", std::vector<double>{});
    if (js.contains("init_field")) out.init_field_path = js.at("init_field").get<std::string>();
    out.solve.max_iterations = get_or(js, "max_iterations", 400);
    out.solve.step0 = get_or(js, "step0", 0.5);
    out.solve.max_halvings = get_or(js, "max_halvings", 40);
    out.solve.tol_energy = get_or(js, "tol_energy", 1e-9);
    out.solve.tol_pohozaev = get_or(js, "tol_pohozaev", 1e-5);
    out.solve.tol_gradient = get_or(js, "tol_gradient", 3e-4);
    out.solve.seed = get_or(js, "seed", static_cast<std::uint64_t>(12345));
    out.solve.fiber_samples = get_or(js, "fiber_samples", 64);
    out.solve.fiber_lo = get_or(js, "fiber_lo", 1e-3);
    out.solve.fiber_hi = get_or(js, "fiber_hi", 1e3);
    out.solve.radial_bins = get_or(js, "radial_bins", 4096);
    if (!(out.solve.tol_energy > 0.0 && out.solve.tol_pohozaev > 0.0 &&
          out.solve.tol_gradient > 0.0))
        throw ConfigError("solver: tolerances must be positive");
    const double width_eff =
        out.solve.init.width > 0.0 ? out.solve.init.width : out.solve.grid.length / 8.0;
    if (width_eff <= 2.0 * out.solve.grid.h)
        throw ConfigError("solver.width: ansatz width must exceed 2h");

    const json jw = root.contains("sweep") ? root.at("sweep") : json::object();
    reject_unknown_keys(jw, {"eps_list", "lambda_list", "path_potential"}, "sweep");
    out.eps_list = get_or(jw, "eps_list", std::vector<double>{});
    out.lambda_list = get_or(jw, "lambda_list", std::vector<double>{});
    if (jw.contains("path_potential")) {
        out.path_potential = jw.at("path_potential");
        potential_from_json(*out.path_potential, dim, out.solve.alpha);  // validate now
    }

    const json jv = root.contains("verify") ? root.at("verify") : json::object();
    reject_unknown_keys(jv,
                        {"seed", "gh_samples", "identity_triples", "identity_ts", "hardy_bumps",
                         "oracle_fields", "key_inequality_fields", "key_inequality_ts",
                         "solution_dirs"},
                        "verify");
    out.battery.seed = get_or(jv, "seed", static_cast<std::uint64_t>(777));
    out.battery.gh_samples = get_or(jv, "gh_samples", 10000);
    out.battery.identity_triples = get_or(jv, "identity_triples", 1000);
    out.battery.identity_ts = get_or(jv, "identity_ts", 1000);
    out.battery.hardy_bumps = get_or(jv, "hardy_bumps", 100);
    out.battery.oracle_fields = get_or(jv, "oracle_fields", 20);
    out.battery.key_inequality_fields = get_or(jv, "key_inequality_fields", 100);
    out.battery.key_inequality_ts = get_or(jv, "key_inequality_ts", 20);
    out.battery.solution_paths = get_or(jv, "solution_dirs", std::vector<std::string>{});

    const json jd = root.contains("diagnostics") ? root.at("diagnostics") : json::object();
    reject_unknown_keys(jd, {"sobolev_S", "hls_C1"}, "diagnostics");
    out.diagnostics.sobolev_s = get_or(jd, "sobolev_S", 0.0);
    if (out.diagnostics.sobolev_s == 0.0)
        out.diagnostics.sobolev_s = sharp_sobolev_constant(dim);
    out.diagnostics.hls_c1 = get_or(jd, "hls_C1", 1.0);

    const json jo = root.contains("oracle") ? root.at("oracle") : json::object();
    reject_unknown_keys(jo, {"r_max", "points", "max_iterations", "tol", "mixing"}, "oracle");
    out.oracle.r_max = get_or(jo, "r_max", 30.0);
    out.oracle.points = get_or(jo, "points", 3000);
    out.oracle.max_iterations = get_or(jo, "max_iterations", 400);
    out.oracle.tol = get_or(jo, "tol", 1e-11);
    out.oracle.mixing = get_or(jo, "mixing", 0.5);

    // fully resolved echo (re-parses to the same resolved config)
    json echo;
    echo["grid"] = {{"N", dim}, {"L", length}, {"n", n}, {"memory_cap_gib", cap_gib}};
    echo["alpha"] = out.solve.alpha;
    echo["potential"] = potential_echo(out.solve.potential);
    echo["nonlinearity"] = nonlin_echo(out.solve.nonlin);
    echo["lambda"] = out.solve.lambda;
    echo["eps"] = out.solve.eps;
    json se;
    se["amplitude"] = out.solve.init.amplitude;
    se["width"] = out.solve.init.width;
    {
        std::vector<double> c(static_cast<size_t>(dim));
        for (int d = 0; d < dim; ++d) c[static_cast<size_t>(d)] = out.solve.init.center[static_cast<size_t>(d)];
        se["center"] = c;
    }
    se["widths"] = out.solve.widths;
    if (out.init_field_path) se["init_field"] = *out.init_field_path;
    se["max_iterations"] = out.solve.max_iterations;
    se["step0"] = out.solve.step0;
    se["max_halvings"] = out.solve.max_halvings;
    se["tol_energy"] = out.solve.tol_energy;
    se["tol_pohozaev"] = out.solve.tol_pohozaev;
    se["tol_gradient"] = out.solve.tol_gradient;
    se["seed"] = out.solve.seed;
    se["fiber_samples"] = out.solve.fiber_samples;
    se["fiber_lo"] = out.solve.fiber_lo;
    se["fiber_hi"] = out.solve.fiber_hi;
    se["radial_bins"] = out.solve.radial_bins;
    echo["solver"] = se;
    json sw;
    sw["eps_list"] = out.eps_list;
    sw["lambda_list"] = out.lambda_list;
    if (out.path_potential) sw["path_potential"] = *out.path_potential;
    echo["sweep"] = sw;
    json ve;
    ve["seed"] = out.battery.seed;
    ve["gh_samples"] = out.battery.gh_samples;
    ve["identity_triples"] = out.battery.identity_triples;
    ve["identity_ts"] = out.battery.identity_ts;
    ve["hardy_bumps"] = out.battery.hardy_bumps;
    ve["oracle_fields"] = out.battery.oracle_fields;
    ve["key_inequality_fields"] = out.battery.key_inequality_fields;
    ve["key_inequality_ts"] = out.battery.key_inequality_ts;
    ve["solution_dirs"] = out.battery.solution_paths;
    echo["verify"] = ve;
    echo["diagnostics"] = {{"sobolev_S", out.diagnostics.sobolev_s},
                           {"hls_C1", out.diagnostics.hls_c1}};
    echo["oracle"] = {{"r_max", out.oracle.r_max},
                      {"points", out.oracle.points},
                      {"max_iterations", out.oracle.max_iterations},
                      {"tol", out.oracle.tol},
                      {"mixing", out.oracle.mixing}};
    out.echo = echo;
    return out;
}

ResolvedConfig parse_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception&) {
        throw ConfigError("config: cannot open " + path);
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    return parse_config_json(j);
}

json assumption_report_to_json(const AssumptionReport& rep) {
    json j;
    j["sampling"] = rep.sampling_description;
    json entries = json::array();
    for (const auto& e : rep.entries) {
        entries.push_back({{"assumption", e.name},
                           {"verdict", to_string(e.verdict)},
                           {"margin", e.margin},
                           {"witness", e.witness}});
    }
    j["entries"] = entries;
    return j;
}

json battery_report_to_json(const BatteryReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"check", c.name},
                          {"status", to_string(c.status)},
                          {"margin", c.margin},
                          {"witness", c.witness}});
    json j;
    j["checks"] = checks;
    j["hard_failure"] = rep.hard_failure;
    return j;
}

json solve_result_to_json(const SolveResult& res, const ResolvedConfig& cfg) {
    json j;
    j["m"] = res.energy_min;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["in_lambda"] = res.in_lambda;
    j["stop_reason"] = res.stop_reason;
    if (!res.init_note.empty()) j["init_note"] = res.init_note;
    j["pohozaev_residual"] = res.pohozaev_residual;
    j["gradient_residual"] = res.gradient_residual;
    j["full_gradient_residual"] = res.full_gradient_residual;
    j["tail_fraction"] = res.tail_fraction;
    j["fiber_unique_warning"] = res.fiber_unique_warning;
    j["t_history"] = res.t_history;
    j["breakdown"] = {{"a", res.breakdown.grad_sq},
                      {"b_pot", res.breakdown.pot},
                      {"b_poh", res.breakdown.pot_pohozaev},
                      {"d", res.breakdown.nonlocal},
                      {"lambda", res.breakdown.lambda},
                      {"eps", res.breakdown.eps},
                      {"I", res.breakdown.energy()},
                      {"P", res.breakdown.pohozaev()}};
    j["l2_sq"] = res.l2_sq;
    if (cfg.solve.potential.variant == PotentialVariant::kUserTable)
        j["pohozaev_potential_derivative"] = "table-interpolant-fallback";
    DiagnosticConstants dc = diagnostic_constants(cfg.solve.potential, cfg.diagnostics.sobolev_s,
                                                  cfg.diagnostics.hls_c1);
    j["diagnostics"] = {{"gamma1", dc.gamma1},       {"gamma2", dc.gamma2},
                        {"gamma3", dc.gamma3},       {"rho0", dc.rho0},
                        {"radius_used", dc.radius_used}, {"M0_used", dc.m0_used},
                        {"sobolev_S", cfg.diagnostics.sobolev_s},
                        {"hls_C1", cfg.diagnostics.hls_c1}};
    return j;
}

json sweep_result_to_json(const SweepResult& res) {
    json pts = json::array();
    for (const auto& p : res.points) {
        json jp;
        jp["parameter"] = p.parameter;
        jp["m"] = p.energy;
        jp["converged"] = p.converged;
        jp["iterations"] = p.iterations;
        jp["pohozaev_residual"] = p.pohozaev_residual;
        if (res.kind == "eps") {
            jp["identity_residual"] = p.identity_residual;
            jp["centroid_distance"] = p.centroid_distance;
            jp["rms_width"] = p.metrics.rms_width;
        } else {
            jp["path_bound"] = p.path_bound;
            jp["bound_margin"] = p.bound_margin;
        }
        pts.push_back(jp);
    }
    json j;
    j["kind"] = res.kind;
    j["points"] = pts;
    j["all_converged"] = res.all_converged;
    j["monotone"] = res.monotone;
    j["monotone_slack"] = res.monotone_slack;
    return j;
}

RunManifest::RunManifest(const ResolvedConfig& cfg, std::string version) {
    j_["config"] = cfg.echo;
    j_["tool_version"] = std::move(version);
    j_["seed"] = cfg.solve.seed;
    j_["timings"] = nlohmann::json::object();
    j_["outputs"] = nlohmann::json::array();
}

void RunManifest::set_plan_fingerprint(std::uint64_t hash) {
    std::ostringstream os;
    os << std::hex << hash;
    j_["plan_fingerprint"] = os.str();
}

void RunManifest::add_timing(const std::string& stage, double seconds) {
    j_["timings"][stage] = seconds;
}

void RunManifest::add_output(const std::string& path) {
    std::ostringstream os;
    os << std::hex << fnv1a64_file(path);
    j_["outputs"].push_back({{"path", std::filesystem::path(path).filename().string()},
                             {"fnv1a64", os.str()}});
}

void RunManifest::set_wall_time(double seconds) { j_["wall_time_s"] = seconds; }

void RunManifest::write(const std::string& dir) const {
    write_text_file((std::filesystem::path(dir) / "manifest.json").string(),
                    j_.dump(2) + "\n");
}

std::string tool_version() { return "0.1.0"; }

}  // namespace choquard

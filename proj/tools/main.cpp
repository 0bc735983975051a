// choquard: spectral ground-state solver and verification battery for
// nonlinear Choquard equations -lap u + V(x) u = (I_alpha * F(u)) f(u).
//
// Verbs: solve, solve-autonomous, verify, sweep-eps, sweep-lambda, oracle,
// report. Exit codes: 0 ok, 2 config error, 3 non-convergence,
// 4 verification failure, 5 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "choquard/config.hpp"
#include "choquard/experiments.hpp"
#include "choquard/io.hpp"
#include "choquard/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace choquard;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNoConvergence = 3, kVerification = 4, kIo = 5 };

int g_log_level = 1;  // 0 quiet, 1 info, 2 debug

void log_info(const std::string& msg) {
    if (g_log_level >= 1) std::cerr << "[choquard] " << msg << "\n";
}

class StageTimer {
public:
    explicit StageTimer(RunManifest& manifest, std::string stage)
        : manifest_(manifest), stage_(std::move(stage)),
          start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                             .count();
        manifest_.add_timing(stage_, s);
    }

private:
    RunManifest& manifest_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

std::uint64_t plan_fingerprint(const RieszPlan& plan) {
    return fnv1a64(plan.multiplier().data(), plan.multiplier().size() * sizeof(double));
}

void write_trace_csv(const SolveResult& res, const std::string& path) {
    CsvWriter csv(path, {"iter", "I", "P_residual", "grad_residual", "t_star", "step"});
    for (const auto& r : res.trace)
        csv.row({static_cast<double>(r.iter), r.energy, r.pohozaev_residual,
                 r.gradient_residual, r.t_star, r.step});
}

void write_breakdown_csv(const EnergyBreakdown& bd, const std::string& path) {
    CsvWriter csv(path, {"a", "b_pot", "b_poh", "d", "lambda", "eps", "I", "P"});
    csv.row({bd.grad_sq, bd.pot, bd.pot_pohozaev, bd.nonlocal, bd.lambda, bd.eps, bd.energy(),
             bd.pohozaev()});
}

void write_sweep_csv(const SweepResult& res, const std::string& path) {
    std::vector<std::string> cols;
    if (res.kind == "eps")
        cols = {"eps", "m", "converged", "iterations", "P_residual", "identity_residual",
                "centroid_distance", "rms_width"};
    else
        cols = {"lambda", "m", "converged", "iterations", "P_residual", "path_bound",
                "bound_margin"};
    CsvWriter csv(path, cols);
    for (const auto& p : res.points) {
        if (res.kind == "eps")
            csv.row({p.parameter, p.energy, p.converged ? 1.0 : 0.0,
                     static_cast<double>(p.iterations), p.pohozaev_residual,
                     p.identity_residual, p.centroid_distance, p.metrics.rms_width});
        else
            csv.row({p.parameter, p.energy, p.converged ? 1.0 : 0.0,
                     static_cast<double>(p.iterations), p.pohozaev_residual, p.path_bound,
                     p.bound_margin});
    }
}

int run_solve(const ResolvedConfig& cfg_in, const std::string& out_dir, bool autonomous) {
    ResolvedConfig cfg = cfg_in;
    if (cfg.init_field_path) {
        SolveConfig& sc = cfg.solve;
        sc.init.field = load_field(*cfg.init_field_path);
    }
    RunManifest manifest(cfg, tool_version());
    const auto t0 = std::chrono::steady_clock::now();

    RieszPlanPtr plan;
    {
        StageTimer timer(manifest, "plan");
        plan = plan_riesz(cfg.solve.grid, cfg.solve.alpha, cfg.memory_cap_bytes);
    }
    manifest.set_plan_fingerprint(plan_fingerprint(*plan));

    SolveResult res;
    {
        StageTimer timer(manifest, "solve");
        res = autonomous ? solve_autonomous(cfg.solve, plan)
                         : solve_ground_state(cfg.solve, plan);
    }
    log_info("m = " + std::to_string(res.energy_min) +
             (res.converged ? " (converged)" : " (NOT converged: " + res.stop_reason + ")"));
    if (res.tail_fraction > 1e-4)
        log_info("warning: tail mass fraction " + std::to_string(res.tail_fraction) +
                 " exceeds 1e-4; the box is likely too small");

    {
        StageTimer timer(manifest, "io");
        dump_field(res.field, (fs::path(out_dir) / "solution.field").string());
        json summary = solve_result_to_json(res, cfg);
        summary["assumptions"] =
            assumption_report_to_json(check_assumptions(cfg.solve.potential, cfg.solve.nonlin));
        write_text_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
        write_trace_csv(res, (fs::path(out_dir) / "trace.csv").string());
        write_breakdown_csv(res.breakdown, (fs::path(out_dir) / "breakdown.csv").string());
        manifest.add_output((fs::path(out_dir) / "solution.field").string());
        manifest.add_output((fs::path(out_dir) / "solution.field.json").string());
        manifest.add_output((fs::path(out_dir) / "summary.json").string());
        manifest.add_output((fs::path(out_dir) / "trace.csv").string());
        manifest.add_output((fs::path(out_dir) / "breakdown.csv").string());
    }
    manifest.set_wall_time(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    manifest.write(out_dir);
    return res.converged ? kOk : kNoConvergence;
}

int run_verify(const ResolvedConfig& cfg, const std::string& out_dir) {
    RunManifest manifest(cfg, tool_version());
    const auto t0 = std::chrono::steady_clock::now();
    BatteryReport rep;
    {
        StageTimer timer(manifest, "battery");
        rep = verify_battery(cfg.battery);
    }
    for (const auto& c : rep.checks)
        log_info(c.name + ": " + to_string(c.status) + " (margin " + std::to_string(c.margin) +
                 ")");
    write_text_file((fs::path(out_dir) / "battery.json").string(),
                    battery_report_to_json(rep).dump(2) + "\n");
    manifest.add_output((fs::path(out_dir) / "battery.json").string());
    manifest.set_wall_time(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    manifest.write(out_dir);
    return rep.hard_failure ? kVerification : kOk;
}

int run_sweep(const ResolvedConfig& cfg, const std::string& out_dir, bool eps_sweep) {
    RunManifest manifest(cfg, tool_version());
    const auto t0 = std::chrono::steady_clock::now();
    RieszPlanPtr plan;
    {
        StageTimer timer(manifest, "plan");
        plan = plan_riesz(cfg.solve.grid, cfg.solve.alpha, cfg.memory_cap_bytes);
    }
    manifest.set_plan_fingerprint(plan_fingerprint(*plan));
    SweepResult res;
    {
        StageTimer timer(manifest, eps_sweep ? "sweep-eps" : "sweep-lambda");
        if (eps_sweep) {
            if (cfg.eps_list.empty())
                throw ConfigError("sweep.eps_list: required for sweep-eps");
            res = sweep_epsilon(cfg.solve, cfg.eps_list, plan);
        } else {
            if (cfg.lambda_list.empty())
                throw ConfigError("sweep.lambda_list: required for sweep-lambda");
            if (!cfg.path_potential)
                throw ConfigError("sweep.path_potential: required for sweep-lambda "
                                  "(the nonconstant potential of the path bound)");
            PotentialSpec path_pspec = potential_from_json(*cfg.path_potential,
                                                           cfg.solve.grid.dim, cfg.solve.alpha);
            res = sweep_lambda(cfg.solve, cfg.lambda_list, path_pspec, plan);
        }
    }
    write_sweep_csv(res, (fs::path(out_dir) / "sweep.csv").string());
    write_text_file((fs::path(out_dir) / "sweep.json").string(),
                    sweep_result_to_json(res).dump(2) + "\n");
    manifest.add_output((fs::path(out_dir) / "sweep.csv").string());
    manifest.add_output((fs::path(out_dir) / "sweep.json").string());
    manifest.set_wall_time(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    manifest.write(out_dir);
    log_info(std::string("sweep ") + (res.all_converged ? "converged" : "has stragglers") +
             ", monotone=" + (res.monotone ? "yes" : "no"));
    return res.all_converged ? kOk : kNoConvergence;
}

int run_oracle(const ResolvedConfig& cfg, const std::string& out_dir) {
    RunManifest manifest(cfg, tool_version());
    const auto t0 = std::chrono::steady_clock::now();
    RadialOracleResult res;
    {
        StageTimer timer(manifest, "oracle");
        res = radial_oracle_pekar(cfg.oracle);
    }
    json j;
    j["m_inf"] = res.energy;
    j["grad_sq"] = res.grad_sq;
    j["l2_sq"] = res.l2_sq;
    j["d"] = res.nonlocal;
    j["pohozaev_residual"] = res.pohozaev_residual;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    write_text_file((fs::path(out_dir) / "oracle.json").string(), j.dump(2) + "\n");
    manifest.add_output((fs::path(out_dir) / "oracle.json").string());
    manifest.set_wall_time(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    manifest.write(out_dir);
    log_info("oracle m_inf = " + std::to_string(res.energy));
    return res.converged ? kOk : kNoConvergence;
}

int run_report(const std::string& out_dir) {
    bool found = false;
    for (const char* name : {"summary.json", "battery.json", "sweep.json", "oracle.json"}) {
        const fs::path p = fs::path(out_dir) / name;
        if (!fs::exists(p)) continue;
        found = true;
        json j = json::parse(read_text_file(p.string()));
        std::cout << "== " << name << " ==\n" << j.dump(2) << "\n";
    }
    if (!found) {
        std::cerr << "report: no outputs found in " << out_dir << "\n";
        return kIo;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Choquard ground-state solver and verification lab"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the verb

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int threads = 1;

    app.add_option("--config", config_path, "JSON config file (all verbs except report)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_override, "override solver.seed");
    app.add_option("--threads", threads,
                   "reserved; this build runs single-threaded for bit reproducibility");

    auto* solve = app.add_subcommand("solve", "ground state of the nonautonomous problem");
    auto* solve_auto = app.add_subcommand("solve-autonomous", "constant-potential ground state");
    auto* verify = app.add_subcommand("verify", "run the verification battery");
    auto* sweep_eps = app.add_subcommand("sweep-eps", "semiclassical parameter sweep");
    auto* sweep_lam = app.add_subcommand("sweep-lambda", "lambda-family sweep");
    auto* oracle = app.add_subcommand("oracle", "radial Pekar cross-check oracle");
    auto* report = app.add_subcommand("report", "pretty-print outputs in --out");

    CLI11_PARSE(app, argc, argv);

    if (const char* lv = std::getenv("LOG")) {
        const std::string s(lv);
        g_log_level = (s == "quiet") ? 0 : (s == "debug" ? 2 : 1);
    }
    if (const char* tv = std::getenv("THREADS")) threads = std::atoi(tv);
    if (threads != 1)
        log_info("note: --threads/THREADS is accepted but this build is single-threaded");

    try {
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot create output directory: " << e.what() << "\n";
        return kIo;
    }

    try {
        if (report->parsed()) return run_report(out_dir);

        if (config_path.empty()) {
            std::cerr << "config error: --config is required for this verb\n";
            return kConfig;
        }
        ResolvedConfig cfg = parse_config(config_path);
        if (seed_override) {
            cfg.solve.seed = *seed_override;
            cfg.battery.seed = *seed_override;
            cfg.echo["solver"]["seed"] = *seed_override;
            cfg.echo["verify"]["seed"] = *seed_override;
        }
        if (solve->parsed()) return run_solve(cfg, out_dir, false);
        if (solve_auto->parsed()) return run_solve(cfg, out_dir, true);
        if (verify->parsed()) return run_verify(cfg, out_dir);
        if (sweep_eps->parsed()) return run_sweep(cfg, out_dir, true);
        if (sweep_lam->parsed()) return run_sweep(cfg, out_dir, false);
        if (oracle->parsed()) return run_oracle(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        if (what.find("cannot open") != std::string::npos ||
            what.find("write failed") != std::string::npos ||
            what.find("short read") != std::string::npos)
            return kIo;
        return kNoConvergence;
    }
    return kOk;
}

// Acceptance suite: one pass/fail line per criterion, exit 0 iff every hard
// criterion holds. Soft trend checks are reported inline and never gate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "choquard/experiments.hpp"
#include "choquard/io.hpp"
#include "choquard/rng.hpp"
#include "choquard/solver.hpp"
#include "oracles.hpp"

using namespace choquard;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& label, const std::string& details) {
    std::printf("[%2d/12] %s %s (%s)\n", index, pass ? "PASS" : "FAIL", label.c_str(),
                details.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PotentialSpec constant_potential(double v_inf) {
    PotentialParams p;
    p.v_inf = v_inf;
    return make_potential(PotentialVariant::kConstant, p, 3, 2.0);
}

PotentialSpec remark14i(double a, double b) {
    PotentialParams p;
    p.a = a;
    p.b = b;
    return make_potential(PotentialVariant::kRemark14i, p, 3, 2.0);
}

PotentialSpec remark110_default() {
    PotentialParams p;
    p.a = 2.0;
    p.b = 1.0;
    p.beta = 1.0;
    return make_potential(PotentialVariant::kRemark110, p, 3, 2.0);
}

NonlinSpec pekar() { return make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0); }

// 1. FFT convolution vs direct double sum, 20 random fields on 8^3, <= 1e-12, < 5 s
void criterion_riesz_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    GridSpec g = make_grid(3, 8.0, 8);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Field f(g);
        for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
        Field fast = riesz_convolve(*plan, f);
        Field slow = riesz_convolve_direct(g, 2.0, f);
        double scale = 0.0;
        for (double v : slow.values) scale = std::max(scale, std::fabs(v));
        for (size_t i = 0; i < fast.values.size(); ++i)
            worst = std::max(worst, std::fabs(fast.values[i] - slow.values[i]) / scale);
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "max rel err " << worst << ", " << secs << " s";
    report(1, worst <= 1e-12 && secs < 5.0, "Riesz FFT/direct oracle equivalence", os.str());
}

// 2. Gaussian Newton potential vs (sqrt(pi)/4) erf(r)/r, and A(2,3) = 1/(4 pi)
void criterion_normalization() {
    GridSpec g = make_grid(3, 16.0, 64);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Field pot = riesz_convolve(*plan, gaussian_field(g, 1.0, std::sqrt(0.5)));
    double worst = 0.0;
    const int c = g.n / 2;
    for (int k = 0; k < 50; ++k) {  // 50 node radii spread over two rows
        const int i = c + k % 25;
        const int j = c + (k < 25 ? 0 : 5);
        const int kk = c + (k < 25 ? 0 : 2);
        const std::int64_t f = (static_cast<std::int64_t>(i) * g.n + j) * g.n + kk;
        const auto x = g.coords(f);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        worst = std::max(worst, std::fabs(pot.values[static_cast<size_t>(f)] -
                                          oracles::gaussian_newton_potential(r)));
    }
    const double coulomb = 1.0 / (4.0 * oracles::kPi);
    const double cerr = std::fabs(riesz_constant(2.0, 3) - coulomb) / coulomb;
    std::ostringstream os;
    os << "max |err| " << worst << " over 50 radii; riesz_constant rel err " << cerr;
    report(2, worst <= 2e-3 && cerr <= 1e-14, "Newton-potential physics normalization",
           os.str());
}

// 3. exact scaling identity, 1000 triples x 1000 t, <= 1e-12 scale, < 1 s
void criterion_scaling_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(103);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.log_uniform(1e-3, 1e3);
        const double l2 = rng.log_uniform(1e-3, 1e3);
        const double d = rng.log_uniform(1e-3, 1e3);
        const double vinf = rng.log_uniform(0.1, 10.0);
        const double lam = rng.uniform(0.5, 1.0);
        const int nn = 3 + static_cast<int>(rng.next_u64() % 3);
        const double alpha = rng.uniform(0.1, nn - 0.1);
        for (int k = 0; k < 1000; ++k) {
            const double t = rng.log_uniform(0.1, 10.0);
            const double scale =
                (a + vinf * l2 + lam * d) * std::max(1.0, std::pow(t, nn + alpha));
            worst = std::max(worst,
                             std::fabs(autonomous_identity_residual(a, l2, d, vinf, lam, t,
                                                                    nn, alpha)) /
                                 scale);
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "max residual/scale " << worst << ", " << secs << " s";
    report(3, worst <= 1e-12 && secs < 1.0, "exact autonomous scaling identity", os.str());
}

// 4. g, h >= 0 with equality only at t = 1, 10^4 samples, N in {3,4,5}
void criterion_gh_positivity() {
    Rng rng(104);
    double worst = 1e30;
    bool zero_at_one = true;
    for (int i = 0; i < 10000; ++i) {
        const int nn = 3 + static_cast<int>(rng.next_u64() % 3);
        const double alpha = rng.uniform(0.05, nn - 0.05);
        double t = (i % 2) ? rng.uniform(0.0, 10.0) : rng.log_uniform(1e-3, 10.0);
        if (std::fabs(t - 1.0) < 1e-7) t = 1.0 + 1e-3;
        const double scale = std::max(1.0, std::pow(t, nn + alpha));
        worst = std::min(worst,
                         std::min(g_elem(t, nn, alpha), h_elem(t, nn, alpha)) / scale);
        zero_at_one = zero_at_one && std::fabs(g_elem(1.0, nn, alpha)) <= 1e-14 &&
                      std::fabs(h_elem(1.0, nn, alpha)) <= 1e-14;
    }
    std::ostringstream os;
    os << "min normalized value " << worst << ", zero at t=1: " << (zero_at_one ? "yes" : "no");
    report(4, worst >= -1e-14 && zero_at_one, "fibering polynomial positivity", os.str());
}

// 5. key inequality, remark14_i (a=3, b=1), 100 fields x 20 t in [0.2, 5]
void criterion_key_inequality() {
    PotentialSpec pspec = remark14i(3.0, 1.0);
    NonlinSpec nspec = pekar();
    GridSpec g = make_grid(3, 16.0, 24);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(105);
    double worst = 1e30;
    const double na = 5.0;
    for (int i = 0; i < 100; ++i) {
        std::array<double, kMaxDim> c{};
        for (int d = 0; d < 3; ++d) c[d] = rng.uniform(-2.0, 2.0);
        Field u = gaussian_field(g, rng.uniform(0.5, 2.0), rng.uniform(0.8, 2.0), c);
        EnergyParts parts = energy_parts(*plan, pspec, nspec, u, 1.0, 0.0);
        FiberContext ctx(pspec, u, parts.breakdown.grad_sq, parts.breakdown.nonlocal, 1.0, 0.0);
        const double energy = parts.breakdown.energy();
        const double poh = parts.breakdown.pohozaev();
        for (int k = 0; k < 20; ++k) {
            const double t = rng.log_uniform(0.2, 5.0);
            const double zeta = ctx.zeta(t);
            const double gap =
                energy - zeta - (1.0 - std::pow(t, na)) / na * poh -
                (1.0 - pspec.theta) * g_elem(t, 3, 2.0) / (2.0 * na) * parts.breakdown.grad_sq;
            const double scale =
                std::fabs(energy) + std::fabs(zeta) + std::fabs(poh) + parts.breakdown.grad_sq;
            worst = std::min(worst, gap / scale);
        }
    }
    std::ostringstream os;
    os << "min gap/scale " << worst;
    report(5, worst >= -1e-8, "key energy inequality gap", os.str());
}

// 6. gradient vs central finite differences on 20 random configurations
void criterion_gradient() {
    GridSpec g = make_grid(3, 12.0, 16);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(106);
    std::vector<PotentialSpec> pots = {constant_potential(1.0), remark14i(3.0, 1.0),
                                       remark110_default()};
    NonlinParams two;
    two.p = 2.2;
    two.q = 3.0;
    two.kappa = 0.5;
    NonlinParams frac;
    frac.p = 2.5;
    std::vector<NonlinSpec> nonlins = {pekar(),
                                       make_nonlinearity(NonlinVariant::kPowerP, frac, 3, 2.0),
                                       make_nonlinearity(NonlinVariant::kTwoPower, two, 3, 2.0)};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const PotentialSpec& pspec = pots[trial % pots.size()];
        const NonlinSpec& nspec = nonlins[(trial / 3) % nonlins.size()];
        const double lambda = 0.5 + 0.5 * rng.uniform();
        const double eps = (trial % 4 == 3) ? 0.7 : 0.0;
        Field u = oracles::random_smooth_field(g, rng);
        Field v = oracles::random_smooth_field(g, rng);
        EnergyParts parts = energy_parts(*plan, pspec, nspec, u, lambda, eps);
        Field grad = l2_gradient_from_parts(pspec, u, parts);
        double pairing = 0.0;
        for (size_t i = 0; i < grad.values.size(); ++i)
            pairing += grad.values[i] * v.values[i];
        pairing *= g.cell_volume();
        const double s = 1e-3;
        Field up(g), dn(g);
        for (size_t i = 0; i < u.values.size(); ++i) {
            up.values[i] = u.values[i] + s * v.values[i];
            dn.values[i] = u.values[i] - s * v.values[i];
        }
        const double fd =
            (energy_breakdown(*plan, pspec, nspec, up, lambda, eps).energy() -
             energy_breakdown(*plan, pspec, nspec, dn, lambda, eps).energy()) /
            (2.0 * s);
        worst = std::max(worst, std::fabs(fd - pairing) / std::max(1e-12, std::fabs(fd)));
    }
    std::ostringstream os;
    os << "max rel err " << worst << " over 20 configurations";
    report(6, worst <= 1e-5, "L2 gradient vs finite differences", os.str());
}

// 7. pekar cross-validation: spectral m_inf vs the radial oracle
void criterion_pekar(double* m_inf_64 = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    RadialOracleResult oracle = radial_oracle_pekar();

    SolveConfig cfg;
    cfg.grid = make_grid(3, 24.0, 64);
    cfg.alpha = 2.0;
    cfg.potential = constant_potential(1.0);
    cfg.nonlin = pekar();
    cfg.init.amplitude = 2.0;
    cfg.init.width = 1.5;
    cfg.max_iterations = 500;
    cfg.tol_pohozaev = 5e-6;
    SolveResult res = solve_autonomous(cfg);
    if (m_inf_64) *m_inf_64 = res.energy_min;

    const double rel = std::fabs(res.energy_min - oracle.energy) / oracle.energy;
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "solver m_inf " << res.energy_min << " vs oracle " << oracle.energy << " (rel "
       << rel << "), P residual " << res.pohozaev_residual << ", " << secs << " s";
    report(7,
           res.converged && oracle.converged && rel <= 0.01 &&
               res.pohozaev_residual <= 1e-4 && secs <= 600.0,
           "pekar spectral solver vs radial oracle", os.str());
}

// 8 + 10. remark14_i vs its limit problem, and the mountain-pass bound
void criteria_comparison_and_path() {
    SolveConfig auto_cfg;
    auto_cfg.grid = make_grid(3, 12.0, 48);
    auto_cfg.alpha = 2.0;
    auto_cfg.potential = constant_potential(3.0);
    auto_cfg.nonlin = pekar();
    auto_cfg.init.amplitude = 3.0;
    auto_cfg.init.width = 1.0;
    auto_cfg.max_iterations = 500;
    SolveResult limit = solve_autonomous(auto_cfg);

    SolveConfig cfg = auto_cfg;
    cfg.potential = remark14i(3.0, 1.0);
    cfg.init.field = limit.field;  // start below m_inf and descend
    SolveResult res = solve_ground_state(cfg);

    {
        std::ostringstream os;
        os << "m " << res.energy_min << " vs m_inf " << limit.energy_min << " (diff "
           << res.energy_min - limit.energy_min << ")";
        report(8, limit.converged && res.converged &&
                   res.energy_min <= limit.energy_min + 1e-6,
               "comparison with the limit problem: m <= m_inf", os.str());
    }

    bool pass9 = true;
    std::ostringstream os9;
    {
        // 9. m_lambda_inf non-increasing over the five-point lambda grid
        SolveConfig lam_cfg;
        lam_cfg.grid = make_grid(3, 16.0, 32);
        lam_cfg.alpha = 2.0;
        lam_cfg.potential = constant_potential(1.0);
        lam_cfg.nonlin = pekar();
        lam_cfg.init.amplitude = 2.0;
        lam_cfg.init.width = 1.5;
        lam_cfg.max_iterations = 400;
        SolveResult u1 = solve_autonomous(lam_cfg);
        pass9 = u1.converged;
        std::vector<double> lambdas = {0.5, 0.625, 0.75, 0.875, 1.0};
        std::vector<double> ms;
        RieszPlanPtr plan = plan_riesz(lam_cfg.grid, lam_cfg.alpha);
        for (double lam : lambdas) {
            if (lam == 1.0) {
                ms.push_back(u1.energy_min);
                continue;
            }
            SolveConfig point = lam_cfg;
            point.lambda = lam;
            Field init = u1.field;
            const double scale = std::sqrt(1.0 / lam);
            for (double& v : init.values) v *= scale;
            point.init.field = std::move(init);
            SolveResult r = solve_autonomous(point, plan);
            pass9 = pass9 && r.converged;
            ms.push_back(r.energy_min);
        }
        os9 << "m_lambda_inf =";
        for (double m : ms) os9 << " " << m;
        for (size_t i = 1; i < ms.size(); ++i)
            pass9 = pass9 && ms[i] <= ms[i - 1] + 1e-6;
        report(9, pass9, "m_lambda_inf non-increasing over the family", os9.str());
    }

    {
        // 10. path upper bound strictly below m_1_inf for the nonconstant V
        PathBound pb = mountain_pass_upper_bound(limit, 1.0, cfg.potential);
        const double margin = limit.energy_min - pb.bound;
        std::ostringstream os;
        os << "bound " << pb.bound << " vs m_1_inf " << limit.energy_min << ", margin "
           << margin << " (T=" << pb.t_scale << ")";
        report(10, limit.converged && margin > 0.0,
               "path bound strictly below the limit level", os.str());
    }
}

// 11. the J_eps identity plus the soft concentration trend
void criterion_semiclassical() {
    PotentialSpec pspec = remark110_default();
    NonlinSpec nspec = pekar();
    GridSpec g = make_grid(3, 12.0, 16);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(111);
    double worst = 0.0;
    for (double eps : {1.0, 0.5, 0.25}) {
        for (int trial = 0; trial < 10; ++trial) {
            Field u = oracles::random_smooth_field(g, rng);
            worst = std::max(
                worst, epsilon_identity_check(*plan, pspec, nspec, u, eps).relative_residual);
        }
    }

    SolveConfig cfg;
    cfg.grid = make_grid(3, 16.0, 32);
    cfg.alpha = 2.0;
    cfg.potential = pspec;
    cfg.nonlin = nspec;
    cfg.init.amplitude = 2.0;
    cfg.init.width = 1.5;
    cfg.init.center = {2.0, 0.0, 0.0};
    cfg.max_iterations = 400;
    SweepResult sweep = sweep_epsilon(cfg, {1.0, 0.5, 0.25});
    std::ostringstream os;
    os << "max identity residual " << worst << "; soft concentration trend "
       << (sweep.monotone ? "non-increasing" : "NOT monotone") << " (distances";
    for (const auto& p : sweep.points) os << " " << p.centroid_distance;
    os << ")";
    report(11, worst <= 1e-10 && sweep.all_converged,
           "semiclassical change-of-variables identity", os.str());
}

// 12. fixed seed reproduces m bit-exactly and dumps byte-identically
void criterion_determinism() {
    SolveConfig cfg;
    cfg.grid = make_grid(3, 16.0, 24);
    cfg.alpha = 2.0;
    cfg.potential = constant_potential(1.0);
    cfg.nonlin = pekar();
    cfg.init.amplitude = 2.0;
    cfg.init.width = 1.5;
    cfg.max_iterations = 50;
    SolveResult r1 = solve_ground_state(cfg);
    SolveResult r2 = solve_ground_state(cfg);

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "choquard_acceptance";
    fs::create_directories(dir);
    dump_field(r1.field, (dir / "a.field").string());
    dump_field(r2.field, (dir / "b.field").string());
    const std::string bytes_a = read_text_file((dir / "a.field").string());
    const std::string bytes_b = read_text_file((dir / "b.field").string());
    fs::remove_all(dir);

    std::ostringstream os;
    os << "m " << r1.energy_min << (r1.energy_min == r2.energy_min ? " == " : " != ")
       << r2.energy_min << ", dumps " << (bytes_a == bytes_b ? "identical" : "differ");
    report(12, r1.energy_min == r2.energy_min && bytes_a == bytes_b,
           "bit-exact reproducibility", os.str());
}

}  // namespace

int main() {
    criterion_riesz_oracle();
    criterion_normalization();
    criterion_scaling_identity();
    criterion_gh_positivity();
    criterion_key_inequality();
    criterion_gradient();
    criterion_pekar();
    criteria_comparison_and_path();
    criterion_semiclassical();
    criterion_determinism();
    std::printf("ACCEPTANCE: %d/12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choquard/functionals.hpp"

namespace choquard {

struct InitAnsatz {
    double amplitude = 2.0;
    double width = 0.0;  // 0 -> L/8
    std::array<double, kMaxDim> center{};
    std::optional<Field> field;  // warm start, overrides the Gaussian
};

struct SolveConfig {
    GridSpec grid;
    double alpha = 2.0;
    PotentialSpec potential;
    NonlinSpec nonlin;
    double lambda = 1.0;
    double eps = 0.0;
    InitAnsatz init;
    std::vector<double> widths;  // multi-start widths; empty -> single start
    int max_iterations = 400;
    double step0 = 0.5;             // first trial step, in units of ||u||/||g||
    int max_halvings = 40;          // backtracking factor 1/2
    double tol_energy = 1e-9;       // relative energy decrease
    double tol_pohozaev = 1e-5;     // |P| / (a + |b_poh| + d)
    double tol_gradient = 3e-4;     // ||grad I||_2 / ||u||_2
    std::uint64_t seed = 12345;
    int fiber_samples = 64;         // bracket resolution on [fiber_lo, fiber_hi]
    double fiber_lo = 1e-3;
    double fiber_hi = 1e3;
    int radial_bins = 4096;         // fiber-scan binning for nonconstant V
};

struct IterRecord {
    int iter = 0;
    double energy = 0.0;        // I at the iterate (exactly monotone chain)
    double fiber_energy = 0.0;  // max_t I(u_t) diagnostic
    double pohozaev_residual = 0.0;
    double gradient_residual = 0.0;       // tangential ||grad I - mu grad P|| / ||u||
    double full_gradient_residual = 0.0;  // ||grad I|| / ||u||
    double t_star = 1.0;
    double step = 0.0;
};

struct SolveResult {
    Field field;
    double energy_min = 0.0;  // m, bit-equal to breakdown.energy()
    EnergyBreakdown breakdown;
    double l2_sq = 0.0;
    double pohozaev_residual = 0.0;
    // the stopping residual: manifold-tangential gradient norm over ||u||;
    // the full L2 gradient norm carries an O(h^2) discrete Lagrange floor
    // and is reported alongside
    double gradient_residual = 0.0;
    double full_gradient_residual = 0.0;
    int iterations = 0;
    std::vector<double> t_history;
    bool in_lambda = false;
    bool converged = false;
    bool fiber_unique_warning = false;  // zeta' changed sign more than once
    double tail_fraction = 0.0;
    std::vector<IterRecord> trace;
    std::string stop_reason;
    std::string init_note;  // e.g. the amplitude scan that entered Lambda
};

struct FiberMax {
    double t_star = 1.0;
    double zeta_star = 0.0;
    bool unique = true;  // zeta' changes sign exactly once on the sample grid
};

/// Maximizes zeta on [lo, hi]: log-grid bracket then golden-section
/// refinement to 1e-10 relative width. Throws if the grid gives no interior
/// bracket. Callers must have checked u in Lambda (d > threshold).
FiberMax fiber_maximize(const FiberContext& ctx, double lo = 1e-3, double hi = 1e3,
                        int samples = 64);

struct ProjectionResult {
    Field field;
    double t_star = 1.0;
    double pohozaev_residual = 0.0;  // of the dilated field
    double interpolation_floor = 0.0;  // |zeta_star - I(dilated)| / scale
    bool unique = true;
};

/// Dilates u by the fibering maximizer so P(u_t) = 0 up to the reported
/// interpolation floor. Throws "fibering undefined" when u is outside
/// Lambda (the fibering map is only defined there).
ProjectionResult project_to_manifold(const RieszPlan& plan, const PotentialSpec& pspec,
                                     const NonlinSpec& nspec, const Field& u, double lambda,
                                     double eps);

/// Manifold-projected descent for m = inf_Lambda max_t I(u_t). Iterates
/// live exactly on {P = 0} through amplitude projection (exact scalar
/// algebra for the power-sum nonlinearities); steps follow the
/// manifold-tangential energy gradient preconditioned by (-lap + V_inf)^{-1}
/// and are accepted only on strict decrease of the projected energy, so the
/// energy chain is monotone by construction. Stops when the energy change,
/// Pohozaev residual, and tangential gradient residual all meet their
/// tolerances. A prebuilt plan for (cfg.grid, cfg.alpha) may be passed to
/// avoid repeated kernel transforms.
SolveResult solve_ground_state(const SolveConfig& cfg, RieszPlanPtr plan = nullptr);

/// Constant-potential entry point (exact fibering polynomial fast path).
SolveResult solve_autonomous(const SolveConfig& cfg, RieszPlanPtr plan = nullptr);

struct PathBound {
    double bound = 0.0;   // max_t I_lambda((u1inf)_{tT}), an upper bound for c_lambda
    double t_scale = 0.0; // T of the path
    double t_at_max = 0.0;
};

/// Upper bound for the mountain-pass level c_lambda along the dilation path
/// through the autonomous lambda=1 minimizer. T (when not supplied) is the
/// first t with the V_max half-lambda energy negative.
PathBound mountain_pass_upper_bound(const SolveResult& u1inf, double lambda,
                                    const PotentialSpec& pspec,
                                    std::optional<double> t_scale = std::nullopt);

}  // namespace choquard

#pragma once

#include <string>
#include <vector>

#include "choquard/solver.hpp"

namespace choquard {

struct ConcentrationMetrics {
    std::array<double, kMaxDim> centroid{};  // int x u^2 / int u^2
    std::array<double, kMaxDim> argmax{};    // node of max |u|
    double rms_width = 0.0;                  // sqrt(int |x-centroid|^2 u^2 / int u^2)
};

ConcentrationMetrics concentration_metrics(const Field& u);

struct SweepPoint {
    double parameter = 0.0;  // eps or lambda
    double energy = 0.0;     // m at this point
    bool converged = false;
    int iterations = 0;
    double pohozaev_residual = 0.0;
    ConcentrationMetrics metrics;       // of the back-scaled field (eps sweeps)
    double identity_residual = 0.0;     // J_eps identity (eps sweeps)
    double centroid_distance = 0.0;     // |centroid - x0| (eps sweeps)
    double path_bound = 0.0;            // c_lambda upper bound (lambda sweeps)
    double bound_margin = 0.0;          // m_lambda_inf - bound (lambda sweeps)
};

struct SweepResult {
    std::string kind;  // "eps" or "lambda"
    std::vector<SweepPoint> points;
    bool all_converged = false;
    bool monotone = false;      // lambda: m non-increasing; eps: centroid distance trend
    double monotone_slack = 0.0;
};

/// Solves the rescaled problem with V_eps for each eps (descending,
/// warm-started), verifies J_eps(v) = eps^N I^eps(u) with an independently
/// assembled J_eps, and records concentration metrics of the back-scaled
/// solution v(y) = u(y/eps).
SweepResult sweep_epsilon(const SolveConfig& cfg, const std::vector<double>& eps_list,
                          RieszPlanPtr plan = nullptr);

/// m_lambda_inf by autonomous solves plus the mountain-pass path bound with
/// a nonconstant potential, for each lambda in [1/2, 1].
SweepResult sweep_lambda(const SolveConfig& cfg, const std::vector<double>& lambda_list,
                         const PotentialSpec& nonconstant_pspec, RieszPlanPtr plan = nullptr);

/// Both sides of the J_eps identity for one (u, eps): the left side is
/// assembled on the eps-scaled grid with its own Riesz plan and quadratures.
struct EpsilonIdentity {
    double j_eps = 0.0;         // J_eps(v), v the back-scaled field
    double scaled_energy = 0.0; // eps^N I^eps(u)
    double relative_residual = 0.0;
};
EpsilonIdentity epsilon_identity_check(const RieszPlan& plan, const PotentialSpec& pspec,
                                       const NonlinSpec& nspec, const Field& u, double eps);

struct RadialOracleConfig {
    double r_max = 30.0;
    int points = 3000;
    int max_iterations = 400;
    double tol = 1e-11;       // relative profile change
    double mixing = 0.5;
    int power_iterations = 60;
};

struct RadialOracleResult {
    double energy = 0.0;           // ground-state m_inf
    double grad_sq = 0.0;
    double l2_sq = 0.0;
    double nonlocal = 0.0;         // d
    double pohozaev_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Independent 1-D fixed-point computation of the Pekar ground state
/// (N = 3, alpha = 2, F = t^2/2, V = 1): substitute psi = r u, solve the
/// linear eigenproblem (-psi'' + psi) = mu Phi psi with the radial Newton
/// potential Phi built by cumulative integrals, rescale the amplitude to
/// Rayleigh consistency, damp, iterate. Cross-check oracle only.
RadialOracleResult radial_oracle_pekar(const RadialOracleConfig& cfg = {});

enum class CheckStatus { kPass, kFail, kInfo };

struct BatteryCheck {
    std::string name;
    CheckStatus status = CheckStatus::kInfo;
    double margin = 0.0;
    std::string witness;
};

struct BatteryConfig {
    std::uint64_t seed = 777;
    int gh_samples = 10000;
    int identity_triples = 1000;
    int identity_ts = 1000;
    int hardy_bumps = 100;
    int oracle_fields = 20;
    int key_inequality_fields = 100;
    int key_inequality_ts = 20;
    std::vector<std::string> solution_paths;  // optional Pohozaev re-checks
};

struct BatteryReport {
    std::vector<BatteryCheck> checks;
    bool hard_failure = false;
};

/// The batch verification battery: elementary-inequality positivity, the
/// exact scaling identity, the discrete Hardy check, Riesz FFT/direct
/// equivalence, the Newton-potential normalization, the key inequality gap
/// on random fields, and the HLS diagnostic ratio (info only).
BatteryReport verify_battery(const BatteryConfig& cfg = {});

std::string to_string(CheckStatus s);

}  // namespace choquard

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

enum class PotentialVariant {
    kConstant,
    kRemark14i,    // V = a - b/(|x|^2 + 1)
    kRemark14ii,   // V = a - b/(|x|^alpha + 1)
    kRemark14iii,  // V = a - b exp(-|x|^alpha)
    kRemark17,     // V = a - b/(1 + |x|^beta)
    kRemark110,    // V = a - b cos(|x|^beta)/(1 + |x|^beta)
    kUserTable,
};

std::string to_string(PotentialVariant v);

/// Closed-form radial potential with its catalog metadata.
///
/// theta / theta_prime / theta_second are stored per variant as conservative
/// hand-derived constants (the numeric checker certifies them, it never
/// discovers them):
///   - constant:     all zero.
///   - remark14_i:   theta = 0 (the monotonicity scan passes without the
///                   Hardy helper for admissible parameters);
///                   theta' = theta'' = b / (2 alpha (a-b)), from
///                   grad V . x = 2b y(1-y) <= b/2 with y = r^2/(r^2+1)
///                   and alpha V >= alpha (a-b).
///   - remark14_ii:  theta = 0; theta' = theta'' = b / (4 (a-b)).
///   - remark14_iii: theta = 0; theta' = theta'' = b / (e alpha (a-b)).
///   - remark17:     theta' = theta'' = beta b / (4 alpha (a-b)), rbar = 0.
///   - remark110:    theta'' = beta b / (alpha (a-b)); no (V2)/(V3) claim.
/// All are clamped to [0, 0.95]; config may override.
struct PotentialSpec {
    PotentialVariant variant = PotentialVariant::kConstant;
    int dim = 3;
    double alpha = 2.0;
    double a = 0.0;
    double b = 0.0;
    double beta = 0.0;
    double v_inf = 0.0;   // limit at infinity, (V1)
    double v_max = 0.0;   // sup of V
    double v_min = 0.0;   // min of V, attained at x0
    std::array<double, kMaxDim> x0{};
    double theta = 0.0;         // (V3)
    double theta_prime = 0.0;   // (V4)
    double theta_second = 0.0;  // (V6)
    double rbar = 0.0;          // (V4) crossover radius
    // user_table data (radial, piecewise linear)
    std::vector<double> table_r;
    std::vector<double> table_v;

    bool is_constant() const { return variant == PotentialVariant::kConstant; }
};

struct PotentialParams {
    double a = 0.0;
    double b = 0.0;
    double beta = 0.0;
    double v_inf = 1.0;  // constant variant only
    std::optional<double> theta;
    std::optional<double> theta_prime;
    std::optional<double> theta_second;
    std::optional<double> rbar;
    std::vector<double> table_r;
    std::vector<double> table_v;
};

/// Builds a catalog entry; enforces the printed parameter inequality of the
/// corresponding paper remark at construction.
PotentialSpec make_potential(PotentialVariant variant, const PotentialParams& params, int dim,
                             double alpha);

struct PotentialValue {
    double v;                  // V(x)
    double radial_derivative;  // grad V(x) . x
};

PotentialValue eval_potential(const PotentialSpec& spec, const std::array<double, kMaxDim>& x);
/// Radial core (all catalog variants are radial).
PotentialValue eval_potential_radial(const PotentialSpec& spec, double r);

enum class NonlinVariant { kPowerP, kPekar, kTwoPower };

std::string to_string(NonlinVariant v);

/// f and its antiderivative F. power_p: f = |t|^{p-2} t, F = |t|^p / p.
/// pekar is power_p with p = 2 (F = t^2/2). two_power adds kappa |t|^{q-2} t.
struct NonlinSpec {
    NonlinVariant variant = NonlinVariant::kPekar;
    int dim = 3;
    double alpha = 2.0;
    double p = 2.0;
    double q = 0.0;
    double kappa = 0.0;
    double s0 = 1.0;      // witness with F(s0) != 0, (F3)
    double c0_est = 0.0;  // scanned envelope constant, (F1)
    double lower_exp = 0.0;  // (N+alpha)/N
    double upper_exp = 0.0;  // (N+alpha)/(N-2)
};

struct NonlinParams {
    double p = 2.0;
    double q = 0.0;
    double kappa = 0.0;
    double s0 = 1.0;
};

/// enforce_window=false skips the strict (F2) exponent-window check so that
/// out-of-window exponents can be fed to the assumption checker.
NonlinSpec make_nonlinearity(NonlinVariant variant, const NonlinParams& params, int dim,
                             double alpha, bool enforce_window = true);

struct NonlinValue {
    double f;
    double big_f;  // F(t)
};

NonlinValue eval_nonlinearity(const NonlinSpec& spec, double t);

/// Decomposition F(t) = sum_a coeff_a |t|^{p_a} / p_a. Every catalog
/// nonlinearity is a power sum, which makes amplitude scaling exact:
/// F(c t) = sum_a coeff_a c^{p_a} |t|^{p_a} / p_a.
struct PowerComponent {
    double exponent;
    double coeff;
};
std::vector<PowerComponent> power_components(const NonlinSpec& spec);

enum class Verdict { kPass, kFail, kNotApplicable };

std::string to_string(Verdict v);

struct AssumptionEntry {
    std::string name;      // "V1" ... "V6", "F1" ... "F3"
    Verdict verdict = Verdict::kNotApplicable;
    double margin = 0.0;   // worst sampled margin; pass needs >= -1e-9
    std::string witness;   // point / parameter achieving the worst margin
};

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;
    std::string sampling_description;

    const AssumptionEntry* find(const std::string& name) const;
    bool all_passed(std::initializer_list<const char*> names) const;
};

struct SamplingConfig {
    int rays = 32;
    int radii = 64;
    int scales = 64;        // t samples per ray for the (V3) scan
    double r_min = 1e-3;
    double r_max = 1e3;
    double t_min = 5e-2;
    double t_max = 20.0;
    double f_t_min = 1e-8;  // nonlinearity envelope scan range
    double f_t_max = 1e8;
    int f_samples = 400;
    std::uint64_t seed = 2024;
};

AssumptionReport check_assumptions(const PotentialSpec& pspec, const NonlinSpec& nspec,
                                   const SamplingConfig& sampling = {});

/// Coercivity/smallness diagnostic constants. Reported only,
/// never used to gate the solver. S and C1 come from config.
struct DiagnosticConstants {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    double rho0 = 0.0;
    double radius_used = 0.0;  // R of the (B31) search
    double m0_used = 0.0;      // sup |grad V . x| over the scan
};

DiagnosticConstants diagnostic_constants(const PotentialSpec& pspec, double sobolev_s,
                                         double hls_c1);

/// Sharp Sobolev constant S_N = pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}
/// (default for diagnostic_constants' S input).
double sharp_sobolev_constant(int dim);

}  // namespace choquard

#include "choquard/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "choquard/riesz.hpp"

namespace choquard {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double clamp_theta(double v) { return std::clamp(v, 0.0, 0.95); }

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string point_witness(double r) {
    std::ostringstream os;
    os << "r=" << r;
    return os.str();
}

}  // namespace

std::string to_string(PotentialVariant v) {
    switch (v) {
        case PotentialVariant::kConstant: return "constant";
        case PotentialVariant::kRemark14i: return "remark14_i";
        case PotentialVariant::kRemark14ii: return "remark14_ii";
        case PotentialVariant::kRemark14iii: return "remark14_iii";
        case PotentialVariant::kRemark17: return "remark17";
        case PotentialVariant::kRemark110: return "remark110";
        case PotentialVariant::kUserTable: return "user_table";
    }
    return "?";
}

std::string to_string(NonlinVariant v) {
    switch (v) {
        case NonlinVariant::kPowerP: return "power";
        case NonlinVariant::kPekar: return "pekar";
        case NonlinVariant::kTwoPower: return "two_power";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::kPass: return "pass";
        case Verdict::kFail: return "fail";
        case Verdict::kNotApplicable: return "not-applicable";
    }
    return "?";
}

PotentialSpec make_potential(PotentialVariant variant, const PotentialParams& params, int dim,
                             double alpha) {
    require(dim >= 3 && dim <= kMaxDim, "potential: dimension must be in [3, 4]");
    require(alpha > 0.0 && alpha < dim, "potential: alpha must lie in (0, N)");
    PotentialSpec s;
    s.variant = variant;
    s.dim = dim;
    s.alpha = alpha;
    s.a = params.a;
    s.b = params.b;
    s.beta = params.beta;
    const double nn = static_cast<double>(dim);

    switch (variant) {
        case PotentialVariant::kConstant:
            require(params.v_inf > 0.0, "constant potential: Vinf must be positive ((V1))");
            s.v_inf = s.v_max = s.v_min = params.v_inf;
            break;
        case PotentialVariant::kRemark14i: {
            require(params.a > params.b && params.b > 0.0, "remark14_i: requires a > b > 0");
            const double lhs = alpha * nn * params.a + (alpha + 2.0) * std::pow(nn - 2.0, 3);
            const double rhs = ((nn - 2.0) * (alpha + 2.0) + 2.0 * (alpha + 4.0)) * params.b;
            std::ostringstream os;
            os << "remark14_i: requires alpha N a + (alpha+2)(N-2)^3 > [(N-2)(alpha+2)+2(alpha+4)] b"
               << " (" << lhs << " vs " << rhs << ")";
            require(lhs > rhs, os.str());
            s.v_inf = s.v_max = params.a;
            s.v_min = params.a - params.b;
            s.theta_prime = s.theta_second =
                clamp_theta(params.b / (2.0 * alpha * (params.a - params.b)));
            break;
        }
        case PotentialVariant::kRemark14ii:
            require(params.b > 0.0 && params.a >= (2.0 + alpha / nn) * params.b,
                    "remark14_ii: requires a >= (2 + alpha/N) b > 0");
            s.v_inf = s.v_max = params.a;
            s.v_min = params.a - params.b;
            s.theta_prime = s.theta_second =
                clamp_theta(params.b / (4.0 * (params.a - params.b)));
            break;
        case PotentialVariant::kRemark14iii:
            require(params.a > params.b && params.b > 0.0, "remark14_iii: requires a > b > 0");
            s.v_inf = s.v_max = params.a;
            s.v_min = params.a - params.b;
            s.theta_prime = s.theta_second =
                clamp_theta(params.b / (std::exp(1.0) * alpha * (params.a - params.b)));
            break;
        case PotentialVariant::kRemark17:
            require(params.beta > 0.0, "remark17: requires beta > 0");
            require(params.b > 0.0 && alpha * params.a > (alpha + params.beta) * params.b,
                    "remark17: requires alpha a > (alpha + beta) b > 0");
            s.v_inf = s.v_max = params.a;
            s.v_min = params.a - params.b;
            s.theta_prime = s.theta_second =
                clamp_theta(params.beta * params.b / (4.0 * alpha * (params.a - params.b)));
            break;
        case PotentialVariant::kRemark110:
            require(params.beta > 0.0, "remark110: requires beta > 0");
            require(params.b > 0.0 && alpha * params.a > (alpha + params.beta) * params.b,
                    "remark110: requires alpha a > (alpha + beta) b > 0");
            s.v_inf = params.a;
            s.v_max = params.a + params.b / (1.0 + kPi);  // cos = -1 at |x|^beta = pi
            s.v_min = params.a - params.b;
            s.theta_second =
                clamp_theta(params.beta * params.b / (alpha * (params.a - params.b)));
            s.theta_prime = s.theta_second;
            break;
        case PotentialVariant::kUserTable: {
            require(params.table_r.size() >= 2 && params.table_r.size() == params.table_v.size(),
                    "user_table: need matching r/V arrays with at least 2 samples");
            require(std::is_sorted(params.table_r.begin(), params.table_r.end()),
                    "user_table: radii must be ascending");
            require(params.v_inf > 0.0, "user_table: Vinf must be positive ((V1))");
            s.table_r = params.table_r;
            s.table_v = params.table_v;
            s.v_inf = params.v_inf;
            s.v_max = *std::max_element(s.table_v.begin(), s.table_v.end());
            auto mn = std::min_element(s.table_v.begin(), s.table_v.end());
            s.v_min = *mn;
            s.x0[0] = s.table_r[static_cast<size_t>(mn - s.table_v.begin())];
            break;
        }
    }
    if (variant != PotentialVariant::kUserTable) s.x0 = {};  // catalog minima sit at the origin
    if (params.theta) s.theta = clamp_theta(*params.theta);
    if (params.theta_prime) s.theta_prime = clamp_theta(*params.theta_prime);
    if (params.theta_second) s.theta_second = clamp_theta(*params.theta_second);
    if (params.rbar) s.rbar = std::max(0.0, *params.rbar);
    require(s.v_inf > 0.0, "potential: V_inf must be positive ((V1))");
    return s;
}

PotentialValue eval_potential_radial(const PotentialSpec& s, double r) {
    switch (s.variant) {
        case PotentialVariant::kConstant:
            return {s.v_inf, 0.0};
        case PotentialVariant::kRemark14i: {
            const double d = r * r + 1.0;
            return {s.a - s.b / d, 2.0 * s.b * r * r / (d * d)};
        }
        case PotentialVariant::kRemark14ii: {
            const double z = std::pow(r, s.alpha);
            const double d = z + 1.0;
            return {s.a - s.b / d, s.alpha * s.b * z / (d * d)};
        }
        case PotentialVariant::kRemark14iii: {
            const double z = std::pow(r, s.alpha);
            const double e = std::exp(-z);
            return {s.a - s.b * e, s.alpha * s.b * z * e};
        }
        case PotentialVariant::kRemark17: {
            const double z = std::pow(r, s.beta);
            const double d = 1.0 + z;
            return {s.a - s.b / d, s.beta * s.b * z / (d * d)};
        }
        case PotentialVariant::kRemark110: {
            const double z = std::pow(r, s.beta);
            const double d = 1.0 + z;
            return {s.a - s.b * std::cos(z) / d,
                    s.b * s.beta * z * (std::sin(z) * d + std::cos(z)) / (d * d)};
        }
        case PotentialVariant::kUserTable: {
            if (r > s.table_r.back() || r < s.table_r.front())
                throw std::out_of_range("user_table potential: point outside tabulated radius");
            auto it = std::upper_bound(s.table_r.begin(), s.table_r.end(), r);
            size_t hi = std::min(s.table_r.size() - 1,
                                 static_cast<size_t>(it - s.table_r.begin()));
            size_t lo = hi == 0 ? 0 : hi - 1;
            if (hi == lo) hi = lo + 1;
            const double slope =
                (s.table_v[hi] - s.table_v[lo]) / (s.table_r[hi] - s.table_r[lo]);
            const double v = s.table_v[lo] + slope * (r - s.table_r[lo]);
            return {v, slope * r};  // interpolant derivative: the table fallback
        }
    }
    throw std::logic_error("eval_potential_radial: unknown variant");
}

PotentialValue eval_potential(const PotentialSpec& s, const std::array<double, kMaxDim>& x) {
    double r2 = 0.0;
    for (int d = 0; d < s.dim; ++d) r2 += x[d] * x[d];
    return eval_potential_radial(s, std::sqrt(r2));
}

NonlinSpec make_nonlinearity(NonlinVariant variant, const NonlinParams& params, int dim,
                             double alpha, bool enforce_window) {
    require(dim >= 3 && dim <= kMaxDim,
            "nonlinearity: dimension must be in [3, 4] (the admissible exponent window needs N > 2)");
    require(alpha > 0.0 && alpha < dim, "nonlinearity: alpha must lie in (0, N)");
    NonlinSpec s;
    s.variant = variant;
    s.dim = dim;
    s.alpha = alpha;
    const double nn = static_cast<double>(dim);
    s.lower_exp = (nn + alpha) / nn;
    s.upper_exp = (nn + alpha) / (nn - 2.0);
    s.p = (variant == NonlinVariant::kPekar) ? 2.0 : params.p;
    s.q = params.q;
    s.kappa = params.kappa;
    s.s0 = params.s0 > 0.0 ? params.s0 : 1.0;

    auto in_window = [&](double e) { return e > s.lower_exp && e < s.upper_exp; };
    if (enforce_window) {
        std::ostringstream os;
        os << "nonlinearity: exponent must lie strictly in ((N+alpha)/N, (N+alpha)/(N-2)) = ("
           << s.lower_exp << ", " << s.upper_exp << ") per (F1)/(F2)";
        require(in_window(s.p), os.str());
        if (variant == NonlinVariant::kTwoPower) require(in_window(s.q), os.str());
    }
    if (variant == NonlinVariant::kTwoPower)
        require(params.kappa > 0.0, "two_power: kappa must be positive");

    // envelope constant estimate for (F1), scanned on a log grid
    double c0 = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = std::pow(10.0, -8.0 + 16.0 * i / 200.0);
        const double ft = std::fabs(eval_nonlinearity(s, t).f * t);
        const double env = std::pow(t, s.lower_exp) + std::pow(t, s.upper_exp);
        c0 = std::max(c0, ft / env);
    }
    s.c0_est = c0;
    return s;
}

NonlinValue eval_nonlinearity(const NonlinSpec& s, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("eval_nonlinearity: non-finite argument");
    const double at = std::fabs(t);
    const double sign = (t > 0.0) ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    auto power_term = [&](double p) {
        NonlinValue v;
        v.f = (at == 0.0) ? 0.0 : sign * std::pow(at, p - 1.0);
        v.big_f = (at == 0.0) ? 0.0 : std::pow(at, p) / p;
        return v;
    };
    NonlinValue v = power_term(s.p);
    if (s.variant == NonlinVariant::kTwoPower) {
        NonlinValue w = power_term(s.q);
        v.f += s.kappa * w.f;
        v.big_f += s.kappa * w.big_f;
    }
    return v;
}

std::vector<PowerComponent> power_components(const NonlinSpec& s) {
    std::vector<PowerComponent> out = {{s.p, 1.0}};
    if (s.variant == NonlinVariant::kTwoPower) out.push_back({s.q, s.kappa});
    return out;
}

const AssumptionEntry* AssumptionReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

bool AssumptionReport::all_passed(std::initializer_list<const char*> names) const {
    for (const char* n : names) {
        const AssumptionEntry* e = find(n);
        if (!e || e->verdict != Verdict::kPass) return false;
    }
    return true;
}

namespace {

double table_limit(const PotentialSpec& s) {
    return s.variant == PotentialVariant::kUserTable ? s.table_r.back()
                                                     : std::numeric_limits<double>::infinity();
}

/// log-log slope of q over the decade starting at t.
double end_slope(const NonlinSpec& s, double t, bool of_big_f) {
    auto val = [&](double x) {
        NonlinValue v = eval_nonlinearity(s, x);
        return of_big_f ? std::fabs(v.big_f) : std::fabs(v.f * x);
    };
    const double a = val(t), b = val(10.0 * t);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return (std::log(b) - std::log(a)) / std::log(10.0);
}

}  // namespace

AssumptionReport check_assumptions(const PotentialSpec& pspec, const NonlinSpec& nspec,
                                   const SamplingConfig& cfg) {
    if (cfg.rays < 1 || cfg.radii < 2 || cfg.scales < 2)
        throw std::invalid_argument("check_assumptions: empty sample set");
    AssumptionReport rep;
    {
        std::ostringstream os;
        os << cfg.radii << " log-spaced radii in [" << cfg.r_min << ", " << cfg.r_max << "], "
           << cfg.scales << " scales in [" << cfg.t_min << ", " << cfg.t_max
           << "] (catalog potentials are radial, so rays collapse to the radial scan); "
           << "V3 differences normalized by max(1,|psi|)";
        rep.sampling_description = os.str();
    }

    const double r_cap = std::min(cfg.r_max, table_limit(pspec));
    std::vector<double> radii(static_cast<size_t>(cfg.radii));
    for (int i = 0; i < cfg.radii; ++i)
        radii[static_cast<size_t>(i)] =
            cfg.r_min * std::pow(r_cap / cfg.r_min, static_cast<double>(i) / (cfg.radii - 1));

    const int n = pspec.dim;
    const double alpha = pspec.alpha;

    auto add = [&rep](const std::string& name, double margin, const std::string& witness) {
        AssumptionEntry e;
        e.name = name;
        e.margin = margin;
        e.witness = witness;
        e.verdict = (margin >= -1e-9) ? Verdict::kPass : Verdict::kFail;
        rep.entries.push_back(e);
    };

    // (V1): V >= 0 on samples and V_inf > 0
    {
        double worst = pspec.v_inf;
        std::string wit = "V_inf";
        for (double r : radii) {
            double v = eval_potential_radial(pspec, r).v;
            if (v < worst) {
                worst = v;
                wit = point_witness(r);
            }
        }
        add("V1", worst, wit);
    }
    // (V2): V <= V_inf
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string wit;
        for (double r : radii) {
            double m = pspec.v_inf - eval_potential_radial(pspec, r).v;
            if (m < worst) {
                worst = m;
                wit = point_witness(r);
            }
        }
        add("V2", worst, wit);
    }
    // (V3): psi(t) = [N V(tr) + grad V(tr).(tr)]/t^alpha
    //              + (N-2)^3 theta / (4 t^{alpha+2} r^2) nonincreasing in t
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string wit;
        const double hardy_c = std::pow(n - 2.0, 3) * pspec.theta / 4.0;
        for (double r : radii) {
            double t_hi = std::min(cfg.t_max, table_limit(pspec) / r);
            if (t_hi <= cfg.t_min) continue;
            double prev = 0.0;
            for (int k = 0; k < cfg.scales; ++k) {
                const double t = cfg.t_min * std::pow(t_hi / cfg.t_min,
                                                      static_cast<double>(k) / (cfg.scales - 1));
                PotentialValue pv = eval_potential_radial(pspec, t * r);
                const double psi = (n * pv.v + pv.radial_derivative) / std::pow(t, alpha) +
                                   hardy_c / (std::pow(t, alpha + 2.0) * r * r);
                if (k > 0) {
                    const double m = (prev - psi) / std::max(1.0, std::fabs(prev));
                    if (m < worst) {
                        worst = m;
                        std::ostringstream os;
                        os << "r=" << r << ", t=" << t;
                        wit = os.str();
                    }
                }
                prev = psi;
            }
        }
        add("V3", worst, wit);
    }
    // (V4): grad V.x <= (N-2)^2/(2|x|^2) below rbar, <= theta' alpha V beyond
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string wit;
        for (double r : radii) {
            PotentialValue pv = eval_potential_radial(pspec, r);
            const double bound = (r < pspec.rbar) ? std::pow(n - 2.0, 2) / (2.0 * r * r)
                                                  : pspec.theta_prime * alpha * pv.v;
            const double m = bound - pv.radial_derivative;
            if (m < worst) {
                worst = m;
                wit = point_witness(r);
            }
        }
        add("V4", worst, wit);
    }
    // (V5): interior minimum strictly below V_inf (strict, so the constant
    // potential fails it)
    {
        double vmin = eval_potential_radial(pspec, 0.0).v;
        double rmin = 0.0;
        for (double r : radii) {
            double v = eval_potential_radial(pspec, r).v;
            if (v < vmin) {
                vmin = v;
                rmin = r;
            }
        }
        double margin = pspec.v_inf - vmin;
        if (rmin >= 0.5 * r_cap) margin = -1.0;  // minimum drifting to the scan edge
        add("V5", margin, point_witness(rmin));
        if (margin <= 1e-9 * std::max(1.0, pspec.v_inf))
            rep.entries.back().verdict = Verdict::kFail;
    }
    // (V6): grad V.x <= theta'' alpha V everywhere
    {
        double worst = std::numeric_limits<double>::infinity();
        std::string wit;
        for (double r : radii) {
            PotentialValue pv = eval_potential_radial(pspec, r);
            const double m = pspec.theta_second * alpha * pv.v - pv.radial_derivative;
            if (m < worst) {
                worst = m;
                wit = point_witness(r);
            }
        }
        add("V6", worst, wit);
    }
    // (F1): |f(t) t| grows at least like t^{(N+alpha)/N} at 0 and at most like
    // t^{(N+alpha)/(N-2)} at infinity (log-log end slopes, non-strict)
    {
        const double s0 = end_slope(nspec, cfg.f_t_min, false);
        const double si = end_slope(nspec, cfg.f_t_max / 10.0, false);
        const double margin = std::min(s0 - nspec.lower_exp, nspec.upper_exp - si);
        std::ostringstream os;
        os << "slope@0=" << s0 << ", slope@inf=" << si << ", C0~" << nspec.c0_est;
        add("F1", margin, os.str());
    }
    // (F2): strict versions on F itself
    {
        const double s0 = end_slope(nspec, cfg.f_t_min, true);
        const double si = end_slope(nspec, cfg.f_t_max / 10.0, true);
        const double margin = std::min(s0 - nspec.lower_exp, nspec.upper_exp - si);
        std::ostringstream os;
        os << "F-slope@0=" << s0 << ", F-slope@inf=" << si;
        add("F2", margin, os.str());
    }
    // (F3): the witness s0 with F(s0) != 0
    {
        const double f0 = std::fabs(eval_nonlinearity(nspec, nspec.s0).big_f);
        std::ostringstream os;
        os << "s0=" << nspec.s0;
        add("F3", f0 - 1e-12, os.str());
    }
    return rep;
}

double sharp_sobolev_constant(int dim) {
    const double nn = static_cast<double>(dim);
    return kPi * nn * (nn - 2.0) *
           std::pow(std::tgamma(0.5 * nn) / std::tgamma(nn), 2.0 / nn);
}

DiagnosticConstants diagnostic_constants(const PotentialSpec& pspec, double sobolev_s,
                                         double hls_c1) {
    if (!(sobolev_s > 0.0) || !(hls_c1 > 0.0))
        throw std::invalid_argument("diagnostic_constants: S and C1 must be positive");
    const int n = pspec.dim;
    const double nn = static_cast<double>(n);
    const double alpha = pspec.alpha;
    const double theta = pspec.theta;
    DiagnosticConstants out;

    out.gamma2 = nn - 2.0 + (2.0 + alpha) * theta + (nn + alpha) * pspec.v_inf;

    // scan for M0 = sup |grad V . x| and the V >= V_inf/2 level radius
    double m0 = 0.0;
    double r_level = 0.0;
    const double r_cap = std::min(1e6, table_limit(pspec));
    for (int i = 0; i <= 4096; ++i) {
        const double r = 1e-3 * std::pow(r_cap / 1e-3, i / 4096.0);
        PotentialValue pv = eval_potential_radial(pspec, r);
        m0 = std::max(m0, std::fabs(pv.radial_derivative));
        if (pv.v < 0.5 * pspec.v_inf) r_level = r;
    }
    out.m0_used = m0;

    // Eq (B31): [ (N-2)^2 (2+alpha) theta / 4 + M0 + alpha V_inf ] R^{-N} < (N+alpha) V_inf / 4
    const double c_b31 = std::pow(nn - 2.0, 2) * (2.0 + alpha) * theta / 4.0 + m0 +
                         alpha * pspec.v_inf;
    double radius = std::max(r_level, std::pow(4.0 * c_b31 / ((nn + alpha) * pspec.v_inf),
                                               1.0 / nn));
    radius *= 1.0 + 1e-9;
    while (c_b31 * std::pow(radius, -nn) >= 0.25 * (nn + alpha) * pspec.v_inf && radius < 1e9)
        radius *= 1.1;
    out.radius_used = radius;

    const double omega = unit_ball_volume(n);
    out.gamma1 = std::min({(1.0 - theta) * (nn - 2.0) / 2.0,
                           (1.0 - theta) * (nn - 2.0) * sobolev_s /
                               (2.0 * std::pow(omega, 2.0 / nn)),
                           (nn + alpha) * std::pow(radius, -alpha) * pspec.v_inf / 4.0});

    out.gamma3 = alpha * std::max(0.0, std::min(1.0, (1.0 - pspec.theta_prime) * pspec.v_min));

    out.rho0 = std::min(1.0, std::pow(out.gamma1 / (2.0 * (1.0 + hls_c1)),
                                      nn / (2.0 * alpha)));
    return out;
}

}  // namespace choquard

#include "choquard/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace choquard {

namespace {

constexpr double kGoldenRatio = 0.61803398874989484820458683436564;

double l2_norm(const Field& u) {
    double s = 0.0;
    for (double v : u.values) s += v * v;
    return std::sqrt(s * u.grid.cell_volume());
}

/// Golden-section maximization of zeta on [a, b] to 1e-10 relative width.
double golden_max(const FiberContext& ctx, double a, double b) {
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double f1 = ctx.zeta(x1), f2 = ctx.zeta(x2);
    while (b - a > 1e-10 * (std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGoldenRatio * (b - a);
            f2 = ctx.zeta(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGoldenRatio * (b - a);
            f1 = ctx.zeta(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

FiberMax fiber_maximize(const FiberContext& ctx, double lo, double hi, int samples) {
    if (samples < 8) throw std::invalid_argument("fiber_maximize: need at least 8 samples");
    if (!(ctx.lambda() * ctx.nonlocal() > 0.0))
        throw std::domain_error("fibering undefined: d <= 0 (u outside Lambda)");
    std::vector<double> ts(static_cast<size_t>(samples)), zs(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        ts[static_cast<size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
        zs[static_cast<size_t>(i)] = ctx.zeta(ts[static_cast<size_t>(i)]);
    }
    int best = 0;
    for (int i = 1; i < samples; ++i)
        if (zs[static_cast<size_t>(i)] > zs[static_cast<size_t>(best)]) best = i;
    if (best == 0 || best == samples - 1)
        throw std::runtime_error(
            "fiber_maximize: no interior bracket on the sampled range (pathological scaling)");

    // uniqueness diagnostic: zeta' should change sign exactly once
    int sign_changes = 0;
    int prev_sign = 0;
    for (int i = 0; i < samples; ++i) {
        const double zp = ctx.zeta_prime(ts[static_cast<size_t>(i)]);
        const int s = (zp > 0.0) ? 1 : (zp < 0.0 ? -1 : 0);
        if (s != 0) {
            if (prev_sign != 0 && s != prev_sign) ++sign_changes;
            prev_sign = s;
        }
    }

    FiberMax out;
    out.t_star = golden_max(ctx, ts[static_cast<size_t>(best - 1)],
                            ts[static_cast<size_t>(best + 1)]);
    out.zeta_star = ctx.zeta(out.t_star);
    out.unique = (sign_changes == 1);
    return out;
}

ProjectionResult project_to_manifold(const RieszPlan& plan, const PotentialSpec& pspec,
                                     const NonlinSpec& nspec, const Field& u, double lambda,
                                     double eps) {
    EnergyParts parts = energy_parts(plan, pspec, nspec, u, lambda, eps);
    if (!lambda_membership(parts.breakdown.nonlocal, default_lambda_threshold(parts.breakdown)))
        throw std::domain_error("fibering undefined: d <= 0 (u outside Lambda)");
    FiberContext ctx(pspec, u, parts.breakdown.grad_sq, parts.breakdown.nonlocal, lambda, eps);
    FiberMax fm = fiber_maximize(ctx);

    ProjectionResult out;
    out.t_star = fm.t_star;
    out.unique = fm.unique;
    out.field = (std::fabs(fm.t_star - 1.0) < 1e-12) ? u : dilate(u, fm.t_star);
    EnergyBreakdown after = energy_breakdown(plan, pspec, nspec, out.field, lambda, eps);
    out.pohozaev_residual = after.pohozaev_residual();
    const double scale =
        std::fabs(after.grad_sq) + std::fabs(after.pot_pohozaev) + std::fabs(after.nonlocal);
    out.interpolation_floor =
        scale > 0.0 ? std::fabs(fm.zeta_star - after.energy()) / scale : 0.0;
    return out;
}

namespace {

/// Per-candidate quadratures with the nonlinearity split into its power
/// components, so amplitude scaling c.w is exact scalar algebra:
///   a(c w) = c^2 a,  b(c w) = c^2 b,
///   D(c w) = sum_{ab} coeff_a coeff_b c^{p_a + p_b} d_ab.
struct CandidateParts {
    double grad_sq = 0.0;
    double pot = 0.0;
    double pot_pohozaev = 0.0;
    double l2_sq = 0.0;
    std::vector<PowerComponent> comps;
    std::vector<Field> comp_big_f;  // F_a(w) = |w|^{p_a}/p_a (no coeff)
    std::vector<Field> comp_f;      // f_a(w) = sign(w)|w|^{p_a - 1}
    std::vector<Field> comp_conv;   // I_alpha * F_a(w)
    std::vector<std::vector<double>> d_ab;

    double nonlocal_at(double c) const {
        double acc = 0.0;
        for (size_t a = 0; a < comps.size(); ++a)
            for (size_t b = 0; b < comps.size(); ++b)
                acc += comps[a].coeff * comps[b].coeff *
                       std::pow(c, comps[a].exponent + comps[b].exponent) * d_ab[a][b];
        return acc;
    }
    double nonlocal() const { return nonlocal_at(1.0); }
    double energy_at(double c, double lambda) const {
        return 0.5 * c * c * (grad_sq + pot) - 0.5 * lambda * nonlocal_at(c);
    }
};

CandidateParts compute_candidate(const RieszPlan& plan, const SolveConfig& cfg,
                                 const Field& w) {
    const GridSpec& g = w.grid;
    const std::int64_t total = g.total();
    const double cell = g.cell_volume();
    const double scale = (cfg.eps > 0.0) ? cfg.eps : 1.0;

    CandidateParts out;
    out.comps = power_components(cfg.nonlin);
    const size_t nc = out.comps.size();
    out.comp_big_f.assign(nc, Field(g));
    out.comp_f.assign(nc, Field(g));

    out.grad_sq = gradient_sq_norm(w);
    if (!std::isfinite(out.grad_sq)) throw std::runtime_error("candidate: grad_sq overflow");

    double pot = 0.0, poh = 0.0, l2 = 0.0;
    const bool constant = cfg.potential.is_constant();
    std::array<int, kMaxDim> idx{};
    for (std::int64_t i = 0; i < total; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double wi = w.values[k];
        const double awi = std::fabs(wi);
        const double sign = (wi > 0.0) ? 1.0 : (wi < 0.0 ? -1.0 : 0.0);
        l2 += wi * wi;
        if (!constant) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.node(idx[d]) * scale;
                r2 += x * x;
            }
            const PotentialValue pv = eval_potential_radial(cfg.potential, std::sqrt(r2));
            pot += pv.v * wi * wi;
            poh += (g.dim * pv.v + pv.radial_derivative) * wi * wi;
            for (int d = g.dim - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        for (size_t a = 0; a < nc; ++a) {
            const double p = out.comps[a].exponent;
            out.comp_big_f[a].values[k] = (awi == 0.0) ? 0.0 : std::pow(awi, p) / p;
            out.comp_f[a].values[k] = (awi == 0.0) ? 0.0 : sign * std::pow(awi, p - 1.0);
        }
    }
    l2 *= cell;
    if (constant) {
        pot = cfg.potential.v_inf * l2;
        poh = g.dim * cfg.potential.v_inf * l2;
    } else {
        pot *= cell;
        poh *= cell;
    }
    out.pot = pot;
    out.pot_pohozaev = poh;
    out.l2_sq = l2;
    if (!std::isfinite(pot) || !std::isfinite(poh))
        throw std::runtime_error("candidate: potential term overflow");

    out.comp_conv.reserve(nc);
    for (size_t a = 0; a < nc; ++a) out.comp_conv.push_back(riesz_convolve(plan, out.comp_big_f[a]));
    out.d_ab.assign(nc, std::vector<double>(nc, 0.0));
    for (size_t a = 0; a < nc; ++a)
        for (size_t b = 0; b < nc; ++b) {
            double acc = 0.0;
            for (std::int64_t i = 0; i < total; ++i)
                acc += out.comp_conv[a].values[static_cast<size_t>(i)] *
                       out.comp_big_f[b].values[static_cast<size_t>(i)];
            out.d_ab[a][b] = acc * cell;
            if (!std::isfinite(out.d_ab[a][b]))
                throw std::runtime_error("candidate: nonlocal term overflow");
        }
    return out;
}

/// Root of P(c w) = 0 in c: c^2 A = (N+alpha) lambda D(c)/2 with
/// A = (N-2)a/2 + b_poh/2. The right side grows strictly faster (every
/// exponent p_a + p_b > 2), so the positive root is unique.
double amplitude_root(const CandidateParts& cand, const SolveConfig& cfg) {
    const double nn = static_cast<double>(cfg.grid.dim);
    const double quad = 0.5 * (nn - 2.0) * cand.grad_sq + 0.5 * cand.pot_pohozaev;
    if (!(quad > 0.0)) throw std::runtime_error("amplitude projection: quadratic part <= 0");
    auto excess = [&](double c) {
        return 0.5 * (nn + cfg.alpha) * cfg.lambda * cand.nonlocal_at(c) / (c * c) - quad;
    };
    double lo = 1.0, hi = 1.0;
    if (excess(1.0) < 0.0) {
        while (excess(hi) < 0.0) {
            hi *= 2.0;
            if (hi > 1e8) throw std::runtime_error("amplitude projection: no root below 1e8");
        }
        lo = hi * 0.5;
    } else {
        while (excess(lo) > 0.0) {
            lo *= 0.5;
            if (lo < 1e-8) throw std::runtime_error("amplitude projection: no root above 1e-8");
        }
        hi = lo * 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// The iterate after projection, with conv and f(u) assembled exactly from
/// the candidate's components.
struct ManifoldState {
    Field u;
    EnergyBreakdown bd;
    double l2_sq = 0.0;
    Field conv;      // I_alpha * F(u)
    Field nonlin_f;  // f(u)
};

ManifoldState project_candidate(const SolveConfig& cfg, const Field& w, CandidateParts&& cand,
                                double c) {
    ManifoldState st;
    st.u = Field(w.grid);
    st.conv = Field(w.grid);
    st.nonlin_f = Field(w.grid);
    const size_t nc = cand.comps.size();
    std::vector<double> cv(nc), cf(nc);
    for (size_t a = 0; a < nc; ++a) {
        cv[a] = cand.comps[a].coeff * std::pow(c, cand.comps[a].exponent);
        cf[a] = cand.comps[a].coeff * std::pow(c, cand.comps[a].exponent - 1.0);
    }
    for (size_t i = 0; i < st.u.values.size(); ++i) {
        st.u.values[i] = c * w.values[i];
        double conv = 0.0, f = 0.0;
        for (size_t a = 0; a < nc; ++a) {
            conv += cv[a] * cand.comp_conv[a].values[i];
            f += cf[a] * cand.comp_f[a].values[i];
        }
        st.conv.values[i] = conv;
        st.nonlin_f.values[i] = f;
    }
    st.bd.grad_sq = c * c * cand.grad_sq;
    st.bd.pot = c * c * cand.pot;
    st.bd.pot_pohozaev = c * c * cand.pot_pohozaev;
    st.bd.nonlocal = cand.nonlocal_at(c);
    st.bd.lambda = cfg.lambda;
    st.bd.eps = cfg.eps;
    st.bd.dim = cfg.grid.dim;
    st.bd.alpha = cfg.alpha;
    st.l2_sq = c * c * cand.l2_sq;
    return st;
}

/// Energy and Pohozaev L2 gradients from the state's shared ingredients.
struct GradientPair {
    Field energy;
    Field pohozaev;
};

GradientPair assemble_gradients(const SolveConfig& cfg, const ManifoldState& st,
                                const Field& lap) {
    const GridSpec& g = st.u.grid;
    const double nn = static_cast<double>(g.dim);
    const double na = nn + cfg.alpha;
    const double lam = cfg.lambda;
    GradientPair out{Field(g), Field(g)};
    if (cfg.potential.is_constant()) {
        const double v = cfg.potential.v_inf;
        for (size_t i = 0; i < st.u.values.size(); ++i) {
            const double nl = st.conv.values[i] * st.nonlin_f.values[i];
            out.energy.values[i] = -lap.values[i] + v * st.u.values[i] - lam * nl;
            out.pohozaev.values[i] =
                -(nn - 2.0) * lap.values[i] + nn * v * st.u.values[i] - na * lam * nl;
        }
    } else {
        const double scale = (cfg.eps > 0.0) ? cfg.eps : 1.0;
        std::array<int, kMaxDim> idx{};
        const std::int64_t total = g.total();
        for (std::int64_t i = 0; i < total; ++i) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.node(idx[d]) * scale;
                r2 += x * x;
            }
            const size_t k = static_cast<size_t>(i);
            const PotentialValue pv = eval_potential_radial(cfg.potential, std::sqrt(r2));
            const double nl = st.conv.values[k] * st.nonlin_f.values[k];
            out.energy.values[k] = -lap.values[k] + pv.v * st.u.values[k] - lam * nl;
            out.pohozaev.values[k] = -(nn - 2.0) * lap.values[k] +
                                     (nn * pv.v + pv.radial_derivative) * st.u.values[k] -
                                     na * lam * nl;
            for (int d = g.dim - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
    }
    return out;
}

Field initial_field(const SolveConfig& cfg, const RieszPlan& plan, std::string* note) {
    if (cfg.init.field) {
        if (cfg.init.field->grid != cfg.grid)
            throw std::invalid_argument("solver init: warm-start field grid mismatch");
        return *cfg.init.field;
    }
    const double width = cfg.init.width > 0.0 ? cfg.init.width : cfg.grid.length / 8.0;
    if (width <= 2.0 * cfg.grid.h)
        throw std::invalid_argument("solver init: ansatz width must exceed 2h");
    // amplitude scan A, 2A, 4A, 8A until the ansatz enters Lambda
    double amp = cfg.init.amplitude;
    for (int attempt = 0; attempt < 4; ++attempt, amp *= 2.0) {
        Field u = gaussian_field(cfg.grid, amp, width, cfg.init.center);
        EnergyBreakdown bd =
            energy_breakdown(plan, cfg.potential, cfg.nonlin, u, cfg.lambda, cfg.eps);
        if (lambda_membership(bd.nonlocal, default_lambda_threshold(bd))) {
            if (note && attempt > 0) {
                std::ostringstream os;
                os << "amplitude scan entered Lambda at A=" << amp;
                *note = os.str();
            }
            return u;
        }
    }
    throw std::runtime_error("solver init: amplitude scan failed to enter Lambda");
}

SolveResult solve_single(const SolveConfig& cfg, const RieszPlan& plan, double width_override) {
    SolveConfig local = cfg;
    if (width_override > 0.0) local.init.width = width_override;

    SolveResult res;
    std::string note;
    Field start = initial_field(local, plan, &note);

    const int bins = cfg.potential.is_constant() ? 0 : cfg.radial_bins;
    // Sobolev preconditioner shift; any positive constant works, V_inf keeps
    // the scale of -lap + V
    const double precond_shift = std::max(cfg.potential.v_inf, 1e-6);
    double step_hint = cfg.step0;

    // initial projection onto the manifold (amplitude route; exact algebra)
    ManifoldState state;
    {
        CandidateParts cand = compute_candidate(plan, cfg, start);
        if (!lambda_membership(cand.nonlocal(), 1e-12 * (cand.grad_sq + cand.pot + 1.0)))
            throw std::runtime_error("solver init: ansatz outside Lambda after projection");
        const double c = amplitude_root(cand, cfg);
        state = project_candidate(cfg, start, std::move(cand), c);
        res.t_history.push_back(1.0);
    }
    double energy = state.bd.energy();

    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        GradAndLaplacian spectral = grad_sq_and_laplacian(state.u);
        GradientPair grads = assemble_gradients(cfg, state, spectral.laplacian);
        const double grad_norm = l2_norm(grads.energy);
        const double u_norm = l2_norm(state.u);
        const double poh_res = state.bd.pohozaev_residual();
        const double full_grad_res = u_norm > 0.0 ? grad_norm / u_norm : grad_norm;

        // Filtered subspace: the constraint gradient plus, for constant
        // potentials, the translation zero-modes (exact discrete symmetries
        // whose apparent gradient is lattice texture). Orthonormal basis by
        // Gram-Schmidt.
        std::vector<Field> filter;
        filter.push_back(grads.pohozaev);
        if (cfg.potential.is_constant())
            for (int d = 0; d < cfg.grid.dim; ++d)
                filter.push_back(spectral_derivative(state.u, d));
        for (size_t a = 0; a < filter.size(); ++a) {
            for (size_t b = 0; b < a; ++b) {
                double p = 0.0;
                for (size_t i = 0; i < filter[a].values.size(); ++i)
                    p += filter[a].values[i] * filter[b].values[i];
                for (size_t i = 0; i < filter[a].values.size(); ++i)
                    filter[a].values[i] -= p * filter[b].values[i];
            }
            double nrm = 0.0;
            for (double v : filter[a].values) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm > 1e-300)
                for (double& v : filter[a].values) v /= nrm;
        }
        auto project_out = [&filter](Field& f) {
            for (const Field& b : filter) {
                double p = 0.0;
                for (size_t i = 0; i < f.values.size(); ++i) p += f.values[i] * b.values[i];
                for (size_t i = 0; i < f.values.size(); ++i) f.values[i] -= p * b.values[i];
            }
        };

        // tangential residual: gradient with the filtered components removed
        double tan_res;
        {
            Field tangential = grads.energy;
            project_out(tangential);
            tan_res = l2_norm(tangential) / std::max(u_norm, 1e-300);
        }

        // fibering diagnostic at the iterate (t* ~ 1 on the manifold);
        // tabulated potentials may not cover the scan range, so it is allowed
        // to fail without affecting the descent
        FiberMax here;
        here.zeta_star = energy;
        try {
            FiberContext ctx(cfg.potential, state.u, state.bd.grad_sq, state.bd.nonlocal,
                             cfg.lambda, cfg.eps, bins);
            here = fiber_maximize(ctx, cfg.fiber_lo, cfg.fiber_hi, cfg.fiber_samples);
            if (!here.unique) res.fiber_unique_warning = true;
        } catch (const std::out_of_range&) {
        }

        IterRecord rec;
        rec.iter = iter;
        rec.energy = energy;
        rec.fiber_energy = here.zeta_star;
        rec.pohozaev_residual = poh_res;
        rec.gradient_residual = tan_res;
        rec.full_gradient_residual = full_grad_res;
        rec.t_star = here.t_star;

        if (iter > 0 && res.trace.back().energy - energy <
                            cfg.tol_energy * std::max(1e-300, std::fabs(energy)) &&
            poh_res < cfg.tol_pohozaev && tan_res < cfg.tol_gradient) {
            res.converged = true;
            res.stop_reason = "tolerances met";
            res.trace.push_back(rec);
            break;
        }

        // Filtered gradient, Sobolev-preconditioned, re-filtered: projecting
        // before preconditioning keeps the large constraint-normal component
        // from leaking back into the search direction; the final projection
        // keeps trial points on the manifold to first order (the amplitude
        // projection absorbs the rest).
        Field dir;
        {
            Field tangential = grads.energy;
            project_out(tangential);
            dir = inverse_helmholtz(tangential, precond_shift);
            project_out(dir);
        }
        const double dir_norm = l2_norm(dir);
        double step = step_hint * (dir_norm > 0.0 ? u_norm / dir_norm : 1.0);
        bool accepted = false;
        for (int halv = 0; halv <= cfg.max_halvings && !accepted; ++halv, step *= 0.5) {
            Field w(state.u.grid);
            for (size_t i = 0; i < w.values.size(); ++i)
                w.values[i] = state.u.values[i] - step * dir.values[i];
            CandidateParts cand;
            try {
                cand = compute_candidate(plan, cfg, w);
            } catch (const std::exception&) {
                continue;  // overflowed trial, halve
            }
            if (!lambda_membership(cand.nonlocal(), 1e-12 * (cand.grad_sq + cand.pot + 1.0)))
                continue;
            double c;
            try {
                c = amplitude_root(cand, cfg);
            } catch (const std::exception&) {
                continue;
            }
            const double trial_energy = cand.energy_at(c, cfg.lambda);
            if (trial_energy < energy) {
                state = project_candidate(cfg, w, std::move(cand), c);
                energy = trial_energy;
                res.t_history.push_back(here.t_star);
                rec.step = step;
                accepted = true;
                // open the next line search above the accepted step
                step_hint = std::min(4.0 * step / (dir_norm > 0.0 ? u_norm / dir_norm : 1.0),
                                     16.0 * cfg.step0);
            }
        }
        res.trace.push_back(rec);
        if (!accepted) {
            res.converged = poh_res < cfg.tol_pohozaev && tan_res < cfg.tol_gradient;
            res.stop_reason = res.converged ? "line search exhausted at stationarity"
                                            : "line search stalled";
            ++iter;
            break;
        }
    }
    if (res.stop_reason.empty()) {
        res.stop_reason = res.converged ? "tolerances met" : "iteration cap";
    }

    // final certificates from a fresh, independent evaluation of the field
    EnergyParts final_parts =
        energy_parts(plan, cfg.potential, cfg.nonlin, state.u, cfg.lambda, cfg.eps);
    res.field = std::move(state.u);
    res.breakdown = final_parts.breakdown;
    res.energy_min = res.breakdown.energy();
    res.l2_sq = final_parts.l2_sq;
    res.pohozaev_residual = res.breakdown.pohozaev_residual();
    {
        ManifoldState fin;
        fin.u = res.field;
        fin.conv = final_parts.convolution;
        fin.nonlin_f = final_parts.nonlin_f;
        Field lap = laplacian(res.field);
        GradientPair grads = assemble_gradients(cfg, fin, lap);
        const double un = l2_norm(res.field);
        res.full_gradient_residual =
            un > 0.0 ? l2_norm(grads.energy) / un : l2_norm(grads.energy);

        std::vector<Field> filter;
        filter.push_back(grads.pohozaev);
        if (cfg.potential.is_constant())
            for (int d = 0; d < cfg.grid.dim; ++d)
                filter.push_back(spectral_derivative(res.field, d));
        for (size_t a = 0; a < filter.size(); ++a) {
            for (size_t b = 0; b < a; ++b) {
                double pr = 0.0;
                for (size_t i = 0; i < filter[a].values.size(); ++i)
                    pr += filter[a].values[i] * filter[b].values[i];
                for (size_t i = 0; i < filter[a].values.size(); ++i)
                    filter[a].values[i] -= pr * filter[b].values[i];
            }
            double nrm = 0.0;
            for (double v : filter[a].values) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm > 1e-300)
                for (double& v : filter[a].values) v /= nrm;
        }
        Field tangential = grads.energy;
        for (const Field& b : filter) {
            double pr = 0.0;
            for (size_t i = 0; i < tangential.values.size(); ++i)
                pr += tangential.values[i] * b.values[i];
            for (size_t i = 0; i < tangential.values.size(); ++i)
                tangential.values[i] -= pr * b.values[i];
        }
        res.gradient_residual = l2_norm(tangential) / std::max(un, 1e-300);
    }
    res.iterations = iter;
    res.in_lambda = lambda_membership(res.breakdown.nonlocal,
                                      default_lambda_threshold(res.breakdown));
    res.tail_fraction = tail_mass_fraction(res.field);
    res.init_note = note;
    return res;
}

}  // namespace

SolveResult solve_ground_state(const SolveConfig& cfg, RieszPlanPtr plan) {
    if (!(cfg.tol_energy > 0.0 && cfg.tol_pohozaev > 0.0 && cfg.tol_gradient > 0.0))
        throw std::invalid_argument("solver: tolerances must be positive");
    if (cfg.max_iterations < 0) throw std::invalid_argument("solver: negative iteration cap");
    if (!plan) {
        plan = plan_riesz(cfg.grid, cfg.alpha);
    } else if (plan->grid() != cfg.grid || plan->alpha() != cfg.alpha) {
        throw std::invalid_argument("solver: supplied plan does not match the config");
    }

    if (cfg.widths.empty()) return solve_single(cfg, *plan, 0.0);

    // multi-start: lowest m wins, ties broken by start index
    SolveResult best;
    bool have = false;
    for (double w : cfg.widths) {
        SolveResult r = solve_single(cfg, *plan, w);
        if (!have || r.energy_min < best.energy_min) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

SolveResult solve_autonomous(const SolveConfig& cfg, RieszPlanPtr plan) {
    if (!cfg.potential.is_constant())
        throw std::invalid_argument("solve_autonomous: potential must be the constant variant");
    return solve_ground_state(cfg, std::move(plan));
}

PathBound mountain_pass_upper_bound(const SolveResult& u1inf, double lambda,
                                    const PotentialSpec& pspec,
                                    std::optional<double> t_scale) {
    if (!u1inf.converged)
        throw std::invalid_argument("mountain_pass_upper_bound: u1inf solve did not converge");
    if (!(lambda >= 0.5 && lambda <= 1.0))
        throw std::invalid_argument("mountain_pass_upper_bound: lambda must lie in [1/2, 1]");

    FiberContext ctx(pspec, u1inf.field, u1inf.breakdown.grad_sq, u1inf.breakdown.nonlocal,
                     lambda, 0.0);
    PathBound out;
    if (t_scale) {
        out.t_scale = *t_scale;
    } else {
        // T with I*_{1/2}((u1inf)_t) < 0 for t >= T, via the V_max functional
        double t = 1.0;
        while (ctx.zeta_with_constant_potential(t, pspec.v_max, 0.5) >= 0.0) {
            t *= 1.25;
            if (t > 1e3)
                throw std::runtime_error(
                    "mountain_pass_upper_bound: V_max energy never went negative (T scan)");
        }
        out.t_scale = t;
    }

    const int grid_points = 256;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<double> taus(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        taus[static_cast<size_t>(i)] = (i + 1) / static_cast<double>(grid_points);
        const double v = ctx.zeta(taus[static_cast<size_t>(i)] * out.t_scale);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = (best > 0 ? taus[static_cast<size_t>(best - 1)] : taus[0] * 0.25) * out.t_scale;
    double hi = (best < grid_points - 1 ? taus[static_cast<size_t>(best + 1)] : 1.0) * out.t_scale;
    out.t_at_max = golden_max(ctx, lo, hi);
    out.bound = ctx.zeta(out.t_at_max);
    return out;
}

}  // namespace choquard

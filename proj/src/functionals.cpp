#include "choquard/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace choquard {

double g_elem(double t, int dim, double alpha) {
    if (t < 0.0) throw std::invalid_argument("g_elem: t must be nonnegative");
    const double nn = static_cast<double>(dim);
    return 2.0 + alpha - (nn + alpha) * std::pow(t, nn - 2.0) +
           (nn - 2.0) * std::pow(t, nn + alpha);
}

double h_elem(double t, int dim, double alpha) {
    if (t < 0.0) throw std::invalid_argument("h_elem: t must be nonnegative");
    const double nn = static_cast<double>(dim);
    return alpha - (nn + alpha) * std::pow(t, nn) + nn * std::pow(t, nn + alpha);
}

double EnergyBreakdown::pohozaev_residual() const {
    const double scale = std::fabs(grad_sq) + std::fabs(pot_pohozaev) + std::fabs(nonlocal);
    return scale > 0.0 ? std::fabs(pohozaev()) / scale : 0.0;
}

namespace {

void check_finite(double v, const char* term) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "energy_breakdown: term '" << term << "' is not finite";
        throw std::runtime_error(os.str());
    }
}

void check_lambda_eps(double lambda, double eps) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("energy: lambda must lie in [0, 1]");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("energy: eps must be nonnegative and finite");
}

}  // namespace

EnergyParts energy_parts(const RieszPlan& plan, const PotentialSpec& pspec,
                         const NonlinSpec& nspec, const Field& u, double lambda, double eps) {
    if (u.grid != plan.grid())
        throw std::invalid_argument("energy: field grid does not match plan");
    check_lambda_eps(lambda, eps);

    const GridSpec& g = u.grid;
    const std::int64_t total = g.total();
    const double cell = g.cell_volume();
    const double scale = (eps > 0.0) ? eps : 1.0;

    EnergyParts out;
    out.breakdown.lambda = lambda;
    out.breakdown.eps = eps;
    out.breakdown.dim = g.dim;
    out.breakdown.alpha = plan.alpha();

    out.breakdown.grad_sq = gradient_sq_norm(u);
    check_finite(out.breakdown.grad_sq, "grad_sq");

    Field big_f(g);
    out.nonlin_f = Field(g);
    double pot = 0.0, poh = 0.0, l2 = 0.0;
    if (pspec.is_constant()) {
        for (std::int64_t i = 0; i < total; ++i) {
            const double ui = u.values[static_cast<size_t>(i)];
            l2 += ui * ui;
            const NonlinValue nv = eval_nonlinearity(nspec, ui);
            big_f.values[static_cast<size_t>(i)] = nv.big_f;
            out.nonlin_f.values[static_cast<size_t>(i)] = nv.f;
        }
        l2 *= cell;
        pot = pspec.v_inf * l2;
        poh = g.dim * pspec.v_inf * l2;
    } else {
        std::array<int, kMaxDim> idx{};
        for (std::int64_t i = 0; i < total; ++i) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.node(idx[d]) * scale;
                r2 += x * x;
            }
            const PotentialValue pv = eval_potential_radial(pspec, std::sqrt(r2));
            const double ui = u.values[static_cast<size_t>(i)];
            const double ui2 = ui * ui;
            l2 += ui2;
            pot += pv.v * ui2;
            poh += (g.dim * pv.v + pv.radial_derivative) * ui2;
            const NonlinValue nv = eval_nonlinearity(nspec, ui);
            big_f.values[static_cast<size_t>(i)] = nv.big_f;
            out.nonlin_f.values[static_cast<size_t>(i)] = nv.f;
            for (int d = g.dim - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        l2 *= cell;
        pot *= cell;
        poh *= cell;
    }
    out.breakdown.pot = pot;
    out.breakdown.pot_pohozaev = poh;
    out.l2_sq = l2;
    check_finite(pot, "pot");
    check_finite(poh, "pot_pohozaev");

    out.convolution = riesz_convolve(plan, big_f);
    double d = 0.0;
    for (std::int64_t i = 0; i < total; ++i)
        d += out.convolution.values[static_cast<size_t>(i)] * big_f.values[static_cast<size_t>(i)];
    out.breakdown.nonlocal = d * cell;
    check_finite(out.breakdown.nonlocal, "nonlocal");
    // the discrete Riesz form is positive semi-definite up to truncation noise
    const double psd_scale = out.breakdown.grad_sq + std::fabs(pot) + std::fabs(d) + 1.0;
    if (out.breakdown.nonlocal < -1e-10 * psd_scale)
        throw std::runtime_error("energy_breakdown: nonlocal term negative beyond tolerance");
    return out;
}

EnergyBreakdown energy_breakdown(const RieszPlan& plan, const PotentialSpec& pspec,
                                 const NonlinSpec& nspec, const Field& u, double lambda,
                                 double eps) {
    return energy_parts(plan, pspec, nspec, u, lambda, eps).breakdown;
}

Field l2_gradient_from_parts(const PotentialSpec& pspec, const Field& u,
                             const EnergyParts& parts) {
    const GridSpec& g = u.grid;
    Field grad = laplacian(u);
    const std::int64_t total = g.total();
    const double lambda = parts.breakdown.lambda;
    const double scale = (parts.breakdown.eps > 0.0) ? parts.breakdown.eps : 1.0;
    if (pspec.is_constant()) {
        for (std::int64_t i = 0; i < total; ++i) {
            const size_t s = static_cast<size_t>(i);
            grad.values[s] = -grad.values[s] + pspec.v_inf * u.values[s] -
                             lambda * parts.convolution.values[s] * parts.nonlin_f.values[s];
        }
    } else {
        std::array<int, kMaxDim> idx{};
        for (std::int64_t i = 0; i < total; ++i) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.node(idx[d]) * scale;
                r2 += x * x;
            }
            const size_t s = static_cast<size_t>(i);
            grad.values[s] = -grad.values[s] +
                             eval_potential_radial(pspec, std::sqrt(r2)).v * u.values[s] -
                             lambda * parts.convolution.values[s] * parts.nonlin_f.values[s];
            for (int d = g.dim - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
    }
    return grad;
}

Field l2_gradient(const RieszPlan& plan, const PotentialSpec& pspec, const NonlinSpec& nspec,
                  const Field& u, double lambda, double eps) {
    EnergyParts parts = energy_parts(plan, pspec, nspec, u, lambda, eps);
    return l2_gradient_from_parts(pspec, u, parts);
}

bool lambda_membership(double nonlocal, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("lambda_membership: negative threshold");
    return nonlocal > threshold;
}

double default_lambda_threshold(const EnergyBreakdown& bd) {
    const double scale = std::fabs(bd.grad_sq) + std::fabs(bd.pot) + std::fabs(bd.nonlocal);
    return 1e-12 * std::max(scale, 1e-30);
}

FiberContext::FiberContext(const PotentialSpec& pspec, const Field& u, double grad_sq,
                           double nonlocal, double lambda, double eps, int radial_bins)
    : dim_(u.grid.dim),
      alpha_(pspec.alpha),
      lambda_(lambda),
      eps_(eps > 0.0 ? eps : 1.0),
      grad_sq_(grad_sq),
      nonlocal_(nonlocal),
      constant_(pspec.is_constant()),
      v_inf_(pspec.v_inf),
      pspec_(pspec) {
    const GridSpec& g = u.grid;
    cell_ = g.cell_volume();
    double l2 = 0.0;
    if (constant_) {
        for (double v : u.values) l2 += v * v;
        l2 *= cell_;
    } else {
        const std::int64_t total = g.total();
        const double r_max =
            0.5 * g.length * std::sqrt(static_cast<double>(g.dim)) + g.h;
        const bool binned = radial_bins > 1;
        if (binned) {
            radius_.resize(static_cast<size_t>(radial_bins));
            mass_.assign(static_cast<size_t>(radial_bins), 0.0);
            const double dr = r_max / (radial_bins - 1);
            for (int k = 0; k < radial_bins; ++k) radius_[static_cast<size_t>(k)] = k * dr;
        } else {
            radius_.resize(static_cast<size_t>(total));
            mass_.resize(static_cast<size_t>(total));
        }
        // masses stay unweighted (u_i^2); sums pick up h^N once at the end,
        // matching energy_parts' accumulation order so zeta(1) reproduces
        // the breakdown energy bit-exactly
        std::array<int, kMaxDim> idx{};
        const double inv_dr = binned ? (radial_bins - 1) / r_max : 0.0;
        for (std::int64_t i = 0; i < total; ++i) {
            double r2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double x = g.node(idx[d]);
                r2 += x * x;
            }
            const double ui = u.values[static_cast<size_t>(i)];
            const double m = ui * ui;
            const double r = std::sqrt(r2);
            if (binned) {
                const double f = r * inv_dr;
                const int lo = std::min(static_cast<int>(f), radial_bins - 2);
                const double w = f - lo;
                mass_[static_cast<size_t>(lo)] += (1.0 - w) * m;
                mass_[static_cast<size_t>(lo) + 1] += w * m;
            } else {
                radius_[static_cast<size_t>(i)] = r;
                mass_[static_cast<size_t>(i)] = m;
            }
            l2 += ui * ui;
            for (int d = g.dim - 1; d >= 0; --d) {
                if (++idx[d] < g.n) break;
                idx[d] = 0;
            }
        }
        l2 *= cell_;
    }
    l2_sq_ = l2;
}

FiberContext::FiberContext(int dim, double alpha, double v_inf, double grad_sq, double l2_sq,
                           double nonlocal, double lambda)
    : dim_(dim),
      alpha_(alpha),
      lambda_(lambda),
      eps_(1.0),
      grad_sq_(grad_sq),
      l2_sq_(l2_sq),
      nonlocal_(nonlocal),
      constant_(true),
      v_inf_(v_inf) {}

double FiberContext::potential_term(double t) const {
    if (constant_) return v_inf_ * l2_sq_;
    const double s = eps_ * t;
    double acc = 0.0;
    for (size_t i = 0; i < radius_.size(); ++i)
        acc += eval_potential_radial(pspec_, s * radius_[i]).v * mass_[i];
    return acc * cell_;
}

double FiberContext::pohozaev_potential_term(double t) const {
    if (constant_) return dim_ * v_inf_ * l2_sq_;
    const double s = eps_ * t;
    double acc = 0.0;
    for (size_t i = 0; i < radius_.size(); ++i) {
        const PotentialValue pv = eval_potential_radial(pspec_, s * radius_[i]);
        acc += (dim_ * pv.v + pv.radial_derivative) * mass_[i];
    }
    return acc * cell_;
}

double FiberContext::zeta(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("fiber: t must be positive");
    const double nn = static_cast<double>(dim_);
    return 0.5 * std::pow(t, nn - 2.0) * grad_sq_ + 0.5 * std::pow(t, nn) * potential_term(t) -
           0.5 * std::pow(t, nn + alpha_) * lambda_ * nonlocal_;
}

double FiberContext::pohozaev_at(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("fiber: t must be positive");
    const double nn = static_cast<double>(dim_);
    return 0.5 * (nn - 2.0) * std::pow(t, nn - 2.0) * grad_sq_ +
           0.5 * std::pow(t, nn) * pohozaev_potential_term(t) -
           0.5 * (nn + alpha_) * std::pow(t, nn + alpha_) * lambda_ * nonlocal_;
}

double FiberContext::zeta_prime(double t) const { return pohozaev_at(t) / t; }

double FiberContext::zeta_with_constant_potential(double t, double v, double lambda) const {
    const double nn = static_cast<double>(dim_);
    return 0.5 * std::pow(t, nn - 2.0) * grad_sq_ + 0.5 * std::pow(t, nn) * v * l2_sq_ -
           0.5 * std::pow(t, nn + alpha_) * lambda * nonlocal_;
}

FiberValue fiber_eval(const RieszPlan& plan, const PotentialSpec& pspec,
                      const NonlinSpec& nspec, const Field& u, double lambda, double eps,
                      double t) {
    EnergyParts parts = energy_parts(plan, pspec, nspec, u, lambda, eps);
    FiberContext ctx(pspec, u, parts.breakdown.grad_sq, parts.breakdown.nonlocal, lambda, eps);
    return {ctx.zeta(t), ctx.zeta_prime(t)};
}

double key_inequality_gap(const RieszPlan& plan, const PotentialSpec& pspec,
                          const NonlinSpec& nspec, const Field& u, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("key_inequality_gap: t must be positive");
    const EnergyParts parts = energy_parts(plan, pspec, nspec, u, 1.0, 0.0);
    const EnergyBreakdown& bd = parts.breakdown;
    FiberContext ctx(pspec, u, bd.grad_sq, bd.nonlocal, 1.0, 0.0);
    const double nn = static_cast<double>(u.grid.dim);
    const double na = nn + plan.alpha();
    return bd.energy() - ctx.zeta(t) - (1.0 - std::pow(t, na)) / na * bd.pohozaev() -
           (1.0 - pspec.theta) * g_elem(t, u.grid.dim, plan.alpha()) / (2.0 * na) * bd.grad_sq;
}

double autonomous_identity_residual(double grad_sq, double l2_sq, double nonlocal,
                                    double v_inf, double lambda, double t, int dim,
                                    double alpha) {
    const double nn = static_cast<double>(dim);
    const double na = nn + alpha;
    const double energy_u = 0.5 * (grad_sq + v_inf * l2_sq) - 0.5 * lambda * nonlocal;
    const double energy_ut = 0.5 * std::pow(t, nn - 2.0) * grad_sq +
                             0.5 * std::pow(t, nn) * v_inf * l2_sq -
                             0.5 * std::pow(t, na) * lambda * nonlocal;
    const double pohozaev_u =
        0.5 * (nn - 2.0) * grad_sq + 0.5 * nn * v_inf * l2_sq - 0.5 * na * lambda * nonlocal;
    return energy_u - energy_ut - (1.0 - std::pow(t, na)) / na * pohozaev_u -
           (g_elem(t, dim, alpha) * grad_sq + v_inf * h_elem(t, dim, alpha) * l2_sq) /
               (2.0 * na);
}

}  // namespace choquard

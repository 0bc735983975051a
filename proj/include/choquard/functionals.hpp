#pragma once

#include <vector>

#include "choquard/grid.hpp"
#include "choquard/models.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

/// g(t) = 2 + alpha - (N+alpha) t^{N-2} + (N-2) t^{N+alpha}.
/// Positive on [0,1) u (1,inf), zero at t = 1.
double g_elem(double t, int dim, double alpha);

/// h(t) = alpha - (N+alpha) t^N + N t^{N+alpha}. Same sign structure.
double h_elem(double t, int dim, double alpha);

/// The quadratic/nonlocal pieces of the energy for one (u, lambda, eps):
///   a      = ||grad u||_2^2
///   b_pot  = int V(eps x) u^2          (eps = 0 means V(x))
///   b_poh  = int [N V + grad V . x](eps x) u^2
///   d      = int (I_alpha * F(u)) F(u)
/// The derived scalars are recomputed on demand:
///   I = (a + b_pot)/2 - lambda d / 2
///   P = (N-2) a / 2 + b_poh / 2 - (N+alpha) lambda d / 2
struct EnergyBreakdown {
    double grad_sq = 0.0;       // a
    double pot = 0.0;           // b_pot
    double pot_pohozaev = 0.0;  // b_poh
    double nonlocal = 0.0;      // d
    double lambda = 1.0;
    double eps = 0.0;
    int dim = 3;
    double alpha = 2.0;

    double energy() const { return 0.5 * (grad_sq + pot) - 0.5 * lambda * nonlocal; }
    double pohozaev() const {
        return 0.5 * (dim - 2.0) * grad_sq + 0.5 * pot_pohozaev -
               0.5 * (dim + alpha) * lambda * nonlocal;
    }
    /// |P| normalized by a + |b_poh| + d.
    double pohozaev_residual() const;
};

struct EnergyParts {
    EnergyBreakdown breakdown;
    double l2_sq = 0.0;      // ||u||_2^2
    Field convolution;       // I_alpha * F(u), reusable for the gradient
    Field nonlin_f;          // f(u)
};

/// All base scalars plus the convolution field (kept for gradient reuse).
EnergyParts energy_parts(const RieszPlan& plan, const PotentialSpec& pspec,
                         const NonlinSpec& nspec, const Field& u, double lambda, double eps);

EnergyBreakdown energy_breakdown(const RieszPlan& plan, const PotentialSpec& pspec,
                                 const NonlinSpec& nspec, const Field& u, double lambda,
                                 double eps);

/// L^2 gradient of the energy: -lap u + V_eps u - lambda (I_alpha * F(u)) f(u).
Field l2_gradient(const RieszPlan& plan, const PotentialSpec& pspec, const NonlinSpec& nspec,
                  const Field& u, double lambda, double eps);

/// Gradient assembled from precomputed parts (saves the convolution).
Field l2_gradient_from_parts(const PotentialSpec& pspec, const Field& u,
                             const EnergyParts& parts);

/// u is in Lambda iff d exceeds the threshold (strictly positive nonlocal
/// term; floating-point d near zero is sign-indeterminate, hence the
/// threshold instead of 0).
bool lambda_membership(double nonlocal, double threshold);
double default_lambda_threshold(const EnergyBreakdown& bd);

/// Fibering map t -> I(u_t) evaluated by exact scaling algebra: the powers
/// of t multiply t-independent quadratures, and the potential term is a
/// fresh quadrature of the closed-form V at scaled points. No resampling.
class FiberContext {
public:
    /// Generic construction from a field (computes and caches u^2 masses).
    /// radial_bins > 0 deposits the u^2 mass onto that many linear radial
    /// bins (cloud-in-cell), trading ~1e-8 relative accuracy in the
    /// potential term for an O(n^N / bins) speedup of every zeta(t)
    /// evaluation; the identity checks always use the exact per-node sum
    /// (radial_bins = 0).
    FiberContext(const PotentialSpec& pspec, const Field& u, double grad_sq, double nonlocal,
                 double lambda, double eps, int radial_bins = 0);
    /// Constant-potential construction from scalars only.
    FiberContext(int dim, double alpha, double v_inf, double grad_sq, double l2_sq,
                 double nonlocal, double lambda);

    double zeta(double t) const;        // I(u_t)
    double zeta_prime(double t) const;  // = P(u_t) / t
    double pohozaev_at(double t) const; // P(u_t)
    /// int V(eps t x) u^2 dx
    double potential_term(double t) const;
    /// int [N V + grad V . x](eps t x) u^2 dx
    double pohozaev_potential_term(double t) const;
    /// I(u_t) with the potential replaced by the constant v; used for the
    /// V_max functional of the mountain-pass T scan.
    double zeta_with_constant_potential(double t, double v, double lambda) const;

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    double grad_sq() const { return grad_sq_; }
    double l2_sq() const { return l2_sq_; }
    double nonlocal() const { return nonlocal_; }
    double lambda() const { return lambda_; }

private:
    int dim_;
    double alpha_, lambda_, eps_;
    double grad_sq_, l2_sq_, nonlocal_;
    bool constant_;
    double v_inf_ = 0.0;
    double cell_ = 1.0;
    PotentialSpec pspec_;
    std::vector<double> radius_;  // |x_i| (or bin radii)
    std::vector<double> mass_;    // u_i^2 (unweighted; sums carry h^N once)
};

/// One-shot fibering evaluation: (zeta, zeta') at t.
struct FiberValue {
    double zeta;
    double zeta_prime;
};
FiberValue fiber_eval(const RieszPlan& plan, const PotentialSpec& pspec,
                      const NonlinSpec& nspec, const Field& u, double lambda, double eps,
                      double t);

/// Gap of the key inequality:
///   I(u) - [ I(u_t) + (1 - t^{N+alpha})/(N+alpha) P(u)
///            + (1-theta) g(t) / (2(N+alpha)) ||grad u||^2 ]
/// Nonnegative in the continuum under (V1)-(V3).
double key_inequality_gap(const RieszPlan& plan, const PotentialSpec& pspec,
                          const NonlinSpec& nspec, const Field& u, double t);

/// Residual of the exact autonomous scaling identity in the scalars
/// (a, ||u||_2^2, d); pure algebra, machine-precision zero:
///   I(u) - I(u_t) - (1 - t^{N+alpha})/(N+alpha) P(u)
///        - [ g(t) a + V_inf h(t) ||u||_2^2 ] / (2(N+alpha))
/// with the lambda-family functionals (d enters multiplied by lambda).
double autonomous_identity_residual(double grad_sq, double l2_sq, double nonlocal,
                                    double v_inf, double lambda, double t, int dim,
                                    double alpha);

}  // namespace choquard

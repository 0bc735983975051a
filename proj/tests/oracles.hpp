#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <array>
#include <cmath>
#include <functional>

#include "choquard/grid.hpp"
#include "choquard/rng.hpp"

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Composite Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / (2 * panels);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// int_R^N exp(-|x|^2) dx via the 1-D factorization.
inline double gaussian_mass(int dim) {
    const double one = simpson([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 2000);
    double out = 1.0;
    for (int d = 0; d < dim; ++d) out *= one;
    return out;
}

/// int_R^3 |grad exp(-|x|^2)|^2 dx = 3 * int 4 x^2 e^{-2x^2} dx * (int e^{-2x^2} dx)^2.
inline double gaussian_grad_sq_3d() {
    const double moment =
        simpson([](double x) { return 4.0 * x * x * std::exp(-2.0 * x * x); }, -10.0, 10.0, 2000);
    const double mass = simpson([](double x) { return std::exp(-2.0 * x * x); }, -10.0, 10.0, 2000);
    return 3.0 * moment * mass * mass;
}

/// Newton potential of exp(-|x|^2) in 3-D: (sqrt(pi)/4) erf(r)/r.
inline double gaussian_newton_potential(double r) {
    if (r < 1e-12) return 0.5;
    return 0.25 * std::sqrt(kPi) * std::erf(r) / r;
}

/// Coefficients of the autonomous scaling identity expanded in
/// (a, V_inf*l2, lambda*d); the identity holds iff all three vanish.
struct IdentityCoefficients {
    double on_grad_sq;
    double on_l2;
    double on_nonlocal;
};

inline IdentityCoefficients identity_coefficients(double t, int dim, double alpha) {
    const double nn = dim;
    const double na = nn + alpha;
    const double g = 2.0 + alpha - na * std::pow(t, nn - 2.0) + (nn - 2.0) * std::pow(t, na);
    const double h = alpha - na * std::pow(t, nn) + nn * std::pow(t, na);
    const double c = (1.0 - std::pow(t, na)) / na;
    IdentityCoefficients out;
    out.on_grad_sq = 0.5 - 0.5 * std::pow(t, nn - 2.0) - c * 0.5 * (nn - 2.0) - g / (2.0 * na);
    out.on_l2 = 0.5 - 0.5 * std::pow(t, nn) - c * 0.5 * nn - h / (2.0 * na);
    out.on_nonlocal = -0.5 + 0.5 * std::pow(t, na) + c * 0.5 * na;
    return out;
}

/// Smooth random field: a superposition of a few Gaussian bumps.
inline choquard::Field random_smooth_field(const choquard::GridSpec& g, choquard::Rng& rng,
                                           int bumps = 3) {
    choquard::Field out(g);
    for (int b = 0; b < bumps; ++b) {
        std::array<double, choquard::kMaxDim> c{};
        for (int d = 0; d < g.dim; ++d) c[d] = rng.uniform(-0.2 * g.length, 0.2 * g.length);
        const double amp = rng.uniform(-1.5, 1.5);
        const double w = rng.uniform(0.08 * g.length, 0.15 * g.length);
        choquard::Field bump = choquard::gaussian_field(g, amp == 0.0 ? 1.0 : amp, w, c);
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += bump.values[i];
    }
    return out;
}

}  // namespace oracles

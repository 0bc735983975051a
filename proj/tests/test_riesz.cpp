#include <doctest.h>

#include <cmath>

#include "choquard/riesz.hpp"
#include "choquard/rng.hpp"
#include "oracles.hpp"

using namespace choquard;

TEST_CASE("riesz_constant: Coulomb case, Gamma arithmetic, preconditions") {
    CHECK(riesz_constant(2.0, 3) ==
          doctest::Approx(1.0 / (4.0 * oracles::kPi)).epsilon(1e-15));
    CHECK(riesz_constant(1.0, 3) ==
          doctest::Approx(1.0 / (2.0 * oracles::kPi * oracles::kPi)).epsilon(1e-14));
    CHECK_THROWS(riesz_constant(3.0, 3));
    CHECK_THROWS(riesz_constant(3.5, 3));
    CHECK_THROWS(riesz_constant(0.0, 3));
    CHECK_THROWS(riesz_constant(-1.0, 3));
}

TEST_CASE("plan: shape, finiteness, origin cell, exact negation symmetry") {
    GridSpec g = make_grid(3, 4.0, 16);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    const int m = plan->padded_n();
    CHECK(m == 32);
    CHECK(plan->multiplier().size() ==
          static_cast<size_t>(m) * m * (m / 2 + 1));
    for (double v : plan->multiplier()) CHECK(std::isfinite(v));

    // origin-cell analytic ball average
    const double h = g.h;
    const double omega = unit_ball_volume(3);
    const double rc = std::pow(h * h * h / omega, 1.0 / 3.0);
    const double expected =
        plan->normalization() * 3.0 * omega * rc * rc / (2.0 * h * h * h);
    const double sampled =
        riesz_kernel_sample(g, 2.0, plan->normalization(), plan->truncation_radius(), {}, true);
    CHECK(sampled == doctest::Approx(expected).epsilon(1e-14));

    // negation symmetry across the fully stored axes is exact
    const int nz = m / 2 + 1;
    for (int k1 = 0; k1 < m; ++k1)
        for (int k2 = 0; k2 < m; ++k2)
            for (int k3 : {0, 3, nz - 1}) {
                const size_t a =
                    (static_cast<size_t>(k1) * m + static_cast<size_t>(k2)) * nz +
                    static_cast<size_t>(k3);
                const size_t b = (static_cast<size_t>((m - k1) % m) * m +
                                  static_cast<size_t>((m - k2) % m)) *
                                     nz +
                                 static_cast<size_t>(k3);
                CHECK(plan->multiplier()[a] == plan->multiplier()[b]);
            }

    CHECK_THROWS(plan_riesz(g, 3.0));
    CHECK_THROWS(plan_riesz(g, 0.0));
    CHECK_THROWS(plan_riesz(make_grid(3, 16.0, 64), 2.0, 1 << 20));  // memory cap
}

TEST_CASE("convolution: zero field, linearity, delta kernel column") {
    GridSpec g = make_grid(3, 8.0, 8);
    RieszPlanPtr plan = plan_riesz(g, 2.0);

    Field zero(g);
    Field out = riesz_convolve(*plan, zero);
    for (double v : out.values) CHECK(v == 0.0);

    Rng rng(5);
    Field f(g);
    for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
    Field doubled(g);
    for (size_t i = 0; i < f.values.size(); ++i) doubled.values[i] = 2.0 * f.values[i];
    Field cf = riesz_convolve_direct(g, 2.0, f);
    Field cdoubled = riesz_convolve_direct(g, 2.0, doubled);
    for (size_t i = 0; i < cf.values.size(); ++i)
        CHECK(cdoubled.values[i] == 2.0 * cf.values[i]);

    // convolution with a discrete delta reproduces the sampled kernel column
    Field delta(g);
    const std::int64_t center = (static_cast<std::int64_t>(4) * 8 + 4) * 8 + 4;
    delta.values[static_cast<size_t>(center)] = 1.0 / g.cell_volume();
    Field col = riesz_convolve_direct(g, 2.0, delta);
    const auto xc = g.coords(center);
    const double a = riesz_constant(2.0, 3);
    const double trunc = g.length * std::sqrt(3.0);
    for (std::int64_t i = 0; i < g.total(); ++i) {
        const auto xi = g.coords(i);
        std::array<double, kMaxDim> diff{};
        bool origin = true;
        for (int d = 0; d < 3; ++d) {
            diff[d] = xi[d] - xc[d];
            origin = origin && diff[d] == 0.0;
        }
        const double expected = riesz_kernel_sample(g, 2.0, a, trunc, diff, origin);
        CHECK(col.values[static_cast<size_t>(i)] ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("FFT path agrees with the direct double sum to machine precision") {
    GridSpec g = make_grid(3, 8.0, 8);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Field f(g);
        for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
        Field fast = riesz_convolve(*plan, f);
        Field slow = riesz_convolve_direct(g, 2.0, f);
        double scale = 0.0;
        for (double v : slow.values) scale = std::max(scale, std::fabs(v));
        for (size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::fabs(fast.values[i] - slow.values[i]) <= 1e-12 * scale);
    }
    // non-Coulomb exponent too
    RieszPlanPtr plan15 = plan_riesz(g, 1.5);
    Field f(g);
    for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
    Field fast = riesz_convolve(*plan15, f);
    Field slow = riesz_convolve_direct(g, 1.5, f);
    double scale = 0.0;
    for (double v : slow.values) scale = std::max(scale, std::fabs(v));
    for (size_t i = 0; i < fast.values.size(); ++i)
        CHECK(std::fabs(fast.values[i] - slow.values[i]) <= 1e-12 * scale);
}

TEST_CASE("FFT/direct equivalence holds in 2, 3, and 4 dimensions") {
    Rng rng(29);
    struct Case {
        int dim;
        int n;
        double alpha;
    };
    for (const Case& c : {Case{2, 16, 1.2}, Case{3, 8, 2.0}, Case{4, 8, 2.5}}) {
        GridSpec g = make_grid(c.dim, 6.0, c.n);
        RieszPlanPtr plan = plan_riesz(g, c.alpha);
        Field f(g);
        for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
        Field fast = riesz_convolve(*plan, f);
        Field slow = riesz_convolve_direct(g, c.alpha, f);
        double scale = 0.0;
        for (double v : slow.values) scale = std::max(scale, std::fabs(v));
        for (size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::fabs(fast.values[i] - slow.values[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("grid mismatch and cost guard") {
    GridSpec g = make_grid(3, 8.0, 8);
    GridSpec g2 = make_grid(3, 8.0, 10);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    CHECK_THROWS(riesz_convolve(*plan, Field(g2)));
    CHECK_THROWS(riesz_convolve_direct(make_grid(3, 16.0, 32), 2.0,
                                       Field(make_grid(3, 16.0, 32))));
}

TEST_CASE("Gaussian Newton potential matches erf formula") {
    GridSpec g = make_grid(3, 16.0, 64);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Field gauss = gaussian_field(g, 1.0, std::sqrt(0.5));  // exp(-|x|^2)
    Field pot = riesz_convolve(*plan, gauss);

    // value at the node nearest the origin is ~ phi(0+) = 1/2
    const int c = g.n / 2;
    const std::int64_t flat = (static_cast<std::int64_t>(c) * g.n + c) * g.n + c;
    const auto x0 = g.coords(flat);
    const double r0 = std::sqrt(x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2]);
    CHECK(std::fabs(pot.values[static_cast<size_t>(flat)] -
                    oracles::gaussian_newton_potential(r0)) < 2e-3);

    // 50 node radii spread over two rows
    for (int k = 0; k < 50; ++k) {
        const int i = c + k % 25;
        const int j = c + (k < 25 ? 0 : 5);
        const int kk = c + (k < 25 ? 0 : 2);
        const std::int64_t f = (static_cast<std::int64_t>(i) * g.n + j) * g.n + kk;
        const auto x = g.coords(f);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        CHECK(std::fabs(pot.values[static_cast<size_t>(f)] -
                        oracles::gaussian_newton_potential(r)) < 2e-3);
    }
}

TEST_CASE("Newton potential error at fixed points halves when n doubles") {
    const std::array<std::array<double, kMaxDim>, 4> points = {
        {{0.6, 0.2, -0.4, 0.0}, {1.5, -1.0, 0.5, 0.0}, {2.5, 0.0, 0.0, 0.0},
         {0.1, 0.1, 0.1, 0.0}}};
    double err32 = 0.0, err64 = 0.0;
    for (int n : {32, 64}) {
        GridSpec g = make_grid(3, 16.0, n);
        RieszPlanPtr plan = plan_riesz(g, 2.0);
        Field pot = riesz_convolve(*plan, gaussian_field(g, 1.0, std::sqrt(0.5)));
        double err = 0.0;
        for (const auto& p : points) {
            const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            err = std::max(err, std::fabs(interpolate(pot, p) -
                                          oracles::gaussian_newton_potential(r)));
        }
        (n == 32 ? err32 : err64) = err;
    }
    CHECK(err64 <= 0.55 * err32);  // observed order >= 1
}

TEST_CASE("discrete Riesz form is symmetric and positive semi-definite") {
    GridSpec g = make_grid(3, 8.0, 8);
    RieszPlanPtr plan = plan_riesz(g, 2.0);
    Rng rng(17);
    auto inner = [&](const Field& a, const Field& b) {
        double s = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
        return s * g.cell_volume();
    };
    for (int trial = 0; trial < 100; ++trial) {
        Field f(g), w(g);
        for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
        for (double& v : w.values) v = rng.uniform(-1.0, 1.0);
        Field cf = riesz_convolve(*plan, f);
        Field cw = riesz_convolve(*plan, w);
        const double quad = inner(cf, f);
        const double scale = inner(f, f);
        CHECK(quad >= -1e-10 * scale);
        CHECK(inner(cf, w) == doctest::Approx(inner(f, cw)).epsilon(1e-12));
    }
}

#include <doctest.h>

#include <cmath>

#include "choquard/models.hpp"
#include "choquard/riesz.hpp"
#include "choquard/rng.hpp"
#include "oracles.hpp"

using namespace choquard;

namespace {

PotentialSpec remark14i(double a, double b) {
    PotentialParams p;
    p.a = a;
    p.b = b;
    return make_potential(PotentialVariant::kRemark14i, p, 3, 2.0);
}

}  // namespace

TEST_CASE("eval_potential: catalog closed forms") {
    PotentialSpec r14 = remark14i(3.0, 1.0);
    PotentialValue at0 = eval_potential(r14, {0.0, 0.0, 0.0});
    CHECK(at0.v == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(at0.radial_derivative == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r14.v_inf == 3.0);
    CHECK(r14.v_min == 2.0);

    PotentialParams cp;
    cp.v_inf = 1.0;
    PotentialSpec constant = make_potential(PotentialVariant::kConstant, cp, 3, 2.0);
    PotentialValue cv = eval_potential(constant, {5.0, -3.0, 1.0});
    CHECK(cv.v == 1.0);
    CHECK(cv.radial_derivative == 0.0);

    PotentialParams rp;
    rp.a = 2.0;
    rp.b = 1.0;
    rp.beta = 1.0;
    PotentialSpec r110 = make_potential(PotentialVariant::kRemark110, rp, 3, 2.0);
    PotentialValue pv = eval_potential(r110, {oracles::kPi, 0.0, 0.0});
    CHECK(pv.v == doctest::Approx(2.0 + 1.0 / (1.0 + oracles::kPi)).epsilon(1e-14));
    CHECK(r110.v_max == doctest::Approx(2.0 + 1.0 / (1.0 + oracles::kPi)).epsilon(1e-15));
    CHECK(r110.v_inf == 2.0);
}

TEST_CASE("catalog construction enforces the printed remark inequalities") {
    CHECK_NOTHROW(remark14i(3.0, 1.0));  // 22 > 16
    CHECK_THROWS(remark14i(1.0, 0.9));   // 10 < 14.4
    CHECK_THROWS(remark14i(1.0, 2.0));   // a > b violated

    PotentialParams cp;
    cp.v_inf = 1.0;
    CHECK_THROWS(make_potential(PotentialVariant::kConstant, cp, 2, 1.0));  // needs N >= 3
    CHECK_THROWS(make_nonlinearity(NonlinVariant::kPekar, {}, 2, 1.0));

    PotentialParams rp;
    rp.a = 2.0;
    rp.b = 1.0;
    rp.beta = 1.0;
    CHECK_NOTHROW(make_potential(PotentialVariant::kRemark17, rp, 3, 2.0));  // 4 > 3
    rp.b = 1.4;
    CHECK_THROWS(make_potential(PotentialVariant::kRemark17, rp, 3, 2.0));  // 4 < 4.2
}

TEST_CASE("user_table potential interpolates and rejects out-of-range points") {
    PotentialParams p;
    p.table_r = {0.0, 1.0, 2.0, 4.0};
    p.table_v = {0.5, 0.8, 1.0, 1.0};
    p.v_inf = 1.0;
    PotentialSpec spec = make_potential(PotentialVariant::kUserTable, p, 3, 2.0);
    CHECK(eval_potential_radial(spec, 0.5).v == doctest::Approx(0.65));
    CHECK(eval_potential_radial(spec, 0.5).radial_derivative ==
          doctest::Approx(0.3 * 0.5));
    CHECK_THROWS(eval_potential_radial(spec, 5.0));
}

TEST_CASE("eval_nonlinearity: pekar and power forms") {
    NonlinSpec pekar = make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0);
    NonlinValue v = eval_nonlinearity(pekar, 2.0);
    CHECK(v.f == 2.0);
    CHECK(v.big_f == 2.0);
    v = eval_nonlinearity(pekar, 0.0);
    CHECK(v.f == 0.0);
    CHECK(v.big_f == 0.0);

    NonlinParams p3;
    p3.p = 3.0;
    NonlinSpec cubic = make_nonlinearity(NonlinVariant::kPowerP, p3, 3, 2.0);
    v = eval_nonlinearity(cubic, -1.0);
    CHECK(v.f == -1.0);
    CHECK(v.big_f == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("nonlinearity exponent window is strict unless disabled") {
    NonlinParams p;
    p.p = 6.0;  // outside (5/3, 5) for N = 3, alpha = 2
    CHECK_THROWS(make_nonlinearity(NonlinVariant::kPowerP, p, 3, 2.0));
    CHECK_NOTHROW(make_nonlinearity(NonlinVariant::kPowerP, p, 3, 2.0, false));
    p.p = 5.0 / 3.0;  // boundary excluded
    CHECK_THROWS(make_nonlinearity(NonlinVariant::kPowerP, p, 3, 2.0));
}

TEST_CASE("F' = f: antiderivative consistency by quadrature") {
    NonlinParams tp;
    tp.p = 2.5;
    tp.q = 3.5;
    tp.kappa = 0.7;
    for (const NonlinSpec& spec :
         {make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0),
          make_nonlinearity(NonlinVariant::kTwoPower, tp, 3, 2.0)}) {
        Rng rng(31);
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(-3.0, 3.0);
            if (std::fabs(t) < 1e-3) continue;
            const double integral = oracles::simpson(
                [&](double s) { return eval_nonlinearity(spec, s).f; }, 0.0, t, 400);
            CHECK(integral ==
                  doctest::Approx(eval_nonlinearity(spec, t).big_f).epsilon(1e-8));
        }
    }
}

TEST_CASE("radial derivative matches a centered difference of t -> V(tx)") {
    PotentialParams rp;
    rp.a = 2.0;
    rp.b = 1.0;
    rp.beta = 1.0;
    PotentialParams steep = rp;
    steep.a = 3.0;  // remark14_ii wants a >= (2 + alpha/N) b
    std::vector<PotentialSpec> specs = {
        remark14i(3.0, 1.0),
        make_potential(PotentialVariant::kRemark14ii, steep, 3, 2.0),
        make_potential(PotentialVariant::kRemark14iii, rp, 3, 2.0),
        make_potential(PotentialVariant::kRemark17, rp, 3, 2.0),
        make_potential(PotentialVariant::kRemark110, rp, 3, 2.0)};
    Rng rng(99);
    for (const auto& spec : specs) {
        for (int i = 0; i < 1000; ++i) {
            const double r = rng.log_uniform(0.05, 30.0);
            const double s = 1e-5;
            const double fd = (eval_potential_radial(spec, (1.0 + s) * r).v -
                               eval_potential_radial(spec, (1.0 - s) * r).v) /
                              (2.0 * s);
            const double rd = eval_potential_radial(spec, r).radial_derivative;
            // absolute floor 1e-8 covers the centered-difference noise
            CHECK(std::fabs(rd - fd) <= 1e-6 * (std::fabs(rd) + 1e-2));
        }
    }
}

TEST_CASE("check_assumptions: constant + pekar satisfies everything relevant") {
    PotentialParams cp;
    cp.v_inf = 1.0;
    PotentialSpec constant = make_potential(PotentialVariant::kConstant, cp, 3, 2.0);
    NonlinSpec pekar = make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0);
    AssumptionReport rep = check_assumptions(constant, pekar);
    CHECK(rep.all_passed({"V1", "V2", "V3", "V6", "F1", "F2", "F3"}));
    CHECK(rep.find("V5")->verdict == Verdict::kFail);  // no interior strict minimum
}

TEST_CASE("check_assumptions: remark catalog verdicts") {
    NonlinSpec pekar = make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0);

    AssumptionReport rep = check_assumptions(remark14i(3.0, 1.0), pekar);
    CHECK(rep.all_passed({"V1", "V2", "V3", "V4", "V5", "V6"}));

    PotentialParams rp;
    rp.a = 2.0;
    rp.b = 1.0;
    rp.beta = 1.0;
    PotentialSpec r110 = make_potential(PotentialVariant::kRemark110, rp, 3, 2.0);
    rep = check_assumptions(r110, pekar);
    CHECK(rep.all_passed({"V1", "V5", "V6"}));
    CHECK(rep.find("V2")->verdict == Verdict::kFail);  // V exceeds V_inf near |x|^beta = pi

    NonlinSpec wild = make_nonlinearity(
        NonlinVariant::kPowerP, [] { NonlinParams p; p.p = 6.0; return p; }(), 3, 2.0, false);
    rep = check_assumptions(remark14i(3.0, 1.0), wild);
    CHECK(rep.find("F2")->verdict == Verdict::kFail);
    CHECK(rep.find("F3")->verdict == Verdict::kPass);
}

TEST_CASE("check_assumptions rejects empty sampling") {
    PotentialParams cp;
    cp.v_inf = 1.0;
    PotentialSpec constant = make_potential(PotentialVariant::kConstant, cp, 3, 2.0);
    NonlinSpec pekar = make_nonlinearity(NonlinVariant::kPekar, {}, 3, 2.0);
    SamplingConfig s;
    s.radii = 0;
    CHECK_THROWS(check_assumptions(constant, pekar, s));
}

TEST_CASE("diagnostic constants: gamma2 arithmetic and the G63 formula") {
    PotentialParams cp;
    cp.v_inf = 1.0;
    PotentialSpec constant = make_potential(PotentialVariant::kConstant, cp, 3, 2.0);
    const double s_sharp = sharp_sobolev_constant(3);
    DiagnosticConstants dc = diagnostic_constants(constant, s_sharp, 1.0);

    // gamma2 = N - 2 + (2+alpha) theta + (N+alpha) V_inf = 1 + 0 + 5
    CHECK(dc.gamma2 == doctest::Approx(6.0).epsilon(1e-15));

    // gamma1 reproduces the explicit min at the reported radius
    const double omega = unit_ball_volume(3);
    const double expected = std::min(
        {0.5, s_sharp / (2.0 * std::pow(omega, 2.0 / 3.0)),
         5.0 * std::pow(dc.radius_used, -2.0) / 4.0});
    CHECK(dc.gamma1 == doctest::Approx(expected).epsilon(1e-12));
    // (B31) holds at the reported radius (theta = 0, M0 = 0)
    CHECK((0.0 + 2.0 * 1.0) * std::pow(dc.radius_used, -3.0) < 5.0 / 4.0);

    // rho0 = min(1, (gamma1 / (2 (1+C1)))^{N/(2 alpha)})
    CHECK(dc.rho0 ==
          doctest::Approx(std::min(1.0, std::pow(dc.gamma1 / 4.0, 0.75))).epsilon(1e-13));

    // gamma3 = alpha * min(1, (1-theta') V_min) = 2 for the unit constant
    CHECK(dc.gamma3 == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS(diagnostic_constants(constant, -1.0, 1.0));
    CHECK_THROWS(diagnostic_constants(constant, s_sharp, 0.0));
}

TEST_CASE("sharp Sobolev constant matches the N=3 closed form") {
    CHECK(sharp_sobolev_constant(3) ==
          doctest::Approx(3.0 * std::pow(oracles::kPi / 2.0, 4.0 / 3.0)).epsilon(1e-12));
}

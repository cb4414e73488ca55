#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cypipe/bounds.hpp"
#include "cypipe/rheology.hpp"

using namespace cypipe;

namespace {

ModelParams params(double n, double alpha, double kappa, double beta = 0.5) {
    ModelParams p;
    p.n = n;
    p.alpha = alpha;
    p.kappa = kappa;
    p.beta = beta;
    p.R = 1.0;
    p.eps = 1e-3;
    p.eps0 = 1e-2;
    return p;
}

// independent brute-force evaluation of the K2 expression on its own grid
double k2_oracle(const InitialCondition& ic, const PressureProfile& prof,
                 const ModelParams& p, int points) {
    double diffusion = 0.0, axis = std::abs(ic.d2psi(0.0));
    for (int k = 0; k < points; ++k) {
        const double Y = p.R * static_cast<double>(k) / (points - 1);
        const double dp = ic.dpsi(Y);
        diffusion = std::max(diffusion,
                             std::abs(viscosity_factor(std::abs(dp), p) * ic.d2psi(Y)));
        if (k > 0) {
            axis = std::max(axis, viscosity_ratio(dp, p) * std::abs(dp / Y));
        }
    }
    return (diffusion + axis + prof.b0()) / p.eight_beta_sq();
}

}  // namespace

TEST_CASE("K1 for flat and quartic initial data") {
    const auto prof = PressureProfile::constant(2.0, 2.0);
    CHECK(compute_k1(InitialCondition::zero(), prof, 1.0) == doctest::Approx(1.0));

    const auto quartic = InitialCondition::compatible_quartic(prof, 1.0);
    // sup |Psi/(R^2-Y^2)| = b0/8 at the axis; the b0/2 term wins
    CHECK(compute_k1(quartic, prof, 1.0) == doctest::Approx(1.0));

    // K1 >= b0/2 regardless of the initial data
    for (double scale : {0.1, 1.0, 5.0}) {
        const auto ic = InitialCondition::polynomial({scale, 0.0, -scale});
        CHECK(compute_k1(ic, prof, 1.0) >= 1.0);
    }
}

TEST_CASE("K2 for flat data and against the brute-force oracle") {
    // Psi = 0: K2 = b0 / (8 beta^2) = 1 at b0=2, beta=0.5
    const auto prof = PressureProfile::constant(2.0, 2.0);
    const auto p = params(2.0, 2.0, 1.0);
    CHECK(compute_k2(InitialCondition::zero(), prof, p) == doctest::Approx(1.0));

    const auto quartic = InitialCondition::compatible_quartic(prof, 1.0);
    const double mine = compute_k2(quartic, prof, p);
    const double oracle = k2_oracle(quartic, prof, p, 100001);
    CHECK(mine == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("K3 is affine in K2 and b0") {
    const auto prof = PressureProfile::constant(2.0, 2.0);
    const auto p = params(2.0, 2.0, 1.0);
    CHECK(compute_k3(1.0, prof, p) == doctest::Approx(2.0));
    const auto prof_low = PressureProfile::constant(1.0, 1.0);
    CHECK(compute_k3(1.0, prof_low, p) < compute_k3(1.0, prof, p));
    CHECK(compute_k3(0.5, prof, p) < compute_k3(1.0, prof, p));
}

TEST_CASE("K4 branches") {
    const auto with_kappa = params(2.0, 2.0, 0.5);
    const double base = 3.0 * (1.0 + 0.01);
    const double powered = std::sqrt(base * std::pow(0.5, -2.0));
    CHECK(compute_k4(3.0, with_kappa) == doctest::Approx(std::max(base, powered)));
    const auto no_kappa = params(2.0, 2.0, 0.0);
    CHECK(compute_k4(3.0, no_kappa) == doctest::Approx(base));
}

TEST_CASE("K5 components") {
    // constant profile: the b' term vanishes; tuned so Finv term = 0.5
    auto p = params(-1.0, 2.0, 1.0);
    const double b0 = 0.8 / (p.R + p.eps0);
    const auto prof = PressureProfile::constant(b0, b0);
    const auto ic = InitialCondition::compatible_quartic(prof, p.R);
    CHECK(compute_k5(ic, prof, p) == doctest::Approx(0.5).epsilon(1e-9));

    // steep initial data dominates instead
    const auto steep = InitialCondition::polynomial({2.0, 0.0, -2.0});
    CHECK(compute_k5(steep, prof, p) == doctest::Approx(4.0));  // sup|Psi'| = 4 at Y=1
}

TEST_CASE("K6 case handling") {
    const auto prof_b0 = 2.0;
    {
        const auto p = params(2.0, 2.0, 1.0);  // n > 1: no division
        CHECK(compute_k6(p, prof_b0, 2.0, 5.0) ==
              doctest::Approx(12.0 * 0.25 * 2.0 + 3.0));
    }
    {
        const auto p = params(1.0, 2.0, 1.0);  // n = 1: Phi == 1, same value
        CHECK(compute_k6(p, prof_b0, 2.0, 5.0) == doctest::Approx(9.0));
    }
    {
        const auto p = params(0.5, 2.0, 1.0);  // 0 < n < 1: divide by Phi(K4)
        const double k4 = 5.0;
        const double expect = 9.0 / viscosity_factor(k4, p);
        CHECK(compute_k6(p, prof_b0, 2.0, k4) == doctest::Approx(expect));
        CHECK(compute_k6(p, prof_b0, 2.0, k4) > 9.0);
    }
}

TEST_CASE("K7 uses the horizon-grown envelope") {
    const auto p = params(0.0, 2.0, 1.0);
    const double k7 = compute_k7(p, 2.0, 2.0, 0.5, 1.0);
    const double expect = 9.0 / viscosity_factor(0.5 * std::exp(1.0), p);
    CHECK(k7 == doctest::Approx(expect));
}

TEST_CASE("lambda horizon") {
    const auto p = params(-1.0, 2.0, 1.0);  // eta0 = 1
    const auto lam = compute_lambda(0.5, p);
    REQUIRE(lam);
    CHECK(*lam == doctest::Approx(std::log(2.0)));
    CHECK(!compute_lambda(1.5, p));                       // K5 beyond eta0
    CHECK(!compute_lambda(0.5, params(2.0, 2.0, 1.0)));   // no eta0 for n > 0
}

TEST_CASE("constants are independent of eps") {
    const auto prof = PressureProfile::constant(1.0, 1.0);
    const auto ic = InitialCondition::compatible_quartic(prof, 1.0);
    auto pa = params(2.0, 2.0, 1.0);
    auto pb = pa;
    pa.eps = 1e-3;
    pb.eps = 1e-4;
    const auto ba = compute_bounds(ic, prof, pa, 1.0);
    const auto bb = compute_bounds(ic, prof, pb, 1.0);
    CHECK(ba.K1 == bb.K1);
    CHECK(ba.K2 == bb.K2);
    CHECK(ba.K3 == bb.K3);
    CHECK(*ba.K4 == *bb.K4);
    CHECK(*ba.K5 == *bb.K5);
    CHECK(*ba.K6 == *bb.K6);
}

TEST_CASE("bounds recomputation is bit-identical") {
    const auto prof = PressureProfile::constant(1.0, 1.0);
    const auto ic = InitialCondition::compatible_quartic(prof, 1.0);
    const auto p = params(2.0, 2.0, 1.0);
    const auto a = compute_bounds(ic, prof, p, 1.0);
    const auto b = compute_bounds(ic, prof, p, 1.0);
    CHECK(a.K1 == b.K1);
    CHECK(a.K2 == b.K2);
    CHECK(a.K3 == b.K3);
}

TEST_CASE("monitor margins for a rest field") {
    const auto prof = PressureProfile::polynomial({2.0, 0.0, -2.0}, 2.0);  // b(R)=0
    const auto ic = InitialCondition::zero();
    const auto p = params(2.0, 2.0, 1.0);
    const auto bounds = compute_bounds(ic, prof, p, 1.0);
    const int N = 64;
    const double h = p.R / N;
    const std::vector<double> U(N + 1, 0.0), U_T(N + 1, 0.0);
    const std::vector<double> faces(N, 0.0);
    const auto rep = monitor_bounds(U, faces, U_T, 0.0, 0.0, 0, h, bounds, p, 2.0);
    CHECK(rep.all_pass());
    for (const auto& c : rep.checks) {
        if (c.name == "velocity_parabolic_envelope") {
            // tightest at Y = R where the envelope is exactly the slack
            CHECK(c.margin == doctest::Approx(10.0 * h * h));
            CHECK(c.observed == 0.0);
        }
    }
}

TEST_CASE("monitor flags a manufactured violation") {
    const auto prof = PressureProfile::constant(1.0, 1.0);
    const auto ic = InitialCondition::compatible_quartic(prof, 1.0);
    const auto p = params(2.0, 2.0, 1.0);
    const auto bounds = compute_bounds(ic, prof, p, 1.0);
    const int N = 64;
    const double h = p.R / N;
    std::vector<double> U(N + 1), U_T(N + 1, 0.0), faces(N, 0.0);
    const double scale = 10.0 * bounds.K1 * p.R * p.R;
    for (int i = 0; i <= N; ++i) {
        const double Y = h * i;
        U[i] = scale * ic.psi(Y);
    }
    for (int i = 0; i < N; ++i) faces[i] = (U[i + 1] - U[i]) / h;
    const auto rep = monitor_bounds(U, faces, U_T, 0.0, 0.0, 0, h, bounds, p, 1.0);
    bool velocity_failed = false;
    for (const auto& c : rep.checks) {
        if (c.name == "velocity_parabolic_envelope") velocity_failed = c.enabled && !c.pass;
    }
    CHECK(velocity_failed);
    CHECK(!rep.all_pass());
}

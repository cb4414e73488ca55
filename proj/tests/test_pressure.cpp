#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cypipe/pressure.hpp"
#include "oracles.hpp"

using namespace cypipe;

namespace {

ModelParams base_params() {
    ModelParams p;
    p.n = 1.0;
    p.alpha = 2.0;
    p.kappa = 0.0;
    p.beta = 0.5;
    p.R = 1.0;
    p.eps = 1e-3;
    p.eps0 = 1e-2;
    return p;
}

// closed form for a constant gradient: B_eps(Y) = b0 (Y^2/2 + eps Y)/(Y+eps)
double constant_B(double Y, double eps, double b0) {
    if (Y == 0.0) return 0.0;
    return b0 * (0.5 * Y * Y + eps * Y) / (Y + eps);
}

}  // namespace

TEST_CASE("profile validation accepts and rejects per the constraints") {
    const auto p = base_params();
    CHECK(validate_profile(PressureProfile::constant(1.0, 1.0), p).accepted);

    const auto zero = validate_profile(PressureProfile::constant(0.0, 1.0), p);
    REQUIRE(!zero.accepted);
    CHECK(zero.issues.front().code == ProfileIssue::Code::IdenticallyZero);

    const auto negative =
        validate_profile(PressureProfile::polynomial({0.0, -1.0}, 1.0), p);
    REQUIRE(!negative.accepted);
    CHECK(negative.issues.front().code == ProfileIssue::Code::NegativePressure);

    const auto exceeds =
        validate_profile(PressureProfile::polynomial({0.0, 2.0}, 1.0), p);
    REQUIRE(!exceeds.accepted);
    CHECK(exceeds.issues.front().code == ProfileIssue::Code::ExceedsBound);
}

TEST_CASE("tabulated profiles interpolate with C2 splines") {
    std::vector<double> y, b;
    for (int k = 0; k <= 40; ++k) {
        const double Y = k / 40.0;
        y.push_back(Y);
        b.push_back(1.0 + Y * Y * (1.0 - Y));
    }
    const auto prof = PressureProfile::tabulated(y, b, 1.25);
    const auto report = validate_profile(prof, base_params());
    CHECK(report.accepted);
    CHECK(prof.value(0.5) == doctest::Approx(1.125).epsilon(1e-6));
    CHECK(prof.derivative(0.5) ==
          doctest::Approx(2.0 * 0.5 - 3.0 * 0.25).epsilon(1e-4));
    CHECK(std::isfinite(report.max_abs_second_derivative));
}

TEST_CASE("B_eps at zero and the constant closed form") {
    const auto prof = PressureProfile::constant(2.0, 2.0);
    CHECK(b_integral(0.0, 0.01, prof) == 0.0);
    // b0=2, eps=0.01, Y=1: 2 * 0.51 / 1.01
    CHECK(b_integral(1.0, 0.01, prof) ==
          doctest::Approx(1.0099009900990099).epsilon(1e-12));
    for (double Y : {0.1, 0.37, 0.84}) {
        CHECK(b_integral(Y, 0.01, prof) ==
              doctest::Approx(constant_B(Y, 0.01, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("B_eps against an independent fixed-grid reference") {
    const auto prof = PressureProfile::polynomial({0.5, 0.0, 1.5, -0.5}, 2.0);
    for (double eps : {1e-2, 1e-3}) {
        for (double Y : {0.25, 0.6, 1.0}) {
            const double ref = oracles::simpson_reference(
                                   [&](double s) { return (s + eps) * prof.value(s); },
                                   0.0, Y, 20000) /
                               (Y + eps);
            CHECK(b_integral(Y, eps, prof) == doctest::Approx(ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("B_eps grows with eps") {
    const auto prof = PressureProfile::polynomial({1.0, 0.0, 1.0}, 2.0);
    for (double Y : {0.2, 0.5, 0.9}) {
        for (double eps : {1e-4, 1e-3, 1e-2}) {
            const double fd = (b_integral(Y, eps * 1.01, prof) -
                               b_integral(Y, eps * 0.99, prof));
            CHECK(fd >= -1e-13);
        }
        // B_eps <= B_eps0 on the grid
        CHECK(b_integral(Y, 1e-3, prof) <= b_integral(Y, 1e-2, prof) + 1e-13);
    }
}

TEST_CASE("unregularized limit near the axis") {
    // B_0(Y) -> 0 and B_0(Y)/Y -> b(0)/2 as Y -> 0
    const auto prof = PressureProfile::polynomial({2.0, -0.5, 0.3}, 2.0);
    double prev_ratio = 0.0;
    for (double Y : {1e-3, 1e-4, 1e-5}) {
        const double B = b_integral(Y, 0.0, prof);
        CHECK(std::abs(B) < 2e-3);
        prev_ratio = B / Y;
    }
    CHECK(prev_ratio == doctest::Approx(0.5 * prof.value(0.0)).epsilon(1e-4));
}

TEST_CASE("supremum search: constant profile peaks at the wall") {
    const auto prof = PressureProfile::constant(2.0, 2.0);
    const auto sup = b_integral_sup(1e-6, prof, 1.0);
    CHECK(sup.location == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sup.value == doctest::Approx(1.0).epsilon(1e-5));
    // never above b0 (R + eps0) / 2
    CHECK(sup.value <= 2.0 * (1.0 + 1e-2) / 2.0);
}

TEST_CASE("supremum search finds interior maxima") {
    // b concentrated near the axis pushes the argmax inside (0, R)
    const auto prof = PressureProfile::polynomial({2.0, -4.0, 2.0}, 2.0);  // 2(1-Y)^2
    const auto sup = b_integral_sup(1e-3, prof, 1.0);
    CHECK(sup.location > 0.1);
    CHECK(sup.location < 0.9);
    // cross-check against a dense scan of the accurate integral
    double best = 0.0, best_y = 0.0;
    for (int k = 1; k <= 2000; ++k) {
        const double Y = k / 2000.0;
        const double B = b_integral(Y, 1e-3, prof);
        if (B > best) { best = B; best_y = Y; }
    }
    CHECK(sup.value >= best - 1e-12);
    CHECK(std::abs(sup.location - best_y) < 1e-3);
}

TEST_CASE("cache carries the supremum and respects its a-priori bound") {
    const auto prof = PressureProfile::constant(2.0, 2.0);
    auto p = base_params();
    p.eps = 1e-3;
    const PressureIntegral cache(prof, p, 64);
    CHECK(cache.at_node(0) == 0.0);
    for (int i = 0; i <= 64; ++i) CHECK(cache.at_node(i) >= 0.0);
    const auto ref = b_integral_sup(p.eps, prof, p.R);
    CHECK(cache.sup_value() == doctest::Approx(ref.value));
    CHECK(cache.sup_value() <= prof.b0() * (p.R + p.eps0) / 2.0);
    CHECK(cache.sup_location() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cached antiderivative is fourth order at the nodes") {
    const auto prof = PressureProfile::tabulated(
        {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {1.0, 1.3, 1.7, 1.5, 1.2, 1.1}, 2.0);
    auto p = base_params();
    p.eps = 1e-3;
    auto node_error = [&](int n_cells) {
        const PressureIntegral cache(prof, p, n_cells);
        double worst = 0.0;
        for (int i = 1; i <= n_cells; ++i) {
            const double Y = cache.node(i);
            const double ref = oracles::simpson_reference(
                [&](double s) { return (s + p.eps) * prof.value(s); }, 0.0, Y, 100000);
            worst = std::max(worst, std::abs(cache.antiderivative_node(i) - ref));
        }
        return worst;
    };
    const double e_coarse = node_error(32);
    const double e_fine = node_error(64);
    CHECK(e_coarse / e_fine >= 8.0);
}

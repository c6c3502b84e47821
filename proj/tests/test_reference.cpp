#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsac/reference.hpp"

using namespace nsac;

namespace {
struct Fixture {
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well);
    ReferenceScenario sc;
    Fixture() {
        sc.kind = ReferenceScenario::Kind::stationary_bubble;
        sc.center0 = {0.5, 0.5};
        sc.R0 = 0.25;
        sc.eps = 1.0 / 32;
    }
};
}  // namespace

TEST_CASE("leading-order field: on-interface, bulk saturation, profile value") {
    Fixture fx;
    // on the interface
    CHECK(leading_order_c({0.5 + 0.25, 0.5}, 0.0, fx.sc, fx.p) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    // deep inside (d > 2 delta): exactly +1
    CHECK(leading_order_c({0.5, 0.5}, 0.0, fx.sc, fx.p) == 1.0);
    // outside far: exactly -1
    CHECK(leading_order_c({0.02, 0.02}, 0.0, fx.sc, fx.p) == -1.0);
    // one eps inside: theta0(1) = tanh(1/2)
    Vec2 x{0.5 + 0.25 - fx.sc.eps, 0.5};
    CHECK(leading_order_c(x, 0.0, fx.sc, fx.p) == doctest::Approx(std::tanh(0.5)).epsilon(1e-6));

    // monotone along the normal, saturating
    double prev = -1.1;
    for (double d = -0.2; d <= 0.2; d += 0.005) {
        double val = leading_order_c({0.5 + 0.25 - d, 0.5}, 0.0, fx.sc, fx.p);
        CHECK(val >= prev - 1e-12);
        prev = val;
    }
}

TEST_CASE("laplace jump") {
    Fixture fx;
    CHECK(laplace_jump(fx.sc, fx.p) == doctest::Approx(fx.p.sigma / 0.25).epsilon(1e-12));
    CHECK(fx.p.sigma / 0.25 == doctest::Approx(8.0 / 3.0).epsilon(1e-5));

    ReferenceScenario big = fx.sc;
    big.R0 = 1e3;
    big.periodic_wrap = false;
    CHECK(laplace_jump(big, fx.p) == doctest::Approx(6.67e-4).epsilon(1e-3));

    ReferenceScenario moving = fx.sc;
    moving.kind = ReferenceScenario::Kind::transported_bubble;
    CHECK_THROWS_AS(laplace_jump(moving, fx.p), ValidationError);
}

TEST_CASE("corrected radius closed form") {
    CHECK(corrected_radius(0.3, 0.1, 1.0, 0.2) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-12));
    CHECK(corrected_radius(0.3, 0.25, 0.0, 0.0) == doctest::Approx(0.3));
    CHECK_THROWS_AS(corrected_radius(0.1, 1.0, 0.0, 1.0), ValidationError);

    // alpha = 1/2 drift: d(R^2)/dt = -2 sqrt(eps) exactly
    for (double eps : {0.04, 0.01}) {
        double t = 0.01, R0 = 0.3;
        double drift = (std::pow(corrected_radius(R0, eps, 0.5, t), 2) - R0 * R0) / t;
        CHECK(drift == doctest::Approx(-2.0 * std::sqrt(eps)).epsilon(1e-12));
    }
}

TEST_CASE("transported center with wraparound") {
    CHECK(transported_center({0.0, 0.0}, {1.0, 0.0}, 0.1).x == doctest::Approx(0.1));
    CHECK(transported_center({0.3, 0.4}, {0.0, 0.0}, 5.0).y == doctest::Approx(0.4));
    Vec2 wrapped = wrap_to_box({1.3, -0.2}, {1.0, 1.0});
    CHECK(wrapped.x == doctest::Approx(0.3));
    CHECK(wrapped.y == doctest::Approx(0.8));
}

TEST_CASE("scenario radius law by kind") {
    Fixture fx;
    ReferenceScenario mc = fx.sc;
    mc.kind = ReferenceScenario::Kind::mobility_corrected_bubble;
    mc.alpha = 0.5;
    CHECK(mc.radius(0.01) < mc.R0);
    ReferenceScenario tr = fx.sc;
    tr.kind = ReferenceScenario::Kind::transported_bubble;
    tr.U = {1.0, 0.0};
    CHECK(tr.radius(0.01) == tr.R0);
    CHECK(tr.center(0.1).x == doctest::Approx(0.6));
}

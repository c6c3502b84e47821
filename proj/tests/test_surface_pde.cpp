#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsac/surface_pde.hpp"

using namespace nsac;

TEST_CASE("constant-coefficient transport-diffusion against the exact solution") {
    auto p = SurfPdeProblem::constant(1.0, 0.0, 1.0, 0.25, 1.0,
                                      [](double s) { return std::sin(s); }, 256, 1e-3);
    auto sol = solve_surface_pde(p);
    double err = 0.0;
    for (int i = 0; i < p.n; ++i) {
        double s = 2.0 * M_PI * i / p.n;
        err = std::max(err, std::abs(sol.h_final[i] - std::exp(-0.25) * std::sin(s - 1.0)));
    }
    CHECK(err <= 1e-3);
}

TEST_CASE("first-order convergence in dt") {
    auto run = [](double dt) {
        auto p = SurfPdeProblem::constant(1.0, 0.0, 1.0, 0.25, 1.0,
                                          [](double s) { return std::sin(s); }, 256, dt);
        auto sol = solve_surface_pde(p);
        double err = 0.0;
        for (int i = 0; i < p.n; ++i) {
            double s = 2.0 * M_PI * i / p.n;
            err = std::max(err, std::abs(sol.h_final[i] - std::exp(-0.25) * std::sin(s - 1.0)));
        }
        return err;
    };
    double e1 = run(2e-3), e2 = run(1e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("spectral accuracy: doubling n leaves the resolved solution unchanged") {
    auto run = [](int n) {
        auto p = SurfPdeProblem::constant(1.0, 0.0, 1.0, 0.25, 1.0,
                                          [](double s) { return std::sin(s); }, n, 1e-3);
        return solve_surface_pde(p).h_final;
    };
    auto h256 = run(256);
    auto h512 = run(512);
    double diff = 0.0;
    for (int i = 0; i < 256; ++i)
        diff = std::max(diff, std::abs(h256[i] - h512[2 * i]));
    CHECK(diff <= 1e-6);
}

TEST_CASE("zero data stays zero; reaction-only decays like exp(-t)") {
    auto zero = SurfPdeProblem::constant(1.0, 0.5, 1.0, 0.5, 1.0, [](double) { return 0.0; }, 64);
    CHECK(max_abs(solve_surface_pde(zero).h_final) == 0.0);

    auto ode = SurfPdeProblem::constant(0.0, 1.0, 1.0, 0.5, 1.0, [](double) { return 1.0; }, 32, 1e-6);
    auto sol = solve_surface_pde(ode);
    double mn = 1e300, mx = -1e300;
    for (double v : sol.h_final) { mn = std::min(mn, v); mx = std::max(mx, v); }
    CHECK(mx - mn <= 1e-12);  // constant in s
    CHECK(mx == doctest::Approx(std::exp(-1.0)).epsilon(1e-6 / std::exp(-1.0)));
}

TEST_CASE("pure diffusion dissipates the L2 norm monotonically") {
    SurfPdeProblem p;
    p.a = [](double, double) { return 0.0; };
    p.b = [](double, double) { return 0.0; };
    // genuinely variable coefficient exercises the fixed-point branch
    p.c = [](double s, double) { return 1.0 + 0.4 * std::sin(s); };
    p.g = [](double, double) { return 0.0; };
    p.h0 = [](double s) { return std::sin(s) + 0.3 * std::cos(3 * s); };
    p.kappa = 0.5;
    p.T = 0.5;
    p.n = 128;
    p.dt = 1e-3;
    auto sol = solve_surface_pde(p, 40);
    double prev = 1e300;
    for (auto& [t, h] : sol.snapshots) {
        double l2 = 0.0;
        for (double v : h) l2 += v * v;
        CHECK(l2 <= prev * (1.0 + 1e-12));
        prev = l2;
    }
}

TEST_CASE("blow-up detection") {
    // b < 0 acts as exponential growth; horizon long enough to trip the guard
    auto p = SurfPdeProblem::constant(0.0, -40.0, 1.0, 1.0, 2.0, [](double) { return 1.0; }, 32, 1e-2);
    CHECK_THROWS_AS(solve_surface_pde(p), NumericalError);
}

TEST_CASE("kappa-uniform ratios for the diffusion-active family") {
    auto rep = kappa_scaling_report([](double k) { return moving_forcing_family(k); },
                                    {1.0, 0.25, 1.0 / 16, 1.0 / 64});
    CHECK(rep.rows.size() == 4);
    CHECK(rep.spread27 <= 2.0);
    CHECK(rep.spread28 <= 2.0);
    CHECK(std::abs(rep.slope27) <= 0.15);
    CHECK(std::abs(rep.slope28) <= 0.15);
    for (const auto& r : rep.rows) {
        CHECK(r.ratio27 > 0.0);
        CHECK(r.ratio28 > 0.0);
    }
}

TEST_CASE("degenerate report inputs") {
    // zero data: all ratios zero
    auto zero_family = [](double k) {
        return SurfPdeProblem::constant(1.0, 0.0, 1.0, k, 1.0, [](double) { return 0.0; }, 64);
    };
    auto rep = kappa_scaling_report(zero_family, {1.0, 0.25});
    for (const auto& r : rep.rows) {
        CHECK(r.ratio27 == 0.0);
        CHECK(r.ratio28 == 0.0);
    }
    // single kappa: one finite row
    auto single = kappa_scaling_report([](double k) { return moving_forcing_family(k); }, {1.0});
    CHECK(single.rows.size() == 1);
    CHECK(single.rows[0].ratio27 > 0.0);
}

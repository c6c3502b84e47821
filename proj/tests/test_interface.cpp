#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsac/interface.hpp"
#include "nsac/potential.hpp"

using namespace nsac;

TEST_CASE("circle level set: fitted radius accurate to interpolation order") {
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well);
    const int n = 128;
    const double h = 1.0 / n, eps = 1.0 / 32, R = 0.25;
    std::vector<double> c(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = (i + 0.5) * h, y = (j + 0.5) * h;
            double d = R - std::hypot(x - 0.5, y - 0.5);
            c[static_cast<size_t>(i) * n + j] = p.eval_theta(d / eps);
        }
    auto iface = extract_interface(c, n, n, h);
    CHECK(iface.radius == doctest::Approx(R).epsilon(20 * h * h / R));
    CHECK(iface.center.x == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(iface.center.y == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(iface.total_length == doctest::Approx(2 * M_PI * R).epsilon(0.01));
    CHECK(iface.fit_rms <= h * h / R * 10);
}

TEST_CASE("no crossing is an error") {
    std::vector<double> c(64 * 64, 1.0);
    CHECK_THROWS_AS(extract_interface(c, 64, 64, 1.0 / 64), ValidationError);
}

TEST_CASE("ellipse perimeter to one percent") {
    const int n = 256;
    const double h = 1.0 / n, a = 0.3, b = 0.2;
    std::vector<double> c(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = (i + 0.5) * h - 0.5, y = (j + 0.5) * h - 0.5;
            // signed level-set-like field, zero on the ellipse
            c[static_cast<size_t>(i) * n + j] = 1.0 - (x * x) / (a * a) - (y * y) / (b * b);
        }
    auto iface = extract_interface(c, n, n, h);
    // Ramanujan approximation as the oracle
    double hh = std::pow((a - b) / (a + b), 2);
    double per = M_PI * (a + b) * (1.0 + 3 * hh / (10.0 + std::sqrt(4.0 - 3 * hh)));
    CHECK(iface.total_length == doctest::Approx(per).epsilon(0.01));
}

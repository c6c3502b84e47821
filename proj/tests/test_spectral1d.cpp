#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsac/spectral1d.hpp"

using namespace nsac;

namespace {
struct Fixture {
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well);
};
}  // namespace

TEST_CASE("unit-scale operator: translation mode and first excited level") {
    Fixture fx;
    auto sp = assemble_and_solve(fx.well, fx.p, 20.0, 4096, 1.0, 4);

    CHECK(sp.lambda0() >= -1e-4);
    CHECK(sp.lambda0() <= 1e-3);
    CHECK(sp.lambda1() == doctest::Approx(0.75).epsilon(1.5e-2));

    // ground eigenvector is proportional to theta0' (sign-definite)
    const auto& v0 = sp.eigenvectors[0];
    double scale = 0.0;
    for (size_t i = 0; i < v0.size(); ++i)
        scale = std::max(scale, std::abs(v0[i]));
    for (size_t i = 0; i < v0.size(); ++i)
        CHECK(v0[i] >= -1e-8 * scale);
    // cos-angle against theta0'(x)
    double dot = 0, n1 = 0, n2 = 0;
    for (size_t i = 0; i < v0.size(); ++i) {
        double t = fx.p.eval_dtheta(sp.x[i]);
        dot += v0[i] * t; n1 += v0[i] * v0[i]; n2 += t * t;
    }
    CHECK(std::abs(dot) / std::sqrt(n1 * n2) == doctest::Approx(1.0).epsilon(1e-8));

    // orthonormality in L2(h)
    const double h = 2.0 * sp.L / sp.n;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            double d = 0;
            for (size_t i = 0; i < v0.size(); ++i)
                d += sp.eigenvectors[a][i] * sp.eigenvectors[b][i] * h;
            CHECK(d == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
        }

    // eigenvalues sorted ascending
    for (size_t j = 1; j < sp.eigenvalues.size(); ++j)
        CHECK(sp.eigenvalues[j] >= sp.eigenvalues[j - 1]);
}

TEST_CASE("eps scaling of the spectrum") {
    Fixture fx;
    auto ref = assemble_and_solve(fx.well, fx.p, 20.0, 4096, 1.0, 2);
    for (double eps : {0.5, 0.25, 0.1}) {
        auto sp = assemble_and_solve(fx.well, fx.p, 20.0 * eps, 4096, eps, 2);
        CHECK(eps * eps * sp.lambda1() == doctest::Approx(ref.lambda1()).epsilon(1e-2));
        CHECK(std::abs(eps * eps * sp.lambda0()) <= 1e-3);
    }
}

TEST_CASE("gap report asserts the uniform lower bound") {
    Fixture fx;
    auto rep = spectral_gap_report(fx.well, fx.p, {0.1, 0.05, 0.025});
    CHECK(rep.rows.size() == 3);
    CHECK(rep.lower_bound_holds);
    for (const auto& row : rep.rows) {
        CHECK(row.lambda0 >= -1e-3);
        CHECK(row.eps2_lambda1 == doctest::Approx(0.75).epsilon(2e-2));
    }
    CHECK(spectral_gap_report(fx.well, fx.p, {}).rows.empty());
    auto single = spectral_gap_report(fx.well, fx.p, {1.0});
    CHECK(single.rows.size() == 1);
    CHECK(single.rows[0].lambda1 == doctest::Approx(0.75).epsilon(1.5e-2));
}

TEST_CASE("decompose recovers an exact theta0' mode") {
    Fixture fx;
    const double eps = 0.5;
    const int n_rho = fx.p.n_points();
    const int n_s = 64;

    std::vector<double> th2(n_rho);
    for (int i = 0; i < n_rho; ++i) th2[i] = fx.p.dtheta[i] * fx.p.dtheta[i];
    const double beta = 1.0 / std::sqrt(simpson(th2, fx.p.h()));

    std::vector<double> psi(static_cast<size_t>(n_rho) * n_s);
    for (int j = 0; j < n_s; ++j) {
        double s = 2.0 * M_PI * j / n_s;
        for (int i = 0; i < n_rho; ++i)
            psi[static_cast<size_t>(i) * n_s + j] =
                std::sin(s) * beta * fx.p.dtheta[i] / std::sqrt(eps);
    }
    auto dec = decompose(psi, n_rho, n_s, fx.p, eps);
    CHECK(dec.beta == doctest::Approx(beta));
    for (int j = 0; j < n_s; ++j)
        CHECK(dec.Z[j] == doctest::Approx(std::sin(2.0 * M_PI * j / n_s)).epsilon(1e-6).scale(1.0));
    CHECK(max_abs(dec.psiR) <= 1e-12);
}

TEST_CASE("decompose: orthogonal input has zero amplitude") {
    Fixture fx;
    const int n_rho = fx.p.n_points(), n_s = 8;
    std::vector<double> psi(static_cast<size_t>(n_rho) * n_s);
    for (int j = 0; j < n_s; ++j)
        for (int i = 0; i < n_rho; ++i)
            psi[static_cast<size_t>(i) * n_s + j] = fx.p.d2theta[i];  // odd against even theta0'
    auto dec = decompose(psi, n_rho, n_s, fx.p, 1.0);
    for (double z : dec.Z) CHECK(std::abs(z) <= 1e-8);
}

TEST_CASE("decompose is a linear idempotent projection") {
    Fixture fx;
    const double eps = 0.3;
    const int n_rho = fx.p.n_points(), n_s = 32;
    std::vector<double> th2(n_rho);
    for (int i = 0; i < n_rho; ++i) th2[i] = fx.p.dtheta[i] * fx.p.dtheta[i];
    const double beta = 1.0 / std::sqrt(simpson(th2, fx.p.h()));

    std::vector<double> psi(static_cast<size_t>(n_rho) * n_s);
    for (int j = 0; j < n_s; ++j) {
        double s = 2.0 * M_PI * j / n_s;
        for (int i = 0; i < n_rho; ++i) {
            double rho = fx.p.rho[i];
            psi[static_cast<size_t>(i) * n_s + j] =
                beta * fx.p.dtheta[i] / std::sqrt(eps) + 0.1 * std::cos(s) * std::exp(-rho * rho);
        }
    }
    auto d1 = decompose(psi, n_rho, n_s, fx.p, eps);

    // reconstruct and decompose again: identical (Z, psiR)
    std::vector<double> rec(psi.size());
    for (int j = 0; j < n_s; ++j)
        for (int i = 0; i < n_rho; ++i)
            rec[static_cast<size_t>(i) * n_s + j] =
                d1.Z[j] * d1.beta * fx.p.dtheta[i] / std::sqrt(eps) +
                d1.psiR[static_cast<size_t>(i) * n_s + j];
    double recon_err = 0.0;
    for (size_t i = 0; i < psi.size(); ++i)
        recon_err = std::max(recon_err, std::abs(rec[i] - psi[i]));
    CHECK(recon_err <= 1e-12);

    auto d2 = decompose(rec, n_rho, n_s, fx.p, eps);
    for (int j = 0; j < n_s; ++j) CHECK(d2.Z[j] == doctest::Approx(d1.Z[j]).epsilon(1e-10).scale(1.0));
    double dr = 0.0;
    for (size_t i = 0; i < psi.size(); ++i)
        dr = std::max(dr, std::abs(d2.psiR[i] - d1.psiR[i]));
    CHECK(dr <= 1e-10);

    // per-s orthogonality of the remainder against theta0'
    std::vector<double> integ(n_rho);
    for (int j = 0; j < n_s; ++j) {
        for (int i = 0; i < n_rho; ++i)
            integ[i] = d1.psiR[static_cast<size_t>(i) * n_s + j] * fx.p.dtheta[i];
        CHECK(std::abs(simpson(integ, fx.p.h())) <= 1e-10);
    }

    // linearity against the constructed field
    for (int j = 0; j < n_s; ++j) {
        double s = 2.0 * M_PI * j / n_s;
        // the Gaussian bump has a theta0' component; Z = 1 + 0.1 cos(s) <bump, theta0'> sqrt(eps)/||theta0'||
        std::vector<double> bump(n_rho);
        for (int i = 0; i < n_rho; ++i)
            bump[i] = std::exp(-fx.p.rho[i] * fx.p.rho[i]) * fx.p.dtheta[i];
        double pb = simpson(bump, fx.p.h());
        double zexp = 1.0 + 0.1 * std::cos(s) * std::sqrt(eps) * pb * beta;
        CHECK(d1.Z[j] == doctest::Approx(zexp).epsilon(1e-6));
    }
}

TEST_CASE("grid mismatch is rejected") {
    Fixture fx;
    std::vector<double> psi(10, 0.0);
    CHECK_THROWS_AS(decompose(psi, 5, 2, fx.p, 1.0), ValidationError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nsac/study.hpp"

using namespace nsac;

namespace {
struct Fixture {
    DoubleWell well = DoubleWell::quartic();
    Profile p = compute_profile(well);

    ReferenceScenario scenario(double eps) const {
        ReferenceScenario sc;
        sc.kind = ReferenceScenario::Kind::mobility_corrected_bubble;
        sc.center0 = {0.5, 0.5};
        sc.R0 = 0.25;
        sc.eps = eps;
        sc.alpha = 0.5;
        return sc;
    }

    std::vector<double> reference_field(double t, const ReferenceScenario& sc, int n) const {
        std::vector<double> c(static_cast<size_t>(n) * n);
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c[static_cast<size_t>(i) * n + j] =
                    leading_order_c({(i + 0.5) * h, (j + 0.5) * h}, t, sc, p);
        return c;
    }
};
}  // namespace

TEST_CASE("feeding the reference back gives zero norms") {
    Fixture fx;
    const int n = 64;
    auto sc = fx.scenario(1.0 / 32);
    std::vector<std::pair<double, std::vector<double>>> snaps;
    for (double t : {0.0, 0.01, 0.02}) snaps.emplace_back(t, fx.reference_field(t, sc, n));
    auto rec = error_norms(snaps, n, n, 1.0 / n, sc, fx.p);
    CHECK(rec.linf_l2 <= 1e-12);
    CHECK(rec.grad_off <= 1e-12);
    CHECK(rec.grad_tau <= 1e-12);
    CHECK(rec.grad_tube <= 1e-12);
    CHECK(rec.radius_err <= 2e-4);  // marching-squares interpolation floor
}

TEST_CASE("one-cell shift reproduces the profile-displacement estimate") {
    Fixture fx;
    const int n = 64;
    const double h = 1.0 / n, eps = 1.0 / 32;
    auto sc = fx.scenario(eps);
    auto base = fx.reference_field(0.0, sc, n);
    // shift by one cell in x
    std::vector<double> shifted(base.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            shifted[static_cast<size_t>(i) * n + j] = base[static_cast<size_t>(((i + n - 1) % n)) * n + j];
    std::vector<std::pair<double, std::vector<double>>> snaps{{0.0, shifted}};
    auto rec = error_norms(snaps, n, n, h, sc, fx.p);
    // || theta((d+dx)/eps) - theta(d/eps) ||_L2 ~ dx eps^{-1/2} sqrt(sigma |Gamma|)
    double predict = h / std::sqrt(eps) * std::sqrt(fx.p.sigma * 2 * M_PI * sc.R0);
    CHECK(rec.linf_l2 == doctest::Approx(predict).epsilon(0.3));
}

TEST_CASE("pure-noise field: norms match an independent quadrature") {
    Fixture fx;
    const int n = 64;
    const double h = 1.0 / n;
    auto sc = fx.scenario(1.0 / 32);
    auto base = fx.reference_field(0.0, sc, n);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1e-3, 1e-3);
    std::vector<double> noise(base.size());
    for (double& v : noise) v = unif(rng);
    std::vector<double> field(base.size());
    for (size_t k = 0; k < base.size(); ++k) field[k] = base[k] + noise[k];
    std::vector<std::pair<double, std::vector<double>>> snaps{{0.0, field}};
    auto rec = error_norms(snaps, n, n, h, sc, fx.p);

    double l2 = 0.0;
    for (double v : noise) l2 += v * v;
    CHECK(rec.linf_l2 == doctest::Approx(std::sqrt(l2 * h * h)).epsilon(1e-10));
}

TEST_CASE("empty study returns an empty report") {
    Fixture fx;
    StudyConfig cfg;
    cfg.eps_list = {};
    auto res = convergence_study(cfg, fx.well, fx.p);
    CHECK(res.corrected.records.empty());
    CHECK(!res.corrected.has_fits);
    StudyConfig bad;
    bad.eps_list = {0.1, 0.2};
    CHECK_THROWS_AS(convergence_study(bad, fx.well, fx.p), ValidationError);
}

TEST_CASE("two-eps AC-only study: corrected reference beats pure transport") {
    Fixture fx;
    StudyConfig cfg;
    cfg.eps_list = {1.0 / 16, 1.0 / 32};
    cfg.T = 0.03;
    cfg.ac_only = true;
    cfg.snapshots = 7;
    auto res = convergence_study(cfg, fx.well, fx.p);
    REQUIRE(res.corrected.records.size() == 2);
    for (size_t k = 0; k < 2; ++k)
        CHECK(res.corrected.records[k].linf_l2 < res.transported.records[k].linf_l2);
    // corrected errors decay with eps, transported ones stall
    CHECK(res.corrected.records[1].linf_l2 < 0.7 * res.corrected.records[0].linf_l2);
    CHECK(res.transported.records[1].linf_l2 > 0.5 * res.transported.records[0].linf_l2);
}

TEST_CASE("mobility drift rates at a coarse resolution") {
    Fixture fx;
    auto rep = mobility_comparison(1.0 / 16, {0.0, 0.5}, fx.well, fx.p, 0.3, 2, true);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) CHECK(row.rel_err <= 0.15);
    // drift ratio between alpha = 0 and alpha = 1/2 is eps^{-1/2}
    double ratio = rep.rows[0].drift / rep.rows[1].drift;
    CHECK(ratio == doctest::Approx(std::pow(1.0 / 16, -0.5)).epsilon(0.2));
}

TEST_CASE("order fit is invariant under common rescaling of the errors") {
    std::vector<NormRecord> recs(3);
    double eps[3] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    for (int k = 0; k < 3; ++k) {
        recs[k].eps = eps[k];
        recs[k].linf_l2 = 3.7 * std::pow(eps[k], 0.83);
        recs[k].grad_off = recs[k].grad_tau = recs[k].grad_tube = recs[k].linf_l2;
    }
    auto rep1 = fit_report(recs);
    for (auto& r : recs) {
        r.linf_l2 *= 123.0;
        r.grad_off *= 123.0;
        r.grad_tau *= 123.0;
        r.grad_tube *= 123.0;
    }
    auto rep2 = fit_report(recs);
    CHECK(rep1.fits.linf_l2.slope == doctest::Approx(0.83).epsilon(1e-10));
    CHECK(rep2.fits.linf_l2.slope == doctest::Approx(rep1.fits.linf_l2.slope).epsilon(1e-12));
}

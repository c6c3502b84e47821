#include "nsac/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "nsac/curve.hpp"
#include "nsac/interface.hpp"

namespace nsac {

int worker_count() {
    if (const char* env = std::getenv("NSAC_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::max(1u, std::min(hw, 4u));
}

NormRecord error_norms(const std::vector<std::pair<double, std::vector<double>>>& snapshots,
                       int nx, int ny, double h, const ReferenceScenario& scenario,
                       const Profile& profile) {
    if (snapshots.empty()) throw ValidationError("error_norms: no snapshots");
    NormRecord rec;
    rec.eps = scenario.eps;
    rec.alpha = scenario.alpha;
    const double delta = scenario.cutoff_delta();
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    auto wrap = [](int k, int n) { return (k % n + n) % n; };

    // per-snapshot squared space integrals, integrated in time by trapezoid
    std::vector<double> times, off_sq, tau_sq, tube_sq;
    for (const auto& [t, c] : snapshots) {
        std::vector<double> ref(c.size()), diff(c.size());
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                Vec2 x{(i + 0.5) * h, (j + 0.5) * h};
                ref[id(i, j)] = leading_order_c(x, t, scenario, profile);
                diff[id(i, j)] = c[id(i, j)] - ref[id(i, j)];
            }
        double l2 = 0.0;
        for (double d : diff) l2 += d * d;
        rec.linf_l2 = std::max(rec.linf_l2, std::sqrt(l2 * h * h));

        Curve curve = scenario.make_curve(t);
        double s_off = 0.0, s_tau = 0.0, s_tube = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                int ip = wrap(i + 1, nx), im = wrap(i - 1, nx);
                int jp = wrap(j + 1, ny), jm = wrap(j - 1, ny);
                double gx = (diff[id(ip, j)] - diff[id(im, j)]) / (2 * h);
                double gy = (diff[id(i, jp)] - diff[id(i, jm)]) / (2 * h);
                Vec2 x{(i + 0.5) * h, (j + 0.5) * h};
                double d = scenario.signed_dist(x, t);
                double g2 = gx * gx + gy * gy;
                if (std::abs(d) >= delta) s_off += g2;
                if (std::abs(d) < 2 * delta) {
                    s_tube += g2;
                    Vec2 n = signed_distance(curve, x).normal;
                    double gn = gx * n.x + gy * n.y;
                    s_tau += g2 - gn * gn;
                }
            }
        times.push_back(t);
        off_sq.push_back(s_off * h * h);
        tau_sq.push_back(std::max(s_tau, 0.0) * h * h);
        tube_sq.push_back(s_tube * h * h);

        try {
            auto iface = extract_interface(c, nx, ny, h);
            rec.radius_err = std::max(rec.radius_err,
                                      std::abs(iface.radius - scenario.radius(t)));
        } catch (const ValidationError&) {
            // interface vanished; leave the radius error untouched
        }
    }
    auto time_integral = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (size_t k = 1; k < times.size(); ++k)
            acc += 0.5 * (times[k] - times[k - 1]) * (f[k] + f[k - 1]);
        return acc;
    };
    const double e14 = std::pow(scenario.eps, 0.25);
    rec.grad_off = e14 * std::sqrt(time_integral(off_sq));
    rec.grad_tau = e14 * std::sqrt(time_integral(tau_sq));
    rec.grad_tube = scenario.eps * std::sqrt(time_integral(tube_sq));
    return rec;
}

ErrorReport fit_report(std::vector<NormRecord> records) {
    ErrorReport rep;
    rep.records = std::move(records);
    if (rep.records.size() < 2) return rep;
    std::vector<double> eps;
    for (const auto& r : rep.records) eps.push_back(r.eps);
    auto fit_of = [&](auto member) {
        std::vector<double> vals;
        for (const auto& r : rep.records) vals.push_back(std::max(r.*member, 1e-300));
        return fit_order(eps, vals);
    };
    rep.fits.linf_l2 = fit_of(&NormRecord::linf_l2);
    rep.fits.grad_off = fit_of(&NormRecord::grad_off);
    rep.fits.grad_tau = fit_of(&NormRecord::grad_tau);
    rep.fits.grad_tube = fit_of(&NormRecord::grad_tube);
    rep.has_fits = true;
    return rep;
}

namespace {

struct RunOutput {
    double eps;
    int nx;
    double h;
    std::vector<std::pair<double, std::vector<double>>> snapshots;
};

RunOutput run_one(double eps, const StudyConfig& cfg, const DoubleWell& well,
                  const Profile& profile) {
    SimConfig sim;
    int nx = static_cast<int>(std::lround(cfg.resolution_factor / eps));
    // round to the next power of two for the periodic solver
    int p2 = 1;
    while (p2 < nx) p2 <<= 1;
    sim.nx = sim.ny = p2;
    sim.eps = eps;
    sim.alpha = cfg.alpha;
    sim.nu_plus = cfg.nu_plus;
    sim.nu_minus = cfg.nu_minus;
    sim.T = cfg.T;
    sim.ac_only = cfg.ac_only;
    sim.center = cfg.center;
    sim.radius = cfg.R0;
    sim.velocity = cfg.U;
    sim.out_interval = cfg.T / std::max(1, cfg.snapshots - 1);
    NsacSolver solver(sim, well, profile);
    auto res = solver.run();
    return {eps, sim.nx, sim.h(), std::move(res.c_snapshots)};
}

}  // namespace

StudyResult convergence_study(const StudyConfig& cfg, const DoubleWell& well,
                              const Profile& profile) {
    StudyResult out;
    if (cfg.eps_list.empty()) return out;
    for (size_t i = 1; i < cfg.eps_list.size(); ++i)
        if (cfg.eps_list[i] >= cfg.eps_list[i - 1])
            throw ValidationError("convergence_study: eps_list must be descending");

    const int workers = worker_count();
    std::vector<RunOutput> runs(cfg.eps_list.size());
    for (size_t base = 0; base < cfg.eps_list.size(); base += workers) {
        std::vector<std::future<RunOutput>> batch;
        for (size_t k = base; k < std::min(base + workers, cfg.eps_list.size()); ++k)
            batch.push_back(std::async(std::launch::async, run_one, cfg.eps_list[k],
                                       std::cref(cfg), std::cref(well), std::cref(profile)));
        for (size_t k = 0; k < batch.size(); ++k) runs[base + k] = batch[k].get();
    }

    std::vector<NormRecord> corr, trans;
    for (const auto& run : runs) {
        ReferenceScenario sc;
        sc.center0 = cfg.center;
        sc.R0 = cfg.R0;
        sc.U = cfg.U;
        sc.eps = run.eps;
        sc.alpha = cfg.alpha;
        sc.kind = ReferenceScenario::Kind::mobility_corrected_bubble;
        corr.push_back(error_norms(run.snapshots, run.nx, run.nx, run.h, sc, profile));
        sc.kind = ReferenceScenario::Kind::transported_bubble;
        trans.push_back(error_norms(run.snapshots, run.nx, run.nx, run.h, sc, profile));
    }
    out.corrected = fit_report(std::move(corr));
    out.transported = fit_report(std::move(trans));
    return out;
}

MobilityReport mobility_comparison(double eps, const std::vector<double>& alpha_list,
                                   const DoubleWell& well, const Profile& profile, double R0,
                                   int resolution_factor, bool ac_only) {
    MobilityReport rep;
    rep.eps = eps;
    for (double alpha : alpha_list) {
        const double m = std::pow(eps, alpha);
        SimConfig sim;
        int nx = static_cast<int>(std::lround(resolution_factor / eps));
        int p2 = 1;
        while (p2 < nx) p2 <<= 1;
        sim.nx = sim.ny = p2;
        sim.eps = eps;
        sim.alpha = alpha;
        sim.radius = R0;
        sim.center = {0.5, 0.5};
        sim.ac_only = ac_only;
        sim.T = 0.25 * R0 * R0 / (2.0 * m);  // shrink R^2 by ~25%
        sim.out_interval = sim.T / 20.0;
        NsacSolver solver(sim, well, profile);
        auto res = solver.run();

        std::vector<double> ts, r2s;
        for (const auto& row : res.diagnostics) {
            if (row.t < 0.1 * sim.T || row.radius <= 0.0) continue;  // skip the transient
            ts.push_back(row.t);
            r2s.push_back(row.radius * row.radius);
        }
        if (ts.size() < 3) throw NumericalError("mobility_comparison: too few usable samples");
        MobilityRow out;
        out.alpha = alpha;
        out.drift = fit_line(ts, r2s).slope;
        out.target = -2.0 * m;
        out.rel_err = std::abs(out.drift - out.target) / std::abs(out.target);
        rep.rows.push_back(out);
    }
    return rep;
}

}  // namespace nsac

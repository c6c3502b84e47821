#include "nsac/surface_pde.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/fft.hpp"

namespace nsac {

SurfPdeProblem SurfPdeProblem::constant(double a, double b, double c, double kappa, double T,
                                        std::function<double(double)> h0, int n, double dt) {
    SurfPdeProblem p;
    p.a = [a](double, double) { return a; };
    p.b = [b](double, double) { return b; };
    p.c = [c](double, double) { return c; };
    p.g = [](double, double) { return 0.0; };
    p.h0 = std::move(h0);
    p.kappa = kappa;
    p.T = T;
    p.n = n;
    p.dt = dt;
    return p;
}

namespace {

double l2_norm(const std::vector<double>& v, double ds) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * ds);
}

}  // namespace

SurfPdeSolution solve_surface_pde(const SurfPdeProblem& problem, int n_snapshots) {
    const int n = problem.n;
    if (n < 8 || (n & (n - 1)) != 0)
        throw ValidationError("solve_surface_pde: n must be a power of two >= 8");
    if (problem.kappa <= 0.0 || problem.kappa > 1.0)
        throw ValidationError("solve_surface_pde: kappa must lie in (0, 1]");
    const double ds = 2.0 * M_PI / n;

    std::vector<double> svals(n);
    for (int i = 0; i < n; ++i) svals[i] = i * ds;

    // coefficient bounds for the stability-limited step
    double amax = 0.0, bmax = 0.0, cmin = 1e300;
    for (int i = 0; i < n; ++i)
        for (double t : {0.0, 0.5 * problem.T, problem.T}) {
            amax = std::max(amax, std::abs(problem.a(svals[i], t)));
            bmax = std::max(bmax, std::abs(problem.b(svals[i], t)));
            cmin = std::min(cmin, problem.c(svals[i], t));
        }
    if (cmin <= 0.0) throw ValidationError("solve_surface_pde: c must be bounded below by c0 > 0");

    double dt = problem.dt;
    if (dt <= 0.0) {
        dt = 1e30;
        if (amax > 0) dt = std::min(dt, 0.5 * ds / amax);
        if (bmax > 0) dt = std::min(dt, 0.5 / bmax);
        // explicit spectral advection rides on the implicit diffusion damping
        if (amax > 0) dt = std::min(dt, 2.0 * problem.kappa * cmin / (amax * amax));
        if (dt == 1e30) dt = problem.T / 100.0;
    }
    int nsteps = std::max(1, static_cast<int>(std::ceil(problem.T / dt)));
    dt = problem.T / nsteps;

    Fft1D fft(n);
    std::vector<double> h(n), gval(n), aval(n), bval(n), cval(n);
    for (int i = 0; i < n; ++i) h[i] = problem.h0(svals[i]);

    SurfPdeSolution sol;
    sol.n = n;
    sol.T = problem.T;
    sol.dt = dt;
    sol.kappa = problem.kappa;
    sol.h0_l2 = l2_norm(h, ds);
    {
        auto hs = fft.deriv(h, 1);
        sol.h0_h1 = std::sqrt(sol.h0_l2 * sol.h0_l2 + std::pow(l2_norm(hs, ds), 2));
    }

    const int snap_every = std::max(1, nsteps / std::max(1, n_snapshots - 1));
    double int_h1 = 0.0, int_h2 = 0.0, int_g_l1 = 0.0, int_g_l2 = 0.0;

    auto record = [&](double t, bool boundary) {
        auto hs = fft.deriv(h, 1);
        auto hss = fft.deriv(h, 2);
        double l2 = l2_norm(h, ds), l2s = l2_norm(hs, ds), l2ss = l2_norm(hss, ds);
        double h1sq = l2 * l2 + l2s * l2s;
        double h2sq = h1sq + l2ss * l2ss;
        sol.sup_l2 = std::max(sol.sup_l2, l2);
        sol.sup_h1 = std::max(sol.sup_h1, std::sqrt(h1sq));
        for (int i = 0; i < n; ++i) gval[i] = problem.g(svals[i], t);
        double gl2 = l2_norm(gval, ds);
        double w = boundary ? 0.5 : 1.0;  // trapezoid in time
        int_h1 += w * dt * h1sq;
        int_h2 += w * dt * h2sq;
        int_g_l1 += w * dt * gl2;
        int_g_l2 += w * dt * gl2 * gl2;
    };

    record(0.0, true);
    sol.snapshots.emplace_back(0.0, h);

    for (int step = 0; step < nsteps; ++step) {
        const double t = step * dt;
        const double t1 = (step + 1) * dt;
        for (int i = 0; i < n; ++i) {
            aval[i] = problem.a(svals[i], t);
            bval[i] = problem.b(svals[i], t);
            gval[i] = problem.g(svals[i], t);
            cval[i] = problem.c(svals[i], t1);  // implicit side at the new level
        }
        auto hs = fft.deriv(h, 1);
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i)
            rhs[i] = h[i] + dt * (gval[i] - aval[i] * hs[i] - bval[i] * h[i]);

        double cbar = 0.0, cdev = 0.0;
        for (double c : cval) cbar += c;
        cbar /= n;
        for (double c : cval) cdev = std::max(cdev, std::abs(c - cbar));

        if (cdev <= 1e-13 * cbar) {
            h = fft.solve_implicit_diffusion(rhs, dt * problem.kappa * cbar);
        } else {
            // fixed point with the mean-coefficient spectral preconditioner
            std::vector<double> iter = fft.solve_implicit_diffusion(rhs, dt * problem.kappa * cbar);
            bool done = false;
            for (int it = 0; it < 200; ++it) {
                auto iss = fft.deriv(iter, 2);
                std::vector<double> corr(n);
                for (int i = 0; i < n; ++i)
                    corr[i] = rhs[i] + dt * problem.kappa * (cval[i] - cbar) * iss[i];
                auto next = fft.solve_implicit_diffusion(corr, dt * problem.kappa * cbar);
                double diff = 0.0, scale = 0.0;
                for (int i = 0; i < n; ++i) {
                    diff = std::max(diff, std::abs(next[i] - iter[i]));
                    scale = std::max(scale, std::abs(next[i]));
                }
                iter = std::move(next);
                if (diff <= 1e-12 * (1.0 + scale)) { done = true; break; }
            }
            if (!done)
                throw NumericalError("solve_surface_pde: variable-coefficient solve stalled");
            h = std::move(iter);
        }

        double hmax = max_abs(h);
        if (!std::isfinite(hmax) || hmax > 1e6)
            throw NumericalError("solve_surface_pde: blow-up detected at t = " + std::to_string(t1));

        record(t1, step + 1 == nsteps);
        if ((step + 1) % snap_every == 0 || step + 1 == nsteps)
            sol.snapshots.emplace_back(t1, h);
    }

    sol.h_final = h;
    sol.l2t_h1 = std::sqrt(int_h1);
    sol.l2t_h2 = std::sqrt(int_h2);
    sol.g_l1_l2 = int_g_l1;
    sol.g_l2_l2 = std::sqrt(int_g_l2);
    return sol;
}

KappaReport kappa_scaling_report(const std::function<SurfPdeProblem(double)>& family,
                                 const std::vector<double>& kappa_list) {
    KappaReport rep;
    for (double kappa : kappa_list) {
        if (kappa <= 0.0 || kappa > 1.0)
            throw ValidationError("kappa_scaling_report: kappa must lie in (0, 1]");
        auto sol = solve_surface_pde(family(kappa));
        KappaRow row;
        row.kappa = kappa;
        row.lhs27 = sol.lhs_energy();
        row.rhs27 = sol.rhs_energy();
        row.lhs28 = sol.lhs_smooth();
        row.rhs28 = sol.rhs_smooth();
        row.ratio27 = row.lhs27 / std::max(row.rhs27, 1e-300);
        row.ratio28 = row.lhs28 / std::max(row.rhs28, 1e-300);
        rep.rows.push_back(row);
    }
    if (rep.rows.size() >= 2) {
        double mn27 = 1e300, mx27 = 0, mn28 = 1e300, mx28 = 0;
        std::vector<double> lk, l27, l28;
        for (const auto& r : rep.rows) {
            mn27 = std::min(mn27, r.ratio27); mx27 = std::max(mx27, r.ratio27);
            mn28 = std::min(mn28, r.ratio28); mx28 = std::max(mx28, r.ratio28);
            if (r.ratio27 > 0 && r.ratio28 > 0) {
                lk.push_back(std::log(r.kappa));
                l27.push_back(std::log(r.ratio27));
                l28.push_back(std::log(r.ratio28));
            }
        }
        rep.spread27 = mn27 > 0 ? mx27 / mn27 : 0.0;
        rep.spread28 = mn28 > 0 ? mx28 / mn28 : 0.0;
        if (lk.size() == rep.rows.size()) {
            rep.slope27 = fit_line(lk, l27).slope;
            rep.slope28 = fit_line(lk, l28).slope;
        }
    }
    return rep;
}

SurfPdeProblem moving_forcing_family(double kappa, int n, double T) {
    SurfPdeProblem p;
    const int m = std::max(1, static_cast<int>(std::lround(1.0 / std::sqrt(kappa))));
    p.a = [](double, double) { return 1.0; };
    p.b = [](double, double) { return 0.0; };
    p.c = [](double, double) { return 1.0; };
    p.g = [m](double s, double t) { return std::sin(m * (s - t)); };
    p.h0 = [](double) { return 0.0; };
    p.kappa = kappa;
    p.T = T;
    p.n = n;
    return p;
}

}  // namespace nsac

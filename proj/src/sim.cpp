#include "nsac/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "nsac/fft.hpp"

namespace nsac {

void SimConfig::validate() const {
    if (nx < 8 || ny < 8) throw ValidationError("config: grid too small");
    if (std::abs(Lx / nx - Ly / ny) > 1e-12 * Lx)
        throw ValidationError("config: cells must be square (Lx/nx == Ly/ny)");
    if (eps <= 0) throw ValidationError("config: eps must be positive");
    if (h() > eps + 1e-15)
        throw PhysicsValidationError("config: interface under-resolved (h > eps)");
    if (nu_plus <= 0 || nu_minus <= 0) throw ValidationError("config: viscosities must be positive");
    if (T < 0) throw ValidationError("config: negative horizon");
    if (boundary == Boundary::periodic) {
        if ((nx & (nx - 1)) || (ny & (ny - 1)))
            throw ValidationError("config: periodic mode needs power-of-two grid");
    }
    if (boundary == Boundary::walls && init == InitKind::circle) {
        double margin = std::min({center.x, Lx - center.x, center.y, Ly - center.y}) - radius;
        if (margin < 3.0 * (delta_cut > 0 ? delta_cut : radius / 3.0))
            throw ValidationError("config: bubble too close to the walls");
    }
}

namespace {

// conjugate gradients with a diagonal preconditioner, matrix-free
int pcg(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
        const std::vector<double>& rhs, std::vector<double>& x, double diag, double tol_inf,
        int max_iter, bool mean_free) {
    const size_t n = rhs.size();
    auto project = [&](std::vector<double>& v) {
        if (!mean_free) return;
        double m = 0;
        for (double a : v) m += a;
        m /= n;
        for (double& a : v) a -= m;
    };
    std::vector<double> r = rhs, z(n), q(n);
    x.assign(n, 0.0);
    project(r);
    for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag;
    std::vector<double> p = z;
    double rz = 0;
    for (size_t i = 0; i < n; ++i) rz += r[i] * z[i];
    for (int it = 0; it < max_iter; ++it) {
        double rinf = 0;
        for (double a : r) rinf = std::max(rinf, std::abs(a));
        if (rinf <= tol_inf) return it;
        apply(p, q);
        double pq = 0;
        for (size_t i = 0; i < n; ++i) pq += p[i] * q[i];
        double alpha = rz / pq;
        for (size_t i = 0; i < n; ++i) { x[i] += alpha * p[i]; r[i] -= alpha * q[i]; }
        project(r);
        double rz_new = 0;
        for (size_t i = 0; i < n; ++i) { z[i] = r[i] / diag; rz_new += r[i] * z[i]; }
        double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NumericalError("pcg: no convergence");
}

}  // namespace

NsacSolver::NsacSolver(SimConfig cfg, const DoubleWell& well, const Profile& profile)
    : cfg_(cfg), well_(well), profile_(&profile) {
    cfg_.validate();
    double fpp_max = 0.0;
    for (double c = -1.2; c <= 1.2; c += 0.01)
        fpp_max = std::max(fpp_max, std::abs(well_.d2f(c)));
    const double m = cfg_.mobility();
    stab_ = m / (cfg_.eps * cfg_.eps) * fpp_max;

    const double h = cfg_.h();
    const double nu_max = std::max(cfg_.nu_plus, cfg_.nu_minus);
    double dt = cfg_.dt;
    if (dt <= 0) {
        dt = 1e30;
        if (!cfg_.ac_only) {
            dt = std::min(dt, 0.9 * h * h / (4.0 * nu_max));  // binding in practice
            dt = std::min(dt, 0.5 * std::sqrt(h * h * h / (2.0 * M_PI * profile.sigma)));
        }
        if (m > 0) dt = std::min(dt, cfg_.ac_accuracy * cfg_.eps * cfg_.eps / m);
        double umax = cfg_.velocity.norm();
        if (umax > 0) dt = std::min(dt, 0.3 * h / umax);
        if (dt == 1e30) dt = cfg_.T > 0 ? cfg_.T / 100 : 1e-3;
    } else if (!cfg_.ac_only && dt > h * h / (4.0 * nu_max)) {
        throw ValidationError("config: dt violates the viscous stability bound");
    }
    dt_ = dt;

    if (cfg_.boundary == SimConfig::Boundary::periodic)
        poisson_ = std::make_unique<Poisson2D>(cfg_.nx, cfg_.ny, h);
}

NsacSolver::~NsacSolver() = default;

SimState NsacSolver::init_state() const {
    SimState s;
    s.nx = cfg_.nx;
    s.ny = cfg_.ny;
    s.h = cfg_.h();
    s.t = 0.0;
    s.walls = cfg_.boundary == SimConfig::Boundary::walls;
    const int nx = s.nx, ny = s.ny;
    s.c.assign(static_cast<size_t>(nx) * ny, -1.0);
    s.p.assign(static_cast<size_t>(nx) * ny, 0.0);
    if (s.walls) {
        s.u.assign(static_cast<size_t>(nx + 1) * ny, 0.0);
        s.v.assign(static_cast<size_t>(nx) * (ny + 1), 0.0);
    } else {
        s.u.assign(static_cast<size_t>(nx) * ny, cfg_.velocity.x);
        s.v.assign(static_cast<size_t>(nx) * ny, cfg_.velocity.y);
    }

    if (cfg_.init == SimConfig::InitKind::circle) {
        ReferenceScenario sc;
        sc.kind = ReferenceScenario::Kind::stationary_bubble;
        sc.center0 = cfg_.center;
        sc.R0 = cfg_.radius;
        sc.eps = cfg_.eps;
        sc.delta = cfg_.delta_cut;
        sc.box = {cfg_.Lx, cfg_.Ly};
        sc.periodic_wrap = !s.walls;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                s.c[static_cast<size_t>(i) * ny + j] =
                    leading_order_c({(i + 0.5) * s.h, (j + 0.5) * s.h}, 0.0, sc, *profile_);
    } else if (cfg_.init == SimConfig::InitKind::stripe) {
        // nearest periodic images keep the tails smooth across the wrap
        for (int i = 0; i < nx; ++i) {
            double x = (i + 0.5) * s.h;
            double val = -1.0;
            for (int k = -1; k <= 1; ++k)
                val += profile_->eval_theta((x - cfg_.stripe_x0 + k * cfg_.Lx) / cfg_.eps) -
                       profile_->eval_theta((x - cfg_.stripe_x1 + k * cfg_.Lx) / cfg_.eps);
            for (int j = 0; j < ny; ++j) s.c[static_cast<size_t>(i) * ny + j] = val;
        }
    }  // uniform: c = -1 everywhere

    if (cfg_.noise_amp > 0) {
        std::mt19937 rng(cfg_.noise_seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (double& c : s.c) c += cfg_.noise_amp * unif(rng);
    }
    return s;
}

void NsacSolver::capillary_force(const std::vector<double>& c, std::vector<double>& fu,
                                 std::vector<double>& fv) const {
    const int nx = cfg_.nx, ny = cfg_.ny;
    const double h = cfg_.h(), eps = cfg_.eps;
    if (cfg_.boundary != SimConfig::Boundary::periodic)
        throw ValidationError("capillary_force: periodic fields expected here");
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    auto wrap = [](int k, int n) { return (k % n + n) % n; };
    std::vector<double> lap(static_cast<size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int ip = wrap(i + 1, nx), im = wrap(i - 1, nx);
            int jp = wrap(j + 1, ny), jm = wrap(j - 1, ny);
            lap[id(i, j)] = (c[id(ip, j)] + c[id(im, j)] + c[id(i, jp)] + c[id(i, jm)] -
                             4.0 * c[id(i, j)]) / (h * h);
        }
    fu.assign(static_cast<size_t>(nx) * ny, 0.0);
    fv.assign(static_cast<size_t>(nx) * ny, 0.0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int im = wrap(i - 1, nx), jm = wrap(j - 1, ny);
            fu[id(i, j)] = -eps * 0.5 * (lap[id(im, j)] + lap[id(i, j)]) *
                           (c[id(i, j)] - c[id(im, j)]) / h;
            fv[id(i, j)] = -eps * 0.5 * (lap[id(i, jm)] + lap[id(i, j)]) *
                           (c[id(i, j)] - c[id(i, jm)]) / h;
        }
}

void NsacSolver::step(SimState& s) const {
    if (s.walls)
        step_walls(s);
    else
        step_periodic(s);
    s.t += dt_;
    // cheap sanity guard
    if (!std::isfinite(s.c[0]) || std::abs(s.c[0]) > 10.0)
        throw NumericalError("step: order parameter blow-up");
}

void NsacSolver::step_periodic(SimState& s) const {
    const int nx = s.nx, ny = s.ny;
    const double h = s.h, dt = dt_, eps = cfg_.eps, m = cfg_.mobility();
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    auto wrap = [](int k, int n) { return (k % n + n) % n; };

    // ---- Allen-Cahn update (advection explicit upwind-2, reaction split) ----
    std::vector<double> Fx(s.c.size()), Fy(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            // x-face i between cells i-1 and i
            double uf = s.u[id(i, j)];
            int i1 = wrap(i - 1, nx), i2 = wrap(i - 2, nx), ip = wrap(i + 1, nx);
            double cf = uf >= 0 ? 1.5 * s.c[id(i1, j)] - 0.5 * s.c[id(i2, j)]
                                : 1.5 * s.c[id(i, j)] - 0.5 * s.c[id(ip, j)];
            Fx[id(i, j)] = uf * cf;
            double vf = s.v[id(i, j)];
            int j1 = wrap(j - 1, ny), j2 = wrap(j - 2, ny), jp = wrap(j + 1, ny);
            cf = vf >= 0 ? 1.5 * s.c[id(i, j1)] - 0.5 * s.c[id(i, j2)]
                         : 1.5 * s.c[id(i, j)] - 0.5 * s.c[id(i, jp)];
            Fy[id(i, j)] = vf * cf;
        }
    std::vector<double> rhs(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
            double adv = (Fx[id(ip, j)] - Fx[id(i, j)]) / h + (Fy[id(i, jp)] - Fy[id(i, j)]) / h;
            double cc = s.c[id(i, j)];
            rhs[id(i, j)] = cc + dt * (-adv - m / (eps * eps) * well_.df(cc) + stab_ * cc);
        }
    std::vector<double> c_new;
    poisson_->solve_helmholtz(rhs, 1.0 + dt * stab_, dt * m, c_new);
    s.c = std::move(c_new);

    if (cfg_.ac_only) return;

    // ---- momentum update with nu(c), capillary force, projection ----
    std::vector<double> nu_c(s.c.size()), nu_k(s.c.size()), lap(s.c.size());
    ViscosityModel visc = ViscosityModel::make(cfg_.nu_plus, cfg_.nu_minus);
    for (size_t k = 0; k < s.c.size(); ++k) nu_c[k] = visc.nu(s.c[k]);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int im = wrap(i - 1, nx), jm = wrap(j - 1, ny);
            nu_k[id(i, j)] = 0.25 * (nu_c[id(i, j)] + nu_c[id(im, j)] + nu_c[id(i, jm)] +
                                     nu_c[id(im, jm)]);
            int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
            lap[id(i, j)] = (s.c[id(ip, j)] + s.c[id(im, j)] + s.c[id(i, jp)] + s.c[id(i, jm)] -
                             4.0 * s.c[id(i, j)]) / (h * h);
        }

    std::vector<double> txx(s.c.size()), tyy(s.c.size()), txy(s.c.size());
    std::vector<double> ucen(s.c.size()), vcen(s.c.size()), cor(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
            int im = wrap(i - 1, nx), jm = wrap(j - 1, ny);
            txx[id(i, j)] = 2.0 * nu_c[id(i, j)] * (s.u[id(ip, j)] - s.u[id(i, j)]) / h;
            tyy[id(i, j)] = 2.0 * nu_c[id(i, j)] * (s.v[id(i, jp)] - s.v[id(i, j)]) / h;
            txy[id(i, j)] = nu_k[id(i, j)] * ((s.u[id(i, j)] - s.u[id(i, jm)]) / h +
                                              (s.v[id(i, j)] - s.v[id(im, j)]) / h);
            ucen[id(i, j)] = 0.5 * (s.u[id(i, j)] + s.u[id(ip, j)]);
            vcen[id(i, j)] = 0.5 * (s.v[id(i, j)] + s.v[id(i, jp)]);
            cor[id(i, j)] = 0.5 * (s.u[id(i, j)] + s.u[id(i, jm)]) *
                            0.5 * (s.v[id(i, j)] + s.v[id(im, j)]);
        }

    std::vector<double> us(s.u.size()), vs(s.v.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int im = wrap(i - 1, nx), jp = wrap(j + 1, ny), jm = wrap(j - 1, ny), ip = wrap(i + 1, nx);
            double adv_u = (ucen[id(i, j)] * ucen[id(i, j)] - ucen[id(im, j)] * ucen[id(im, j)]) / h +
                           (cor[id(i, jp)] - cor[id(i, j)]) / h;
            double dtau_u = (txx[id(i, j)] - txx[id(im, j)]) / h +
                            (txy[id(i, jp)] - txy[id(i, j)]) / h;
            double fcap_u = -eps * 0.5 * (lap[id(im, j)] + lap[id(i, j)]) *
                            (s.c[id(i, j)] - s.c[id(im, j)]) / h;
            us[id(i, j)] = s.u[id(i, j)] + dt * (-adv_u + dtau_u + fcap_u);

            double adv_v = (cor[id(ip, j)] - cor[id(i, j)]) / h +
                           (vcen[id(i, j)] * vcen[id(i, j)] - vcen[id(i, jm)] * vcen[id(i, jm)]) / h;
            double dtau_v = (txy[id(ip, j)] - txy[id(i, j)]) / h +
                            (tyy[id(i, j)] - tyy[id(i, jm)]) / h;
            double fcap_v = -eps * 0.5 * (lap[id(i, jm)] + lap[id(i, j)]) *
                            (s.c[id(i, j)] - s.c[id(i, jm)]) / h;
            vs[id(i, j)] = s.v[id(i, j)] + dt * (-adv_v + dtau_v + fcap_v);
        }

    std::vector<double> div(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
            div[id(i, j)] = ((us[id(ip, j)] - us[id(i, j)]) + (vs[id(i, jp)] - vs[id(i, j)])) / (h * dt);
        }
    std::vector<double> p;
    poisson_->solve_poisson(div, p);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int im = wrap(i - 1, nx), jm = wrap(j - 1, ny);
            s.u[id(i, j)] = us[id(i, j)] - dt * (p[id(i, j)] - p[id(im, j)]) / h;
            s.v[id(i, j)] = vs[id(i, j)] - dt * (p[id(i, j)] - p[id(i, jm)]) / h;
        }
    s.p = std::move(p);
}

void NsacSolver::step_walls(SimState& s) const {
    const int nx = s.nx, ny = s.ny;
    const double h = s.h, dt = dt_, eps = cfg_.eps, m = cfg_.mobility();
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    auto uid = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };          // (nx+1) x ny
    auto vid = [ny](int i, int j) { return static_cast<size_t>(i) * (ny + 1) + j; };    // nx x (ny+1)
    // Dirichlet ghost for the order parameter (c = -1 on walls)
    auto cv = [&](int i, int j) -> double {
        if (i < 0) return -2.0 - s.c[id(0, j)];
        if (i >= nx) return -2.0 - s.c[id(nx - 1, j)];
        if (j < 0) return -2.0 - s.c[id(i, 0)];
        if (j >= ny) return -2.0 - s.c[id(i, ny - 1)];
        return s.c[id(i, j)];
    };

    // ---- Allen-Cahn ----
    std::vector<double> Fx(static_cast<size_t>(nx + 1) * ny, 0.0), Fy(static_cast<size_t>(nx) * (ny + 1), 0.0);
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double uf = s.u[uid(i, j)];
            double cf = uf >= 0 ? (i >= 2 ? 1.5 * cv(i - 1, j) - 0.5 * cv(i - 2, j) : cv(i - 1, j))
                                : (i + 1 < nx ? 1.5 * cv(i, j) - 0.5 * cv(i + 1, j) : cv(i, j));
            Fx[uid(i, j)] = uf * cf;
        }
    for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny; ++j) {
            double vf = s.v[vid(i, j)];
            double cf = vf >= 0 ? (j >= 2 ? 1.5 * cv(i, j - 1) - 0.5 * cv(i, j - 2) : cv(i, j - 1))
                                : (j + 1 < ny ? 1.5 * cv(i, j) - 0.5 * cv(i, j + 1) : cv(i, j));
            Fy[vid(i, j)] = vf * cf;
        }
    std::vector<double> rhs(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double adv = (Fx[uid(i + 1, j)] - Fx[uid(i, j)]) / h + (Fy[vid(i, j + 1)] - Fy[vid(i, j)]) / h;
            double cc = s.c[id(i, j)];
            rhs[id(i, j)] = cc + dt * (-adv - m / (eps * eps) * well_.df(cc) + stab_ * cc);
        }
    // implicit (1 + dt stab - dt m lap) c = rhs with c = -1 ghosts: lift the BC into the rhs
    const double a_imp = 1.0 + dt * stab_, b_imp = dt * m;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double bc = 0.0;
            if (i == 0 || i == nx - 1) bc += -2.0;
            if (j == 0 || j == ny - 1) bc += -2.0;
            rhs[id(i, j)] += b_imp * bc / (h * h);  // ghost = -2 - c_in
        }
    auto apply_helm = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                double xm = i > 0 ? x[id(i - 1, j)] : -x[id(0, j)];
                double xp = i + 1 < nx ? x[id(i + 1, j)] : -x[id(nx - 1, j)];
                double ym = j > 0 ? x[id(i, j - 1)] : -x[id(i, 0)];
                double yp = j + 1 < ny ? x[id(i, j + 1)] : -x[id(i, ny - 1)];
                double lap = (xm + xp + ym + yp - 4.0 * x[id(i, j)]) / (h * h);
                y[id(i, j)] = a_imp * x[id(i, j)] - b_imp * lap;
            }
    };
    if (b_imp > 0) {
        std::vector<double> c_new;
        pcg(apply_helm, rhs, c_new, a_imp + 4.0 * b_imp / (h * h), 1e-12 * (1.0 + max_abs(rhs)),
            10 * nx * ny, false);
        s.c = std::move(c_new);
    } else {
        for (size_t k = 0; k < rhs.size(); ++k) s.c[k] = rhs[k] / a_imp;
    }

    if (cfg_.ac_only) return;

    // ---- momentum: one-sided no-slip stresses, PCG projection ----
    ViscosityModel visc = ViscosityModel::make(cfg_.nu_plus, cfg_.nu_minus);
    std::vector<double> nu_c(s.c.size()), lap(s.c.size());
    for (size_t k = 0; k < s.c.size(); ++k) nu_c[k] = visc.nu(s.c[k]);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            lap[id(i, j)] = (cv(i + 1, j) + cv(i - 1, j) + cv(i, j + 1) + cv(i, j - 1) -
                             4.0 * s.c[id(i, j)]) / (h * h);

    auto uval = [&](int i, int j) -> double {  // ghost: tangential reflection at y-walls
        if (j < 0) return -s.u[uid(i, 0)];
        if (j >= ny) return -s.u[uid(i, ny - 1)];
        return s.u[uid(i, j)];
    };
    auto vval = [&](int i, int j) -> double {
        if (i < 0) return -s.v[vid(0, j)];
        if (i >= nx) return -s.v[vid(nx - 1, j)];
        return s.v[vid(i, j)];
    };

    std::vector<double> txx(s.c.size()), tyy(s.c.size());
    std::vector<double> txy(static_cast<size_t>(nx + 1) * (ny + 1));
    auto kid = [ny](int i, int j) { return static_cast<size_t>(i) * (ny + 1) + j; };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            txx[id(i, j)] = 2.0 * nu_c[id(i, j)] * (s.u[uid(i + 1, j)] - s.u[uid(i, j)]) / h;
            tyy[id(i, j)] = 2.0 * nu_c[id(i, j)] * (s.v[vid(i, j + 1)] - s.v[vid(i, j)]) / h;
        }
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            // corner viscosity from the adjacent cells (clamped at walls)
            int il = std::max(i - 1, 0), ir = std::min(i, nx - 1);
            int jl = std::max(j - 1, 0), jr = std::min(j, ny - 1);
            double nuk = 0.25 * (nu_c[id(il, jl)] + nu_c[id(ir, jl)] + nu_c[id(il, jr)] +
                                 nu_c[id(ir, jr)]);
            double uy = (uval(std::min(i, nx), j) - uval(std::min(i, nx), j - 1)) / h;
            if (i == nx) uy = (uval(nx, j) - uval(nx, j - 1)) / h;  // u(nx,.) = 0 anyway
            double ux_j = (i <= nx) ? uy : 0.0;
            double vx = (vval(i, j) - vval(i - 1, j)) / h;
            txy[kid(i, j)] = nuk * (ux_j + vx);
        }

    std::vector<double> us(s.u.size(), 0.0), vs(s.v.size(), 0.0);
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double uc_r = 0.5 * (s.u[uid(i, j)] + s.u[uid(i + 1, j)]);
            double uc_l = 0.5 * (s.u[uid(i - 1, j)] + s.u[uid(i, j)]);
            // corner advective flux u*v at (i, j+1) and (i, j)
            auto corner_uv = [&](int jj) {
                double ub = 0.5 * (uval(i, jj) + uval(i, jj - 1));
                double vb = 0.5 * (vval(i, jj) + vval(i - 1, jj));
                return ub * vb;
            };
            double adv_u = (uc_r * uc_r - uc_l * uc_l) / h + (corner_uv(j + 1) - corner_uv(j)) / h;
            double dtau_u = (txx[id(i, j)] - txx[id(i - 1, j)]) / h +
                            (txy[kid(i, j + 1)] - txy[kid(i, j)]) / h;
            double fcap_u = -eps * 0.5 * (lap[id(i - 1, j)] + lap[id(i, j)]) *
                            (s.c[id(i, j)] - s.c[id(i - 1, j)]) / h;
            us[uid(i, j)] = s.u[uid(i, j)] + dt * (-adv_u + dtau_u + fcap_u);
        }
    for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny; ++j) {
            double vc_t = 0.5 * (s.v[vid(i, j)] + s.v[vid(i, j + 1)]);
            double vc_b = 0.5 * (s.v[vid(i, j - 1)] + s.v[vid(i, j)]);
            auto corner_uv = [&](int ii) {
                double ub = 0.5 * (uval(ii, j) + uval(ii, j - 1));
                double vb = 0.5 * (vval(ii, j) + vval(ii - 1, j));
                return ub * vb;
            };
            double adv_v = (corner_uv(i + 1) - corner_uv(i)) / h + (vc_t * vc_t - vc_b * vc_b) / h;
            double dtau_v = (txy[kid(i + 1, j)] - txy[kid(i, j)]) / h +
                            (tyy[id(i, j)] - tyy[id(i, j - 1)]) / h;
            double fcap_v = -eps * 0.5 * (lap[id(i, j - 1)] + lap[id(i, j)]) *
                            (s.c[id(i, j)] - s.c[id(i, j - 1)]) / h;
            vs[vid(i, j)] = s.v[vid(i, j)] + dt * (-adv_v + dtau_v + fcap_v);
        }

    std::vector<double> div(s.c.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            div[id(i, j)] = ((us[uid(i + 1, j)] - us[uid(i, j)]) +
                             (vs[vid(i, j + 1)] - vs[vid(i, j)])) / (h * dt);
    auto apply_neumann = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                double acc = 0.0;
                if (i > 0) acc += x[id(i - 1, j)] - x[id(i, j)];
                if (i + 1 < nx) acc += x[id(i + 1, j)] - x[id(i, j)];
                if (j > 0) acc += x[id(i, j - 1)] - x[id(i, j)];
                if (j + 1 < ny) acc += x[id(i, j + 1)] - x[id(i, j)];
                y[id(i, j)] = -acc / (h * h);  // -lap: SPD on mean-free fields
            }
    };
    std::vector<double> neg(div.size());
    for (size_t k = 0; k < div.size(); ++k) neg[k] = -div[k];
    std::vector<double> p;
    pcg(apply_neumann, neg, p, 4.0 / (h * h), cfg_.projection_tol / dt, 20 * nx * ny, true);
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            s.u[uid(i, j)] = us[uid(i, j)] - dt * (p[id(i, j)] - p[id(i - 1, j)]) / h;
    for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny; ++j)
            s.v[vid(i, j)] = vs[vid(i, j)] - dt * (p[id(i, j)] - p[id(i, j - 1)]) / h;
    s.p = std::move(p);
}

double NsacSolver::div_max(const SimState& s) const {
    const int nx = s.nx, ny = s.ny;
    const double h = s.h;
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    double dmax = 0.0;
    if (s.walls) {
        auto uid = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
        auto vid = [ny](int i, int j) { return static_cast<size_t>(i) * (ny + 1) + j; };
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                dmax = std::max(dmax, std::abs((s.u[uid(i + 1, j)] - s.u[uid(i, j)] +
                                                s.v[vid(i, j + 1)] - s.v[vid(i, j)]) / h));
    } else {
        auto wrap = [](int k, int n) { return (k % n + n) % n; };
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
                dmax = std::max(dmax, std::abs((s.u[id(ip, j)] - s.u[id(i, j)] +
                                                s.v[id(i, jp)] - s.v[id(i, j)]) / h));
            }
    }
    return dmax;
}

EnergyDiag NsacSolver::energy(const SimState& s) const {
    const int nx = s.nx, ny = s.ny;
    const double h = s.h, eps = cfg_.eps;
    auto id = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
    EnergyDiag e;
    ViscosityModel visc = ViscosityModel::make(cfg_.nu_plus, cfg_.nu_minus);

    if (s.walls) {
        auto uid = [ny](int i, int j) { return static_cast<size_t>(i) * ny + j; };
        auto vid = [ny](int i, int j) { return static_cast<size_t>(i) * (ny + 1) + j; };
        auto cv = [&](int i, int j) -> double {
            if (i < 0) return -2.0 - s.c[id(0, j)];
            if (i >= nx) return -2.0 - s.c[id(nx - 1, j)];
            if (j < 0) return -2.0 - s.c[id(i, 0)];
            if (j >= ny) return -2.0 - s.c[id(i, ny - 1)];
            return s.c[id(i, j)];
        };
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                double uc = 0.5 * (s.u[uid(i, j)] + s.u[uid(i + 1, j)]);
                double vc = 0.5 * (s.v[vid(i, j)] + s.v[vid(i, j + 1)]);
                e.kinetic += 0.5 * (uc * uc + vc * vc) * h * h;
                double cc = s.c[id(i, j)];
                e.potential += well_.f(cc) / eps * h * h;
                double gx = (cv(i + 1, j) - cc) / h, gy = (cv(i, j + 1) - cc) / h;
                e.gradient += 0.5 * eps * (gx * gx + gy * gy) * h * h;
                double lap = (cv(i + 1, j) + cv(i - 1, j) + cv(i, j + 1) + cv(i, j - 1) - 4 * cc) / (h * h);
                double mu = -eps * lap + well_.df(cc) / eps;
                e.mu_sq_over_eps += mu * mu / eps * h * h;
                double dxx = (s.u[uid(i + 1, j)] - s.u[uid(i, j)]) / h;
                double dyy = (s.v[vid(i, j + 1)] - s.v[vid(i, j)]) / h;
                e.visc_dissipation += 2.0 * visc.nu(cc) * (dxx * dxx + dyy * dyy) * h * h;
            }
    } else {
        auto wrap = [](int k, int n) { return (k % n + n) % n; };
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                int ip = wrap(i + 1, nx), jp = wrap(j + 1, ny);
                int im = wrap(i - 1, nx), jm = wrap(j - 1, ny);
                double uc = 0.5 * (s.u[id(i, j)] + s.u[id(ip, j)]);
                double vc = 0.5 * (s.v[id(i, j)] + s.v[id(i, jp)]);
                e.kinetic += 0.5 * (uc * uc + vc * vc) * h * h;
                double cc = s.c[id(i, j)];
                e.potential += well_.f(cc) / eps * h * h;
                double gx = (s.c[id(ip, j)] - cc) / h, gy = (s.c[id(i, jp)] - cc) / h;
                e.gradient += 0.5 * eps * (gx * gx + gy * gy) * h * h;
                double lap = (s.c[id(ip, j)] + s.c[id(im, j)] + s.c[id(i, jp)] + s.c[id(i, jm)] -
                              4 * cc) / (h * h);
                double mu = -eps * lap + well_.df(cc) / eps;
                e.mu_sq_over_eps += mu * mu / eps * h * h;
                double dxx = (s.u[id(ip, j)] - s.u[id(i, j)]) / h;
                double dyy = (s.v[id(i, jp)] - s.v[id(i, j)]) / h;
                double dxy = 0.5 * ((s.u[id(i, j)] - s.u[id(i, jm)]) / h +
                                    (s.v[id(i, j)] - s.v[id(im, j)]) / h);
                e.visc_dissipation += 2.0 * visc.nu(cc) * (dxx * dxx + dyy * dyy + 2 * dxy * dxy) * h * h;
            }
    }
    e.total = e.kinetic + e.gradient + e.potential;
    return e;
}

RunResult NsacSolver::run() const {
    RunResult res;
    SimState s = init_state();
    const double out_every = cfg_.out_interval > 0 ? cfg_.out_interval : std::max(cfg_.T / 10, 1e-30);
    const int nsteps = cfg_.T > 0 ? static_cast<int>(std::llround(cfg_.T / dt_)) : 0;
    const int out_stride = std::max(1, static_cast<int>(std::llround(out_every / dt_)));

    auto record = [&]() {
        EnergyDiag e = energy(s);
        double radius = 0.0;
        try {
            auto iface = extract_interface(s.c, s.nx, s.ny, s.h);
            radius = iface.radius;
        } catch (const ValidationError&) {
            radius = 0.0;  // no interface present
        }
        res.diagnostics.push_back({s.t, e.total, e.kinetic, e.gradient, e.potential,
                                   div_max(s), radius});
        res.c_snapshots.emplace_back(s.t, s.c);
    };
    record();
    for (int step = 0; step < nsteps; ++step) {
        this->step(s);
        double cmax = max_abs(s.c);
        if (!std::isfinite(cmax)) throw NumericalError("run: NaN detected");
        if (cmax > 1.2 + 0.3)
            throw NumericalError("run: order parameter left the admissible band");
        if (step + 1 == nsteps || (step + 1) % out_stride == 0) record();
    }
    res.final_state = std::move(s);
    return res;
}

}  // namespace nsac

#include "nsac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nsac {

DoubleWell DoubleWell::quartic() {
    DoubleWell w;
    w.f = [](double c) { double q = c * c - 1.0; return 0.125 * q * q; };
    w.df = [](double c) { return 0.5 * c * (c * c - 1.0); };
    w.d2f = [](double c) { return 0.5 * (3.0 * c * c - 1.0); };
    w.name = "quartic";
    return w;
}

DoubleWell DoubleWell::custom(std::function<double(double)> f,
                              std::function<double(double)> df,
                              std::function<double(double)> d2f,
                              std::string name) {
    DoubleWell w{std::move(f), std::move(df), std::move(d2f), std::move(name)};
    const double tol = 1e-10;
    if (std::abs(w.f(1.0)) > tol || std::abs(w.f(-1.0)) > tol)
        throw ValidationError("DoubleWell: f(+-1) must vanish");
    if (std::abs(w.df(1.0)) > tol || std::abs(w.df(-1.0)) > tol)
        throw ValidationError("DoubleWell: f'(+-1) must vanish");
    if (w.d2f(1.0) <= 0.0 || w.d2f(-1.0) <= 0.0)
        throw ValidationError("DoubleWell: f''(+-1) must be positive");
    for (double c = -0.9375; c < 1.0; c += 0.0625) {
        if (w.f(c) <= 0.0)
            throw ValidationError("DoubleWell: f must be positive on (-1,1)");
        if (std::abs(w.f(c) - w.f(-c)) > tol * (1.0 + std::abs(w.f(c))))
            throw ValidationError("DoubleWell: f must be even");
    }
    return w;
}

PotentialEval eval_potential(const DoubleWell& well, double c) {
    return {well.f(c), well.df(c), well.d2f(c)};
}

double Profile::eval_theta(double r) const {
    if (r <= rho.front()) return -1.0 + (theta.front() + 1.0) * std::exp(alpha * (r - rho.front()));
    if (r >= rho.back()) return 1.0 - (1.0 - theta.back()) * std::exp(-alpha * (r - rho.back()));
    const double hh = h();
    int i = std::min(static_cast<int>((r - rho.front()) / hh), n_points() - 2);
    double t = (r - rho[i]) / hh;
    // cubic Hermite with stored slopes
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * theta[i] + h10 * hh * dtheta[i] + h01 * theta[i + 1] + h11 * hh * dtheta[i + 1];
}

double Profile::eval_dtheta(double r) const {
    if (r <= rho.front() || r >= rho.back()) {
        double tail = (r <= rho.front()) ? dtheta.front() : dtheta.back();
        double dist = (r <= rho.front()) ? rho.front() - r : r - rho.back();
        return tail * std::exp(-alpha * dist);
    }
    const double hh = h();
    int i = std::min(static_cast<int>((r - rho.front()) / hh), n_points() - 2);
    double t = (r - rho[i]) / hh;
    return (1 - t) * dtheta[i] + t * dtheta[i + 1];
}

namespace {

// Thomas solve of a tridiagonal system; diag/lower/upper are overwritten.
void tridiag_solve(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

Profile compute_profile(const DoubleWell& well, double L, int n) {
    if (L < 10.0) throw ValidationError("compute_profile: L must be >= 10");
    if (n < 256) throw ValidationError("compute_profile: n must be >= 256");
    if (n % 2 != 0) throw ValidationError("compute_profile: n must be even");

    Profile p;
    p.L = L;
    p.rho = linspace(-L, L, n + 1);
    p.alpha = std::min(std::sqrt(well.d2f(-1.0)), std::sqrt(well.d2f(1.0)));
    const double h = p.rho[1] - p.rho[0];

    // f is even, so theta0 is odd: solve on [0, L] with theta(0) = 0 pinned
    // (this also removes the near-singular translation mode from the Newton
    // Jacobian) and reflect. Half grid: nodes 0..nh, nh = n/2.
    const int nh = n / 2;
    std::vector<double> th(nh + 1);
    for (int i = 0; i <= nh; ++i) th[i] = std::tanh(0.5 * i * h);
    const double bc_right = th[nh];  // tanh-like clamp at rho = L

    // Newton on F_i = (th_{i-1} - 2 th_i + th_{i+1})/h^2 - f'(th_i) = 0, i = 1..nh-1
    const int m = nh - 1;
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    double resid = 0.0;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        resid = 0.0;
        for (int i = 1; i < nh; ++i) {
            double lap = (th[i - 1] - 2.0 * th[i] + th[i + 1]) / (h * h);
            double F = lap - well.df(th[i]);
            rhs[i - 1] = -F;
            resid = std::max(resid, std::abs(F));
        }
        if (resid < 1e-10) { converged = true; break; }
        for (int i = 1; i < nh; ++i) {
            diag[i - 1] = -2.0 / (h * h) - well.d2f(th[i]);
            lower[i - 1] = 1.0 / (h * h);
            upper[i - 1] = 1.0 / (h * h);
        }
        std::vector<double> lo = lower, di = diag, up = upper, dx = rhs;
        tridiag_solve(lo, di, up, dx);
        for (int i = 1; i < nh; ++i) th[i] += dx[i - 1];
        th[0] = 0.0;
        th[nh] = bc_right;
    }
    if (!converged)
        {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", resid);
        throw NumericalError(std::string("compute_profile: Newton stalled, residual ") + buf);
    }

    p.theta.resize(n + 1);
    for (int i = 0; i <= nh; ++i) {
        p.theta[nh + i] = th[i];
        p.theta[nh - i] = -th[i];
    }

    // dtheta: 4th-order central differences (2nd-order near the ends, where
    // the profile is exponentially flat); d2theta: the discrete Laplacian.
    p.dtheta.resize(n + 1);
    p.d2theta.resize(n + 1);
    for (int i = 2; i + 2 <= n; ++i)
        p.dtheta[i] = (-p.theta[i + 2] + 8.0 * p.theta[i + 1] - 8.0 * p.theta[i - 1] + p.theta[i - 2]) / (12.0 * h);
    p.dtheta[1] = (p.theta[2] - p.theta[0]) / (2.0 * h);
    p.dtheta[n - 1] = (p.theta[n] - p.theta[n - 2]) / (2.0 * h);
    for (int i = 1; i < n; ++i)
        p.d2theta[i] = (p.theta[i + 1] - 2.0 * p.theta[i] + p.theta[i - 1]) / (h * h);
    p.dtheta[0] = (p.theta[1] - p.theta[0]) / h;
    p.dtheta[n] = (p.theta[n] - p.theta[n - 1]) / h;
    p.d2theta[0] = well.df(p.theta[0]);
    p.d2theta[n] = well.df(p.theta[n]);

    std::vector<double> integ(n + 1);
    for (int i = 0; i <= n; ++i) integ[i] = p.dtheta[i] * p.dtheta[i];
    p.sigma = simpson(integ, h);
    return p;
}

Blend Blend::quintic() {
    Blend b;
    b.eta = [](double r) { return smoothstep5(0.5 * (r + 1.0)); };
    b.etap = [](double r) { return 0.5 * smoothstep5_deriv(0.5 * (r + 1.0)); };
    return b;
}

double compute_sigma1(const Profile& profile, const Blend& blend) {
    const int n = profile.n_points();
    std::vector<double> integ(n);
    for (int i = 0; i < n; ++i)
        integ[i] = profile.dtheta[i] * blend.etap(profile.rho[i]);
    return simpson(integ, profile.h());
}

double ViscosityModel::nu(double c) const {
    const double slope = 0.5 * (nu_plus - nu_minus);
    const double clamp = 1.2, width = 0.1;
    double s;
    if (std::abs(c) <= clamp)
        s = c;
    else
        s = std::copysign(clamp + width * std::tanh((std::abs(c) - clamp) / width), c);
    return nubar + slope * s;
}

double ViscosityModel::nu_min() const {
    // clamp saturates |s| at 1.2 + width
    return nubar - 0.5 * std::abs(nu_plus - nu_minus) * 1.3;
}

ViscosityModel ViscosityModel::make(double nu_plus, double nu_minus) {
    if (nu_plus <= 0.0 || nu_minus <= 0.0)
        throw ValidationError("ViscosityModel: viscosities must be positive");
    ViscosityModel m;
    m.nu_plus = nu_plus;
    m.nu_minus = nu_minus;
    m.nubar = 0.5 * (nu_plus + nu_minus);
    if (m.nu_min() <= 0.0)
        throw ValidationError("ViscosityModel: viscosity ratio too large, nu would lose positivity");
    return m;
}

double mean_viscosity(const ViscosityModel& model, const Profile& profile, const Blend& blend) {
    const int n = profile.n_points();
    std::vector<double> integ(n);
    for (int i = 0; i < n; ++i)
        integ[i] = model.nu(profile.theta[i]) * blend.etap(profile.rho[i]);
    return simpson(integ, profile.h());
}

}  // namespace nsac

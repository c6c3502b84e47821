#include "nsac/matched_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsac {

namespace {

void check_grid(const RhsSample& rhs, const Profile& profile) {
    if (rhs.values.size() != profile.rho.size())
        throw ValidationError("rhs sample size does not match the profile grid");
}

double solv_tol(const RhsSample& rhs) {
    return 1e-6 * std::max(max_abs(rhs.values), 1e-6);
}

// Thomas solve, inputs consumed.
std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    return rhs;
}

}  // namespace

double solvability_defect(const RhsSample& A, const Profile& profile) {
    check_grid(A, profile);
    const int n = profile.n_points();
    std::vector<double> integ(n);
    for (int i = 0; i < n; ++i) integ[i] = A.values[i] * profile.dtheta[i];
    return simpson(integ, profile.h());
}

std::vector<double> pin_at_zero(std::vector<double> w, const Profile& profile) {
    const int mid = profile.n_points() / 2;  // rho = 0 on the symmetric grid
    const double c = w[mid] / profile.dtheta[mid];
    for (int i = 0; i < profile.n_points(); ++i) w[i] -= c * profile.dtheta[i];
    return w;
}

std::vector<double> solve_linearized_ac(const RhsSample& A, const DoubleWell& well,
                                        const Profile& profile) {
    check_grid(A, profile);
    const double defect = solvability_defect(A, profile);
    if (std::abs(defect) > solv_tol(A)) throw SolvabilityViolated(defect);

    const int np = profile.n_points();
    const int n = np - 1;          // intervals
    const double h = profile.h();
    const int m = n - 1;           // interior unknowns

    // -w'' + f''(theta0) w = -A, Dirichlet ends from the decay statement
    const double wl = A.limit_minus ? -*A.limit_minus / well.d2f(-1.0) : 0.0;
    const double wr = A.limit_plus ? -*A.limit_plus / well.d2f(1.0) : 0.0;

    std::vector<double> diag(m), lower(m), upper(m), rhs(m);
    for (int i = 1; i < n; ++i) {
        diag[i - 1] = 2.0 / (h * h) + well.d2f(profile.theta[i]);
        lower[i - 1] = -1.0 / (h * h);
        upper[i - 1] = -1.0 / (h * h);
        rhs[i - 1] = -A.values[i];
    }
    rhs[0] += wl / (h * h);
    rhs[m - 1] += wr / (h * h);

    // near-kernel mode (discrete analogue of theta0'): inverse iteration on a
    // slightly shifted matrix
    std::vector<double> phi(m);
    for (int i = 1; i < n; ++i) phi[i - 1] = profile.dtheta[i];
    {
        for (int it = 0; it < 4; ++it) {
            std::vector<double> d2 = diag;
            for (double& d : d2) d += 1e-8;
            phi = tridiag_solve(lower, d2, upper, phi);
            double nrm = std::sqrt(std::inner_product(phi.begin(), phi.end(), phi.begin(), 0.0));
            for (double& x : phi) x /= nrm;
        }
    }

    auto project_out = [&](std::vector<double>& v) {
        double c = std::inner_product(v.begin(), v.end(), phi.begin(), 0.0);
        for (int i = 0; i < m; ++i) v[i] -= c * phi[i];
    };

    // deflated solve: remove the kernel component from the data, solve the
    // mildly shifted system, remove the amplified kernel component again
    project_out(rhs);
    std::vector<double> d2 = diag;
    for (double& d : d2) d += 1e-8;
    std::vector<double> w_int = tridiag_solve(lower, d2, upper, rhs);
    project_out(w_int);

    std::vector<double> w(np);
    w[0] = wl;
    w[np - 1] = wr;
    for (int i = 1; i < n; ++i) w[i] = w_int[i - 1];
    return pin_at_zero(std::move(w), profile);
}

std::vector<double> solve_weighted(const RhsSample& B, const ViscosityModel& model,
                                   const Profile& profile) {
    check_grid(B, profile);
    const int np = profile.n_points();
    const double h = profile.h();

    // decay guard on the outer quarter of the grid
    const double bmax = max_abs(B.values);
    double outer = 0.0;
    for (int i = 0; i < np; ++i)
        if (std::abs(profile.rho[i]) >= 0.75 * profile.L)
            outer = std::max(outer, std::abs(B.values[i]));
    if (bmax > 0.0 && outer > 10.0 * bmax * std::exp(-profile.alpha * profile.L / 4.0))
        throw ValidationError("solve_weighted: rhs does not decay on the outer grid");

    const double integral = simpson(B.values, h);
    if (std::abs(integral) > solv_tol(B)) throw SolvabilityViolated(integral);

    // inner(r) = int_{-inf}^r B; outer cumulative re-based at rho = 0
    std::vector<double> inner = cumtrapz(B.values, h);
    std::vector<double> integrand(np);
    for (int i = 0; i < np; ++i)
        integrand[i] = inner[i] / model.nu(profile.theta[i]);
    std::vector<double> acc = cumtrapz(integrand, h);
    const int mid = np / 2;
    std::vector<double> w(np);
    for (int i = 0; i < np; ++i) w[i] = acc[i] - acc[mid];
    return w;
}

}  // namespace nsac

#include "nsac/spectral1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace nsac {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x,
// by the standard Sturm / LDL^T sign count.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < diag.size(); ++i) {
        double denom = (q == 0.0) ? 1e-300 : q;
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if (q < 0) ++count;
    }
    return count;
}

double bisect_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off,
                         int index, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) > index)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

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

SpectralProblem assemble_and_solve(const DoubleWell& well, const Profile& profile,
                                   double L, int n, double eps, int k) {
    if (n < 1024) throw ValidationError("assemble_and_solve: n must be >= 1024");
    if (eps <= 0.0) throw ValidationError("assemble_and_solve: eps must be positive");
    if (L < 2.0 * eps) throw ValidationError("assemble_and_solve: domain too small for the layer");
    const int m = n - 1;
    if (k < 1 || k > m) throw ValidationError("assemble_and_solve: bad eigenpair count");

    SpectralProblem sp;
    sp.L = L;
    sp.eps = eps;
    sp.n = n;
    const double h = 2.0 * L / n;
    sp.x.resize(m);
    std::vector<double> diag(m), off(m - 1, -1.0 / (h * h));
    for (int i = 0; i < m; ++i) {
        sp.x[i] = -L + (i + 1) * h;
        diag[i] = 2.0 / (h * h) + well.d2f(profile.eval_theta(sp.x[i] / eps)) / (eps * eps);
    }

    double offmax = 1.0 / (h * h);
    double lo = *std::min_element(diag.begin(), diag.end()) - 2.0 * offmax;
    double hi = *std::max_element(diag.begin(), diag.end()) + 2.0 * offmax;

    sp.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j)
        sp.eigenvalues[j] = bisect_eigenvalue(diag, off, j, lo, hi);

    // inverse iteration; deterministic seed, orthogonalize within clusters
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    sp.eigenvectors.assign(k, std::vector<double>(m));
    for (int j = 0; j < k; ++j) {
        std::vector<double>& v = sp.eigenvectors[j];
        for (double& x : v) x = gauss(rng);
        const double shift = sp.eigenvalues[j] + 1e-10 * (1.0 + std::abs(sp.eigenvalues[j]));
        std::vector<double> d_sh(m), lowv(m), upv(m);
        for (int i = 0; i < m; ++i) d_sh[i] = diag[i] - shift;
        for (int i = 0; i < m; ++i) { lowv[i] = -1.0 / (h * h); upv[i] = -1.0 / (h * h); }
        for (int it = 0; it < 6; ++it) {
            for (int jj = 0; jj < j; ++jj) {
                const auto& u = sp.eigenvectors[jj];
                double c = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
                for (int i = 0; i < m; ++i) v[i] -= c * u[i];
            }
            v = tridiag_solve(lowv, d_sh, upv, v);
            double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            if (!(nrm > 0.0) || !std::isfinite(nrm))
                throw NumericalError("assemble_and_solve: inverse iteration failed at pair " +
                                     std::to_string(j));
            for (double& x : v) x /= nrm;
        }
        for (int jj = 0; jj < j; ++jj) {
            const auto& u = sp.eigenvectors[jj];
            double c = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
            for (int i = 0; i < m; ++i) v[i] -= c * u[i];
        }
        double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (double& x : v) x /= nrm * std::sqrt(h);  // L2(h)-orthonormal
        // sign convention: nonnegative mass against theta0'(x/eps) for the ground pair
        if (j == 0) {
            double mass = 0.0;
            for (int i = 0; i < m; ++i) mass += v[i] * profile.eval_dtheta(sp.x[i] / eps);
            if (mass < 0) for (double& x : v) x = -x;
        }
    }
    return sp;
}

GapReport spectral_gap_report(const DoubleWell& well, const Profile& profile,
                              const std::vector<double>& eps_list, int n, double CL) {
    GapReport rep;
    rep.CL = CL;
    for (double eps : eps_list) {
        if (eps <= 0.0) throw ValidationError("spectral_gap_report: eps must be positive");
        double L = std::min(20.0 * eps, 20.0);
        auto sp = assemble_and_solve(well, profile, L, n, eps, 2);
        GapRow row{eps, sp.lambda0(), sp.lambda1(), eps * eps * sp.lambda1()};
        if (row.lambda0 < -CL) rep.lower_bound_holds = false;
        rep.rows.push_back(row);
    }
    return rep;
}

Decomposition decompose(const std::vector<double>& psi, int n_rho, int n_s,
                        const Profile& profile, double eps) {
    if (n_rho != profile.n_points())
        throw ValidationError("decompose: rho grid must match the profile grid");
    if (psi.size() != static_cast<size_t>(n_rho) * n_s)
        throw ValidationError("decompose: sample count mismatch");
    const double h = profile.h();

    std::vector<double> th2(n_rho);
    for (int i = 0; i < n_rho; ++i) th2[i] = profile.dtheta[i] * profile.dtheta[i];
    const double norm2 = simpson(th2, h);
    Decomposition dec;
    dec.n_rho = n_rho;
    dec.n_s = n_s;
    dec.beta = 1.0 / std::sqrt(norm2);
    dec.Z.resize(n_s);
    dec.psiR.resize(psi.size());

    std::vector<double> integ(n_rho);
    for (int j = 0; j < n_s; ++j) {
        for (int i = 0; i < n_rho; ++i)
            integ[i] = psi[static_cast<size_t>(i) * n_s + j] * profile.dtheta[i];
        const double proj = simpson(integ, h);  // <psi, theta0'>
        dec.Z[j] = std::sqrt(eps) * proj / std::sqrt(norm2);
        const double amp = proj / norm2;  // = eps^{-1/2} Z beta
        for (int i = 0; i < n_rho; ++i)
            dec.psiR[static_cast<size_t>(i) * n_s + j] =
                psi[static_cast<size_t>(i) * n_s + j] - amp * profile.dtheta[i];
    }
    return dec;
}

}  // namespace nsac

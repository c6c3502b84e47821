#pragma once

#include <vector>

#include "nsac/potential.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Lowest eigenpairs of -d^2/dx^2 + eps^-2 f''(theta0(x/eps)) on (-L, L) with
// Dirichlet ends, discretized as a symmetric tridiagonal matrix.
struct SpectralProblem {
    double L = 0.0, eps = 1.0;
    int n = 0;  // grid intervals; interior unknowns n-1
    std::vector<double> x;            // interior nodes
    std::vector<double> eigenvalues;  // ascending
    std::vector<std::vector<double>> eigenvectors;  // L2-orthonormal w.r.t. h-weighted dot
    double lambda0() const { return eigenvalues.at(0); }
    double lambda1() const { return eigenvalues.at(1); }
};

// Sturm bisection for the k lowest eigenvalues plus shifted inverse iteration
// for the eigenvectors.
SpectralProblem assemble_and_solve(const DoubleWell& well, const Profile& profile,
                                   double L, int n, double eps, int k);

struct GapRow {
    double eps, lambda0, lambda1, eps2_lambda1;
};
struct GapReport {
    std::vector<GapRow> rows;
    double CL = 1.0;         // asserted uniform lower-bound constant
    bool lower_bound_holds = true;  // lambda0 >= -CL across the sweep
};

// Per-eps eigenvalues at resolution matched to the layer width (L = eps * L_rho).
GapReport spectral_gap_report(const DoubleWell& well, const Profile& profile,
                              const std::vector<double>& eps_list, int n = 8192,
                              double CL = 1.0);

// theta0'-mode decomposition of psi sampled on (rho_i, s_j):
// psi = eps^{-1/2} Z(s) beta theta0'(rho) + psiR, with psiR orthogonal to
// theta0' in L２(rho) per s.
struct Decomposition {
    std::vector<double> Z;      // per s
    double beta = 0.0;          // 1/||theta0'||_{L2(rho grid)}
    std::vector<double> psiR;   // flattened (n_rho x n_s), rho-major
    int n_rho = 0, n_s = 0;
};

Decomposition decompose(const std::vector<double>& psi, int n_rho, int n_s,
                        const Profile& profile, double eps);

}  // namespace nsac

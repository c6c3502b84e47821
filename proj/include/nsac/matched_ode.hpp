#pragma once

#include <optional>
#include <vector>

#include "nsac/potential.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Orthogonality of the right-hand side to the kernel mode theta0' is the
// price of bounded solutions; violations are reported with the defect.
struct SolvabilityViolated : NumericalError {
    double defect;
    explicit SolvabilityViolated(double d)
        : NumericalError("solvability condition violated, defect " + std::to_string(d)),
          defect(d) {}
};

// Right-hand side sampled on the profile grid, with optional limits at +-inf.
struct RhsSample {
    std::vector<double> values;
    std::optional<double> limit_minus, limit_plus;
};

// int A theta0' drho (composite Simpson on the shared grid).
double solvability_defect(const RhsSample& A, const Profile& profile);

// Bounded solution of w'' - f''(theta0) w = A with w(0) = 0.
// Dirichlet far-field closure w(+-L) = -A^{+-}/f''(+-1) (zero when no limits
// are supplied); the near-kernel mode is removed by deflation and the w(0)=0
// normalization re-imposed afterwards.
std::vector<double> solve_linearized_ac(const RhsSample& A, const DoubleWell& well,
                                        const Profile& profile);

// Particular bounded solution of (nu(theta0) w')' = B by nested quadrature:
// w*(rho) = int_0^rho nu(theta0(r))^{-1} int_{-inf}^r B(s) ds dr.
std::vector<double> solve_weighted(const RhsSample& B, const ViscosityModel& model,
                                   const Profile& profile);

// Re-impose the w(0) = 0 normalization after adding any multiple of theta0'.
std::vector<double> pin_at_zero(std::vector<double> w, const Profile& profile);

}  // namespace nsac

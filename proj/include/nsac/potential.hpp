#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsac/util.hpp"

namespace nsac {

// Smooth even double-well with equal-depth minima at c = +-1:
// f(+-1) = f'(+-1) = 0, f''(+-1) > 0, f > 0 on (-1,1).
struct DoubleWell {
    std::function<double(double)> f, df, d2f;
    std::string name;

    // f(c) = (c^2-1)^2 / 8
    static DoubleWell quartic();
    // wraps user callables and checks the well conditions
    static DoubleWell custom(std::function<double(double)> f,
                             std::function<double(double)> df,
                             std::function<double(double)> d2f,
                             std::string name);
};

struct PotentialEval {
    double f, df, d2f;
};
PotentialEval eval_potential(const DoubleWell& well, double c);

// Heteroclinic connection of -theta'' + f'(theta) = 0, theta(0) = 0,
// theta(+-inf) = +-1, sampled on a uniform grid over [-L, L].
struct Profile {
    std::vector<double> rho;       // n+1 samples, rho[0] = -L
    std::vector<double> theta;     // theta0
    std::vector<double> dtheta;    // theta0'  (central differences)
    std::vector<double> d2theta;   // theta0'' (second differences; = f'(theta) + solve residual)
    double L = 0.0;
    double sigma = 0.0;            // int theta0'^2 drho
    double alpha = 0.0;            // min(sqrt(f''(-1)), sqrt(f''(1)))
    double h() const { return rho[1] - rho[0]; }
    int n_points() const { return static_cast<int>(rho.size()); }
    // cubic Hermite interpolation; saturates to +-1 beyond the grid
    double eval_theta(double r) const;
    double eval_dtheta(double r) const;
};

// Newton solve of the profile BVP on [-L,L] with n intervals (n even).
// Seeded by tanh(rho/2); Dirichlet boundary values tanh(+-L/2)-style clamp.
Profile compute_profile(const DoubleWell& well, double L = 15.0, int n = 8192);

// Monotone blending function: eta = 0 on (-inf,-1], 1 on [1,inf),
// eta - 1/2 odd, eta' >= 0, eta' supported in [-1,1].
struct Blend {
    std::function<double(double)> eta, etap;
    static Blend quintic();  // quintic smoothstep on [-1,1]
};

// sigma1 = int theta0'(rho) eta'(rho) drho  (> 0)
double compute_sigma1(const Profile& profile, const Blend& blend);

// Concentration-dependent viscosity with nu(+-1) = nu_pm and nu' even.
// Linear in c on [-1.2, 1.2], smoothly clamped outside so nu stays positive.
struct ViscosityModel {
    double nu_plus = 1.0, nu_minus = 1.0;
    double nubar = 1.0;   // (nu_plus + nu_minus)/2
    double nu(double c) const;
    double nu_min() const;
    static ViscosityModel make(double nu_plus, double nu_minus);
};

// Quadrature of nu(theta0) eta'; equals (nu+ + nu-)/2 by the odd symmetry of
// nu(theta0) - nubar against eta - 1/2.
double mean_viscosity(const ViscosityModel& model, const Profile& profile, const Blend& blend);

}  // namespace nsac

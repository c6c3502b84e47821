#pragma once

#include <memory>
#include <vector>

#include "nsac/interface.hpp"
#include "nsac/potential.hpp"
#include "nsac/reference.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Incompressible Navier-Stokes/Allen-Cahn on a 2D box, MAC staggered grid.
// Momentum: dt v + v.grad v - div(2 nu(c) Dv) + grad p = -eps lap(c) grad(c)
// (the gradient part of the capillary stress is absorbed into p).
// Order parameter: dt c + v.grad c = m [lap c - f'(c)/eps^2], m = eps^alpha.
struct SimConfig {
    enum class Boundary { periodic, walls };
    enum class InitKind { circle, stripe, uniform };

    int nx = 64, ny = 64;
    double Lx = 1.0, Ly = 1.0;
    Boundary boundary = Boundary::periodic;

    double eps = 1.0 / 32;
    double alpha = 0.5;              // m = eps^alpha
    double mobility_override = -1.0; // >= 0 replaces eps^alpha (0 = pure transport)
    double nu_plus = 1.0, nu_minus = 1.0;

    double T = 0.05;
    double dt = 0.0;                 // <= 0: automatic from the CFL bounds
    double ac_accuracy = 0.02;       // dt <= ac_accuracy eps^2 / m
    bool ac_only = false;            // skip the flow update (v frozen)

    InitKind init = InitKind::circle;
    Vec2 center{0.5, 0.5};
    double radius = 0.25;
    Vec2 velocity{0.0, 0.0};         // uniform background flow
    double stripe_x0 = 0.25, stripe_x1 = 0.75;
    double delta_cut = 0.0;          // cutoff half-width; <= 0: radius/3
    double noise_amp = 0.0;
    unsigned noise_seed = 0;

    double out_interval = 0.0;       // diagnostics/snapshot cadence; <= 0: T/10
    double projection_tol = 1e-7;    // wall-mode pressure solve target (max norm of div)

    double h() const { return Lx / nx; }
    double mobility() const { return mobility_override >= 0 ? mobility_override : std::pow(eps, alpha); }
    void validate() const;
};

struct SimState {
    int nx = 0, ny = 0;
    double h = 0.0, t = 0.0;
    bool walls = false;
    std::vector<double> c, p;  // cell centers, nx*ny
    std::vector<double> u, v;  // faces; periodic nx*ny each, walls (nx+1)*ny and nx*(ny+1)
};

struct EnergyDiag {
    double total = 0.0, kinetic = 0.0, gradient = 0.0, potential = 0.0;
    double visc_dissipation = 0.0;  // int 2 nu |Dv|^2
    double mu_sq_over_eps = 0.0;    // eps^-1 int mu^2, mu = -eps lap c + f'(c)/eps
};

struct DiagRow {
    double t, energy, kinetic, gradient, potential, div_max, radius;
};

struct RunResult {
    std::vector<DiagRow> diagnostics;
    std::vector<std::pair<double, std::vector<double>>> c_snapshots;
    SimState final_state;
};

class NsacSolver {
public:
    NsacSolver(SimConfig cfg, const DoubleWell& well, const Profile& profile);
    ~NsacSolver();

    const SimConfig& config() const { return cfg_; }
    double dt() const { return dt_; }

    SimState init_state() const;
    void step(SimState& s) const;
    EnergyDiag energy(const SimState& s) const;
    double div_max(const SimState& s) const;
    RunResult run() const;

    // face-centered capillary force -eps lap(c) grad(c), exposed for testing
    void capillary_force(const std::vector<double>& c, std::vector<double>& fu,
                         std::vector<double>& fv) const;

private:
    void step_periodic(SimState& s) const;
    void step_walls(SimState& s) const;

    SimConfig cfg_;
    DoubleWell well_;
    const Profile* profile_;
    double stab_;  // stabilization: (m/eps^2) max f'' over |c| <= 1.2
    double dt_;
    std::unique_ptr<class Poisson2D> poisson_;
};

}  // namespace nsac

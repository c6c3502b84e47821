#pragma once

#include <vector>

#include "nsac/reference.hpp"
#include "nsac/sim.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Error norms of a run against a semi-analytic reference:
//   sup_t ||c - c_ref||_L2,
//   eps^(1/4) ||grad (c - c_ref)||_{L2 of (Omega \ Gamma(delta)) x (0,T)},
//   eps^(1/4) ||tangential grad||_{L2 of Gamma(2 delta) x (0,T)},
//   eps       ||grad||_{L2 of Gamma(2 delta) x (0,T)},
// and the fitted-circle radius error.
struct NormRecord {
    double eps = 0.0, alpha = 0.0;
    double linf_l2 = 0.0;
    double grad_off = 0.0;
    double grad_tau = 0.0;
    double grad_tube = 0.0;
    double radius_err = 0.0;
};

NormRecord error_norms(const std::vector<std::pair<double, std::vector<double>>>& snapshots,
                       int nx, int ny, double h, const ReferenceScenario& scenario,
                       const Profile& profile);

struct OrderFits {
    LineFit linf_l2, grad_off, grad_tau, grad_tube;
};

struct ErrorReport {
    std::vector<NormRecord> records;
    OrderFits fits;  // valid when records.size() >= 2
    bool has_fits = false;
};

ErrorReport fit_report(std::vector<NormRecord> records);

struct StudyConfig {
    double alpha = 0.5;
    std::vector<double> eps_list{1.0 / 16, 1.0 / 32, 1.0 / 64};  // descending
    double T = 0.05;
    double R0 = 0.25;
    Vec2 center{0.5, 0.5};
    Vec2 U{0.0, 0.0};
    int resolution_factor = 2;  // h = eps / factor
    double nu_plus = 1.0, nu_minus = 1.0;
    int snapshots = 11;
    bool ac_only = false;
};

struct StudyResult {
    ErrorReport corrected;    // against the drift-corrected reference
    ErrorReport transported;  // against the pure-transport reference (contrast)
};

// Runs the solver per eps (worker pool, NSAC_WORKERS) and evaluates both
// references from the same snapshots.
StudyResult convergence_study(const StudyConfig& cfg, const DoubleWell& well,
                              const Profile& profile);

struct MobilityRow {
    double alpha = 0.0;
    double drift = 0.0;   // fitted d(R^2)/dt
    double target = 0.0;  // -2 eps^alpha
    double rel_err = 0.0;
};

struct MobilityReport {
    double eps = 0.0;
    std::vector<MobilityRow> rows;
};

// Shrinkage rate of the fitted interface circle per mobility exponent.
MobilityReport mobility_comparison(double eps, const std::vector<double>& alpha_list,
                                   const DoubleWell& well, const Profile& profile,
                                   double R0 = 0.3, int resolution_factor = 2,
                                   bool ac_only = false);

int worker_count();

}  // namespace nsac

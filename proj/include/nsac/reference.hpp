#pragma once

#include "nsac/curve.hpp"
#include "nsac/potential.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Semi-analytic sharp-interface references: circular bubbles, rigidly
// transported and/or with the curvature-driven radius correction
// R(t) = sqrt(R0^2 - 2 eps^alpha t) coming from mobility m = eps^alpha.
struct ReferenceScenario {
    enum class Kind { stationary_bubble, transported_bubble, mobility_corrected_bubble };
    Kind kind = Kind::stationary_bubble;
    Vec2 center0{0.5, 0.5};
    double R0 = 0.25;
    Vec2 U{0.0, 0.0};          // background velocity (transport kinds)
    double eps = 1.0 / 32;
    double alpha = 0.5;        // mobility exponent
    double delta = 0.0;        // cutoff half-width; <= 0 means R0/3
    Vec2 box{1.0, 1.0};
    bool periodic_wrap = true;

    double cutoff_delta() const { return delta > 0 ? delta : R0 / 3.0; }
    Vec2 center(double t) const;
    double radius(double t) const;
    // signed distance of the reference interface at time t (> 0 inside)
    double signed_dist(Vec2 x, double t) const;
    Curve make_curve(double t, int n = 256) const;
};

// smooth cutoff: 1 on [-delta, delta], 0 outside [-2 delta, 2 delta]
double cutoff_zeta(double d, double delta);

// c_A at leading order: zeta(d) theta0(d/eps) +- (1 - zeta(d)) in the bulk.
double leading_order_c(Vec2 x, double t, const ReferenceScenario& scenario, const Profile& profile);

// sigma H = sigma / R for the stationary bubble (quiescent equilibrium)
double laplace_jump(const ReferenceScenario& scenario, const Profile& profile);

// R(t) = sqrt(R0^2 - 2 eps^alpha t); throws on collapse
double corrected_radius(double R0, double eps, double alpha, double t);

Vec2 transported_center(Vec2 center0, Vec2 U, double t);
Vec2 wrap_to_box(Vec2 p, Vec2 box);

}  // namespace nsac

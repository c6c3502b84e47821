#include "nsac/reference.hpp"

#include <cmath>

namespace nsac {

Vec2 transported_center(Vec2 center0, Vec2 U, double t) {
    return center0 + t * U;
}

Vec2 wrap_to_box(Vec2 p, Vec2 box) {
    p.x = std::fmod(p.x, box.x);
    if (p.x < 0) p.x += box.x;
    p.y = std::fmod(p.y, box.y);
    if (p.y < 0) p.y += box.y;
    return p;
}

double corrected_radius(double R0, double eps, double alpha, double t) {
    const double m = std::pow(eps, alpha);
    const double arg = R0 * R0 - 2.0 * m * t;
    if (arg <= 0.0)
        throw ValidationError("corrected_radius: bubble collapsed before t = " + std::to_string(t));
    return std::sqrt(arg);
}

Vec2 ReferenceScenario::center(double t) const {
    Vec2 c = (kind == Kind::stationary_bubble) ? center0 : transported_center(center0, U, t);
    return periodic_wrap ? wrap_to_box(c, box) : c;
}

double ReferenceScenario::radius(double t) const {
    if (kind == Kind::mobility_corrected_bubble) return corrected_radius(R0, eps, alpha, t);
    return R0;
}

double ReferenceScenario::signed_dist(Vec2 x, double t) const {
    Vec2 c = center(t);
    double dx = x.x - c.x, dy = x.y - c.y;
    if (periodic_wrap) {
        dx = std::remainder(dx, box.x);
        dy = std::remainder(dy, box.y);
    }
    return radius(t) - std::hypot(dx, dy);
}

Curve ReferenceScenario::make_curve(double t, int n) const {
    return make_circle(center(t), radius(t), n);
}

double cutoff_zeta(double d, double delta) {
    return smoothstep5((2.0 * delta - std::abs(d)) / delta);
}

double leading_order_c(Vec2 x, double t, const ReferenceScenario& scenario,
                       const Profile& profile) {
    const double d = scenario.signed_dist(x, t);
    const double delta = scenario.cutoff_delta();
    const double z = cutoff_zeta(d, delta);
    if (z == 0.0) return d > 0 ? 1.0 : -1.0;
    const double th = profile.eval_theta(d / scenario.eps);
    return z * th + (1.0 - z) * (d > 0 ? 1.0 : -1.0);
}

double laplace_jump(const ReferenceScenario& scenario, const Profile& profile) {
    if (scenario.kind != ReferenceScenario::Kind::stationary_bubble)
        throw ValidationError("laplace_jump: defined for the stationary bubble");
    return profile.sigma / scenario.R0;
}

}  // namespace nsac

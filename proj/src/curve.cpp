#include "nsac/curve.hpp"

#include <algorithm>
#include <cmath>

namespace nsac {

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto cross = [](Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; };
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

Vec2 Curve::eval(double sv) const {
    std::complex<double> zx{0, 0}, zy{0, 0};
    const int half = n / 2;
    for (int k = -half; k <= half; ++k) {
        int idx = (k + n) % n;
        std::complex<double> e = std::polar(1.0, k * sv);
        double w = (std::abs(k) == half && n % 2 == 0) ? 0.5 : 1.0;  // split nyquist
        zx += w * cx[idx] * e;
        zy += w * cy[idx] * e;
    }
    return {zx.real(), zy.real()};
}

Vec2 Curve::eval_d(double sv) const {
    std::complex<double> zx{0, 0}, zy{0, 0};
    const int half = n / 2;
    for (int k = -half + 1; k < half; ++k) {
        int idx = (k + n) % n;
        std::complex<double> e = std::complex<double>(0, k) * std::polar(1.0, k * sv);
        zx += cx[idx] * e;
        zy += cy[idx] * e;
    }
    return {zx.real(), zy.real()};
}

Vec2 Curve::eval_dd(double sv) const {
    std::complex<double> zx{0, 0}, zy{0, 0};
    const int half = n / 2;
    for (int k = -half + 1; k < half; ++k) {
        int idx = (k + n) % n;
        std::complex<double> e = -double(k) * double(k) * std::polar(1.0, k * sv);
        zx += cx[idx] * e;
        zy += cy[idx] * e;
    }
    return {zx.real(), zy.real()};
}

Vec2 Curve::unit_normal(double sv) const {
    Vec2 d = eval_d(sv);
    double sp = d.norm();
    return {-d.y / sp, d.x / sp};
}

double Curve::curvature_at(double sv) const {
    Vec2 d = eval_d(sv), dd = eval_dd(sv);
    double sp = d.norm();
    return (d.x * dd.y - d.y * dd.x) / (sp * sp * sp);
}

double Curve::reach_estimate() const {
    double kmax = 0.0;
    for (double k : curvature) kmax = std::max(kmax, std::abs(k));
    return kmax > 0 ? 1.0 / kmax : 1e30;
}

Curve build_curve(const std::vector<Vec2>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 64) throw ValidationError("build_curve: need at least 64 samples");

    // simple-closed check on the sample polygon
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through wrap
            if (segments_intersect(samples[i], samples[(i + 1) % n],
                                   samples[j], samples[(j + 1) % n]))
                throw ValidationError("build_curve: curve is self-intersecting");
        }
    }

    Curve c;
    c.n = n;
    c.x = samples;
    c.s.resize(n);
    for (int i = 0; i < n; ++i) c.s[i] = 2.0 * M_PI * i / n;

    // naive DFT; build-time only
    c.cx.assign(n, {0, 0});
    c.cy.assign(n, {0, 0});
    for (int k = 0; k < n; ++k) {
        std::complex<double> ax{0, 0}, ay{0, 0};
        for (int j = 0; j < n; ++j) {
            std::complex<double> e = std::polar(1.0, -2.0 * M_PI * k * j / n);
            ax += samples[j].x * e;
            ay += samples[j].y * e;
        }
        c.cx[k] = ax / double(n);
        c.cy[k] = ay / double(n);
    }

    c.tangent.resize(n);
    c.normal.resize(n);
    c.speed.resize(n);
    c.curvature.resize(n);
    c.normal_velocity.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        Vec2 d = c.eval_d(c.s[i]);
        double sp = d.norm();
        if (sp <= 0) throw ValidationError("build_curve: degenerate parametrization");
        c.speed[i] = sp;
        c.tangent[i] = {d.x / sp, d.y / sp};
        c.normal[i] = {-c.tangent[i].y, c.tangent[i].x};
        c.curvature[i] = c.curvature_at(c.s[i]);
    }
    return c;
}

Curve make_circle(Vec2 center, double radius, int n) {
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
        double s = 2.0 * M_PI * i / n;
        pts[i] = {center.x + radius * std::cos(s), center.y + radius * std::sin(s)};
    }
    return build_curve(pts);
}

ClosestPoint signed_distance(const Curve& curve, Vec2 p) {
    // coarse scan
    int best = 0;
    double bestd = 1e300;
    for (int i = 0; i < curve.n; ++i) {
        double d2 = (p - curve.x[i]).dot(p - curve.x[i]);
        if (d2 < bestd) { bestd = d2; best = i; }
    }

    // ambiguity guard: a second, well-separated near-minimum
    const double reach = curve.reach_estimate();
    for (int i = 0; i < curve.n; ++i) {
        double gap = std::abs(curve.s[i] - curve.s[best]);
        gap = std::min(gap, 2.0 * M_PI - gap);
        if (gap < 0.5) continue;
        double di = std::sqrt((p - curve.x[i]).dot(p - curve.x[i]));
        bool interior_path = false;
        // only flag if the in-between parameters move far away (true second valley)
        if (di < std::sqrt(bestd) + 1e-12 && di < 0.9 * reach) interior_path = true;
        if (interior_path && std::abs(di - std::sqrt(bestd)) < 1e-9)
            throw ValidationError("signed_distance: ambiguous projection (medial axis)");
    }

    double s = curve.s[best];
    for (int it = 0; it < 60; ++it) {
        Vec2 X = curve.eval(s), Xd = curve.eval_d(s), Xdd = curve.eval_dd(s);
        Vec2 r = p - X;
        double g = r.dot(Xd);
        double gp = -Xd.dot(Xd) + r.dot(Xdd);
        if (std::abs(gp) < 1e-30) break;
        double step = g / gp;
        s -= step;
        if (std::abs(step) < 1e-12) break;
    }
    s = std::fmod(s, 2.0 * M_PI);
    if (s < 0) s += 2.0 * M_PI;

    ClosestPoint cp;
    cp.s = s;
    cp.foot = curve.eval(s);
    cp.normal = curve.unit_normal(s);
    Vec2 r = p - cp.foot;
    cp.d = r.dot(cp.normal);
    // consistency: the residual tangential component must be negligible
    double dist = r.norm();
    if (dist > 1e-12 && std::abs(std::abs(cp.d) - dist) > 1e-8 * (1.0 + dist))
        throw NumericalError("signed_distance: projection Newton did not converge");
    if (std::abs(cp.d) > 0.75 * reach)
        throw ValidationError("signed_distance: point outside the reliable tube");
    return cp;
}

}  // namespace nsac

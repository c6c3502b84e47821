#pragma once

#include <complex>
#include <vector>

#include "nsac/util.hpp"

namespace nsac {

// Closed curve over T^1 = [0, 2pi), represented by trigonometric
// interpolation of uniform samples. The normal is the rot-90 image of the
// tangent; with counterclockwise orientation it points into the enclosed
// region (the interior of the "+" phase), and a circle has curvature +1/R.
struct Curve {
    int n = 0;
    std::vector<double> s;          // uniform parameter samples
    std::vector<Vec2> x;            // position samples
    std::vector<Vec2> tangent, normal;
    std::vector<double> speed;      // |X0'|
    std::vector<double> curvature;  // signed, w.r.t. the rot-90 normal
    std::vector<double> normal_velocity;  // optional, for moving families

    std::vector<std::complex<double>> cx, cy;  // Fourier coefficients

    Vec2 eval(double s) const;
    Vec2 eval_d(double s) const;
    Vec2 eval_dd(double s) const;
    Vec2 unit_normal(double s) const;
    double curvature_at(double s) const;

    double reach_estimate() const;  // min radius of curvature
    double delta() const { return reach_estimate() / 4.0; }
};

// Spectral differentiation of the samples; rejects self-intersecting input.
Curve build_curve(const std::vector<Vec2>& samples);

Curve make_circle(Vec2 center, double radius, int n = 256);

struct ClosestPoint {
    double d = 0.0;   // signed distance, > 0 on the normal side (inside)
    double s = 0.0;   // projection parameter
    Vec2 foot, normal;
};

// Closest-point projection: coarse scan over the samples, then Newton on the
// spectral parametrization. Throws when the query point is outside the
// reliable tube or the projection is ambiguous.
ClosestPoint signed_distance(const Curve& curve, Vec2 p);

}  // namespace nsac

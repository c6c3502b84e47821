#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsac {

// Error taxonomy: validation problems (bad config, violated preconditions)
// vs numerical failures (non-convergence, blow-up). CLI maps these to
// distinct exit codes.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical-validity violations (e.g. grid does not resolve the interface).
struct PhysicsValidationError : ValidationError {
    using ValidationError::ValidationError;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};
inline Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }

inline std::vector<double> linspace(double a, double b, int n_points) {
    std::vector<double> v(n_points);
    for (int i = 0; i < n_points; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / (n_points - 1);
    return v;
}

// Composite Simpson on a uniform grid with an even number of intervals.
inline double simpson(std::span<const double> f, double h) {
    const size_t n = f.size();
    if (n < 3 || n % 2 == 0)
        throw ValidationError("simpson: need odd number of samples (even interval count)");
    double odd = 0.0, even = 0.0;
    for (size_t i = 1; i + 1 < n; i += 2) odd += f[i];
    for (size_t i = 2; i + 1 < n; i += 2) even += f[i];
    return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

// Cumulative trapezoid from f[0]; out[0] = 0.
inline std::vector<double> cumtrapz(std::span<const double> f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    double slope_stderr = 0.0;  // standard error of the slope
    double ci95() const { return 1.96 * slope_stderr; }
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n != y.size() || n < 2) throw ValidationError("fit_line: need >= 2 matched samples");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw ValidationError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss = 0;
        for (size_t i = 0; i < n; ++i) {
            double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ss += r * r;
        }
        fit.slope_stderr = std::sqrt(ss / ((n - 2) * sxx));
    }
    return fit;
}

// Log-log order fit: norm ~ C * eps^order.
inline LineFit fit_order(std::span<const double> eps, std::span<const double> norms) {
    std::vector<double> lx(eps.size()), ly(norms.size());
    for (size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] <= 0 || norms[i] <= 0)
            throw ValidationError("fit_order: needs positive values");
        lx[i] = std::log(eps[i]);
        ly[i] = std::log(norms[i]);
    }
    return fit_line(lx, ly);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// C^2 quintic smoothstep: 0 for u<=0, 1 for u>=1.
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
inline double smoothstep5_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

}  // namespace nsac

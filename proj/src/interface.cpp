#include "nsac/interface.hpp"

#include <cmath>

namespace nsac {

InterfaceExtract extract_interface(const std::vector<double>& c, int nx, int ny, double h) {
    auto at = [&](int i, int j) { return c[static_cast<size_t>(i) * ny + j]; };
    auto pos = [&](int i, int j) { return Vec2{(i + 0.5) * h, (j + 0.5) * h}; };

    InterfaceExtract out;
    std::vector<Vec2> pts;

    // lattice cells between the four neighboring centers
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
            int code = (v00 > 0) | ((v10 > 0) << 1) | ((v11 > 0) << 2) | ((v01 > 0) << 3);
            if (code == 0 || code == 15) continue;

            auto lerp = [](Vec2 a, Vec2 b, double va, double vb) {
                double t = va / (va - vb);
                return Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            };
            Vec2 p00 = pos(i, j), p10 = pos(i + 1, j), p01 = pos(i, j + 1), p11 = pos(i + 1, j + 1);
            // edge crossings: bottom, right, top, left
            Vec2 e[4];
            bool has[4] = {false, false, false, false};
            if ((v00 > 0) != (v10 > 0)) { e[0] = lerp(p00, p10, v00, v10); has[0] = true; }
            if ((v10 > 0) != (v11 > 0)) { e[1] = lerp(p10, p11, v10, v11); has[1] = true; }
            if ((v01 > 0) != (v11 > 0)) { e[2] = lerp(p01, p11, v01, v11); has[2] = true; }
            if ((v00 > 0) != (v01 > 0)) { e[3] = lerp(p00, p01, v00, v01); has[3] = true; }

            int cnt = has[0] + has[1] + has[2] + has[3];
            if (cnt == 2) {
                Vec2 a, b;
                bool first = true;
                for (int k = 0; k < 4; ++k)
                    if (has[k]) { (first ? a : b) = e[k]; first = false; }
                out.segments.emplace_back(a, b);
            } else if (cnt == 4) {
                // saddle: resolve by the cell-average sign
                double mid = 0.25 * (v00 + v10 + v01 + v11);
                if ((mid > 0) == (v00 > 0)) {
                    out.segments.emplace_back(e[0], e[1]);
                    out.segments.emplace_back(e[2], e[3]);
                } else {
                    out.segments.emplace_back(e[0], e[3]);
                    out.segments.emplace_back(e[1], e[2]);
                }
            }
        }
    }
    if (out.segments.empty())
        throw ValidationError("extract_interface: field has no zero crossing");

    for (auto& [a, b] : out.segments) {
        out.total_length += (b - a).norm();
        pts.push_back(a);
        pts.push_back(b);
    }

    // Kasa fit: minimize sum ((x-a)^2 + (y-b)^2 - R^2)^2, linear in (a, b, a^2+b^2-R^2)
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sxz = 0, syz = 0, sz = 0;
    const double n = static_cast<double>(pts.size());
    for (Vec2 p : pts) {
        double z = p.x * p.x + p.y * p.y;
        sx += p.x; sy += p.y; sxx += p.x * p.x; syy += p.y * p.y; sxy += p.x * p.y;
        sxz += p.x * z; syz += p.y * z; sz += z;
    }
    double a11 = sxx - sx * sx / n, a12 = sxy - sx * sy / n, a22 = syy - sy * sy / n;
    double b1 = 0.5 * (sxz - sx * sz / n), b2 = 0.5 * (syz - sy * sz / n);
    double det = a11 * a22 - a12 * a12;
    if (std::abs(det) > 1e-30) {
        out.center.x = (a22 * b1 - a12 * b2) / det;
        out.center.y = (a11 * b2 - a12 * b1) / det;
        double r2 = (sz - 2 * (out.center.x * sx + out.center.y * sy)) / n +
                    out.center.x * out.center.x + out.center.y * out.center.y;
        out.radius = std::sqrt(std::max(r2, 0.0));
        double ss = 0.0;
        for (Vec2 p : pts) {
            double d = (p - out.center).norm() - out.radius;
            ss += d * d;
        }
        out.fit_rms = std::sqrt(ss / n);
    }
    return out;
}

}  // namespace nsac

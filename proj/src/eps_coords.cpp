#include "nsac/eps_coords.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

namespace nsac {

namespace {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a;
}

double wrap_diff(double a) {  // to (-pi, pi]
    a = std::fmod(a, 2.0 * M_PI);
    if (a > M_PI) a -= 2.0 * M_PI;
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

// Periodic field sampled on a uniform (r, s) lattice with exact r-derivative
// samples: Fourier interpolation in s, cubic Hermite in r.
struct LatticeField {
    int nr = 0, ns = 0;
    double rmin = 0.0, dr = 0.0;
    std::vector<std::complex<double>> cval, crder;  // nr rows of ns coefficients

    static std::vector<std::complex<double>> dft_rows(const std::vector<double>& f, int nr, int ns) {
        std::vector<std::complex<double>> c(static_cast<size_t>(nr) * ns);
        for (int ir = 0; ir < nr; ++ir)
            for (int k = 0; k < ns; ++k) {
                std::complex<double> a{0, 0};
                for (int j = 0; j < ns; ++j)
                    a += f[static_cast<size_t>(ir) * ns + j] * std::polar(1.0, -2.0 * M_PI * k * j / ns);
                c[static_cast<size_t>(ir) * ns + k] = a / double(ns);
            }
        return c;
    }

    double row_eval(const std::vector<std::complex<double>>& c, int ir, double s, int sderiv) const {
        std::complex<double> z{0, 0};
        const int half = ns / 2;
        for (int k = -half; k <= half; ++k) {
            int idx = (k + ns) % ns;
            double w = (std::abs(k) == half && ns % 2 == 0) ? 0.5 : 1.0;
            std::complex<double> e = std::polar(1.0, k * s);
            std::complex<double> fac{1.0, 0.0};
            if (sderiv == 1) fac = std::complex<double>(0, k);
            z += w * fac * c[static_cast<size_t>(ir) * ns + idx] * e;
        }
        return z.real();
    }

    // deriv: 0 -> value, 1 -> d/dr, 2 -> d/ds
    double eval(double r, double s, int deriv) const {
        double u = (r - rmin) / dr;
        int i = std::clamp(static_cast<int>(std::floor(u)), 0, nr - 2);
        double t = u - i;
        int sd = (deriv == 2) ? 1 : 0;
        double v0 = row_eval(cval, i, s, sd), v1 = row_eval(cval, i + 1, s, sd);
        double m0 = row_eval(crder, i, s, sd), m1 = row_eval(crder, i + 1, s, sd);
        if (deriv == 1) {
            double h00 = 6 * t * (t - 1), h10 = 3 * t * t - 4 * t + 1;
            double h01 = -6 * t * (t - 1), h11 = 3 * t * t - 2 * t;
            return (h00 / dr) * v0 + h10 * m0 + (h01 / dr) * v1 + h11 * m1;
        }
        double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * v0 + h10 * dr * m0 + h01 * v1 + h11 * dr * m1;
    }
};

}  // namespace

PerturbationRS PerturbationRS::zero() {
    auto z = [](double, double) { return 0.0; };
    return {z, z, z};
}

EpsCoords::EpsCoords(const Curve& curve, PerturbationRS dcorr, PerturbationRS scorr,
                     double eps, double tube_halfwidth)
    : curve_(&curve), dcorr_(std::move(dcorr)), scorr_(std::move(scorr)),
      eps_(eps), tube_(tube_halfwidth) {}

Vec2 EpsCoords::base_gradS0(double r, double s) const {
    // grad S0 = tau / (|X0'| (1 - kappa r))
    Vec2 d = curve_->eval_d(s);
    double sp = d.norm();
    double denom = sp * sp * (1.0 - curve_->curvature_at(s) * r);
    return {d.x / denom, d.y / denom};
}

double EpsCoords::d_eps(double r, double s) const { return r + dcorr_.value(r, s); }
double EpsCoords::S_eps(double r, double s) const { return s + scorr_.value(r, s); }

Vec2 EpsCoords::grad_d(double r, double s) const {
    Vec2 n = curve_->unit_normal(s);
    Vec2 gS0 = base_gradS0(r, s);
    double a = 1.0 + dcorr_.dr(r, s);
    double b = dcorr_.ds(r, s);
    return {a * n.x + b * gS0.x, a * n.y + b * gS0.y};
}

Vec2 EpsCoords::grad_S(double r, double s) const {
    Vec2 n = curve_->unit_normal(s);
    Vec2 gS0 = base_gradS0(r, s);
    double a = scorr_.dr(r, s);
    double b = 1.0 + scorr_.ds(r, s);
    return {a * n.x + b * gS0.x, a * n.y + b * gS0.y};
}

double EpsCoords::d_eps_at(Vec2 p) const {
    auto cp = signed_distance(*curve_, p);
    return d_eps(cp.d, cp.s);
}

double EpsCoords::S_eps_at(Vec2 p) const {
    auto cp = signed_distance(*curve_, p);
    return wrap_angle(S_eps(cp.d, cp.s));
}

void EpsCoords::invert(double rr, double ss, double& r, double& s) const {
    r = rr;
    s = wrap_angle(ss);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
        double f1 = d_eps(r, s) - rr;
        double f2 = wrap_diff(S_eps(r, s) - ss);
        if (std::abs(f1) + std::abs(f2) < 1e-13) { ok = true; break; }
        double a11 = 1.0 + dcorr_.dr(r, s), a12 = dcorr_.ds(r, s);
        double a21 = scorr_.dr(r, s), a22 = 1.0 + scorr_.ds(r, s);
        double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-14)
            throw NumericalError("X_eps: singular Newton system (eps too large)");
        double sr = (a22 * f1 - a12 * f2) / det;
        double st = (-a21 * f1 + a11 * f2) / det;
        // damping: stay inside the tube
        double lim = std::max(std::abs(sr), std::abs(st) * 0.5);
        double damp = lim > 0.5 * tube_ ? 0.5 * tube_ / lim : 1.0;
        r -= damp * sr;
        s = wrap_angle(s - damp * st);
        r = std::clamp(r, -1.5 * tube_, 1.5 * tube_);
    }
    if (!ok) {
        double f1 = d_eps(r, s) - rr;
        double f2 = wrap_diff(S_eps(r, s) - ss);
        if (std::abs(f1) + std::abs(f2) > 1e-10)
            throw NumericalError("X_eps: Newton inversion failed at node (r=" +
                                 std::to_string(rr) + ", s=" + std::to_string(ss) + ")");
    }
}

Vec2 EpsCoords::X_eps(double rr, double ss) const {
    double r, s;
    invert(rr, ss, r, s);
    Vec2 n = curve_->unit_normal(s);
    return curve_->eval(s) + r * n;
}

double EpsCoords::J_formula(double rr, double ss) const {
    double r, s;
    invert(rr, ss, r, s);
    Vec2 gd = grad_d(r, s), gS = grad_S(r, s);
    double det2 = gd.dot(gd) * gS.dot(gS) - gd.dot(gS) * gd.dot(gS);
    if (det2 <= 0) throw NumericalError("J_formula: degenerate coordinate gradients");
    return 1.0 / std::sqrt(det2);
}

double EpsCoords::J_fd(double rr, double ss, double step) const {
    Vec2 xp = X_eps(rr + step, ss), xm = X_eps(rr - step, ss);
    Vec2 yp = X_eps(rr, ss + step), ym = X_eps(rr, ss - step);
    double arx = (xp.x - xm.x) / (2 * step), ary = (xp.y - xm.y) / (2 * step);
    double asx = (yp.x - ym.x) / (2 * step), asy = (yp.y - ym.y) / (2 * step);
    return std::abs(arx * asy - ary * asx);
}

double EpsCoords::identity_residual(double rr, double ss, double step) const {
    Vec2 xp = X_eps(rr + step, ss), xm = X_eps(rr - step, ss);
    Vec2 yp = X_eps(rr, ss + step), ym = X_eps(rr, ss - step);
    Vec2 dXr{(xp.x - xm.x) / (2 * step), (xp.y - xm.y) / (2 * step)};
    Vec2 dXs{(yp.x - ym.x) / (2 * step), (yp.y - ym.y) / (2 * step)};
    double r, s;
    invert(rr, ss, r, s);
    Vec2 gd = grad_d(r, s), gS = grad_S(r, s);
    double m[2][2] = {{dXr.x * gd.x + dXs.x * gS.x, dXr.x * gd.y + dXs.x * gS.y},
                      {dXr.y * gd.x + dXs.y * gS.x, dXr.y * gd.y + dXs.y * gS.y}};
    double res = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            res = std::max(res, std::abs(m[i][j] - (i == j ? 1.0 : 0.0)));
    return res;
}

EpsCoords make_eps_coords(const Curve& curve, const PerturbationRS& dtilde,
                          const PerturbationRS& Stilde, double eps, double eta) {
    const double tube = 3.0 * curve.delta();
    const double a = std::pow(eps, eta);
    // support condition: dtilde must vanish near the tube edge
    for (double s = 0; s < 2 * M_PI; s += 0.37) {
        if (std::abs(dtilde.value(0.95 * tube, s)) > 1e-12 ||
            std::abs(dtilde.value(-0.95 * tube, s)) > 1e-12)
            throw ValidationError("make_eps_coords: dtilde must vanish near the tube edge");
    }
    PerturbationRS dc{[=, v = dtilde.value](double r, double s) { return a * v(r, s); },
                      [=, d = dtilde.dr](double r, double s) { return a * d(r, s); },
                      [=, d = dtilde.ds](double r, double s) { return a * d(r, s); }};
    const double b = a / (2.0 * M_PI);
    PerturbationRS sc{[=, v = Stilde.value](double r, double s) { return b * v(r, s); },
                      [=, d = Stilde.dr](double r, double s) { return b * d(r, s); },
                      [=, d = Stilde.ds](double r, double s) { return b * d(r, s); }};
    return EpsCoords(curve, std::move(dc), std::move(sc), eps, tube);
}

EpsCoords make_corrected_eps_coords(const Curve& curve, const PerturbationRS& dtilde,
                                    double eps, int nr, int ns) {
    const double tube = 3.0 * curve.delta();
    if (nr % 2 == 0) ++nr;  // center the lattice at r = 0
    const double dr = 2.0 * tube / (nr - 1);

    // lattice samples of dtilde partials and the base metric factor
    auto idx = [ns](int ir, int is) { return static_cast<size_t>(ir) * ns + is; };
    std::vector<double> Dr(static_cast<size_t>(nr) * ns), Ds(static_cast<size_t>(nr) * ns),
        G2(static_cast<size_t>(nr) * ns);
    std::vector<double> svals(ns);
    for (int is = 0; is < ns; ++is) svals[is] = 2.0 * M_PI * is / ns;
    for (int ir = 0; ir < nr; ++ir) {
        double r = -tube + ir * dr;
        for (int is = 0; is < ns; ++is) {
            double s = svals[is];
            Dr[idx(ir, is)] = dtilde.dr(r, s);
            Ds[idx(ir, is)] = dtilde.ds(r, s);
            double sp = curve.eval_d(s).norm();
            double g = sp * (1.0 - curve.curvature_at(s) * r);
            G2[idx(ir, is)] = 1.0 / (g * g);
        }
    }

    // successive corrections: n . grad S_j = rhs_j, S_j = 0 on the curve,
    // integrated along normal rays from r = 0
    const int mid = (nr - 1) / 2;
    auto integrate_rays = [&](const std::vector<double>& rhs) {
        std::vector<double> v(static_cast<size_t>(nr) * ns, 0.0);
        for (int is = 0; is < ns; ++is) {
            for (int ir = mid + 1; ir < nr; ++ir)
                v[idx(ir, is)] = v[idx(ir - 1, is)] +
                                 0.5 * dr * (rhs[idx(ir - 1, is)] + rhs[idx(ir, is)]);
            for (int ir = mid - 1; ir >= 0; --ir)
                v[idx(ir, is)] = v[idx(ir + 1, is)] -
                                 0.5 * dr * (rhs[idx(ir + 1, is)] + rhs[idx(ir, is)]);
        }
        return v;
    };
    auto spectral_ds = [&](const std::vector<double>& v) {
        auto c = LatticeField::dft_rows(v, nr, ns);
        std::vector<double> out(v.size());
        LatticeField tmp;
        tmp.nr = nr; tmp.ns = ns; tmp.rmin = -tube; tmp.dr = dr;
        for (int ir = 0; ir < nr; ++ir)
            for (int is = 0; is < ns; ++is)
                out[idx(ir, is)] = tmp.row_eval(c, ir, svals[is], 1);
        return out;
    };

    std::vector<std::vector<double>> rhs(3), val(3), sder(3);
    // S_1/2
    rhs[0].resize(static_cast<size_t>(nr) * ns);
    for (size_t i = 0; i < rhs[0].size(); ++i) rhs[0][i] = -Ds[i] * G2[i];
    val[0] = integrate_rays(rhs[0]);
    sder[0] = spectral_ds(val[0]);
    // S_1
    rhs[1].resize(rhs[0].size());
    for (size_t i = 0; i < rhs[1].size(); ++i)
        rhs[1][i] = -(Dr[i] * rhs[0][i] + Ds[i] * sder[0][i] * G2[i]);
    val[1] = integrate_rays(rhs[1]);
    sder[1] = spectral_ds(val[1]);
    // S_3/2
    rhs[2].resize(rhs[0].size());
    for (size_t i = 0; i < rhs[2].size(); ++i)
        rhs[2][i] = -(Dr[i] * rhs[1][i] + Ds[i] * sder[1][i] * G2[i]);
    val[2] = integrate_rays(rhs[2]);

    // pack the eps-weighted sum into lattice fields for evaluation
    auto mk_field = [&](const std::vector<double>& v, const std::vector<double>& rd) {
        auto f = std::make_shared<LatticeField>();
        f->nr = nr; f->ns = ns; f->rmin = -tube; f->dr = dr;
        f->cval = LatticeField::dft_rows(v, nr, ns);
        f->crder = LatticeField::dft_rows(rd, nr, ns);
        return f;
    };
    const double e12 = std::sqrt(eps), e1 = eps, e32 = eps * std::sqrt(eps);
    std::vector<double> sum(val[0].size()), sumr(val[0].size());
    for (size_t i = 0; i < sum.size(); ++i) {
        sum[i] = e12 * val[0][i] + e1 * val[1][i] + e32 * val[2][i];
        sumr[i] = e12 * rhs[0][i] + e1 * rhs[1][i] + e32 * rhs[2][i];
    }
    auto fS = mk_field(sum, sumr);

    PerturbationRS scorr{
        [fS](double r, double s) { return fS->eval(r, s, 0); },
        [fS](double r, double s) { return fS->eval(r, s, 1); },
        [fS](double r, double s) { return fS->eval(r, s, 2); }};
    PerturbationRS dc{
        [e12, v = dtilde.value](double r, double s) { return e12 * v(r, s); },
        [e12, d = dtilde.dr](double r, double s) { return e12 * d(r, s); },
        [e12, d = dtilde.ds](double r, double s) { return e12 * d(r, s); }};
    return EpsCoords(curve, std::move(dc), std::move(scorr), eps, tube);
}

OrthoReport verify_orthogonality_asymptotics(const Curve& curve, const PerturbationRS& dtilde,
                                             const std::vector<double>& eps_list) {
    OrthoReport rep;
    for (double eps : eps_list) {
        auto coords = make_corrected_eps_coords(curve, dtilde, eps);
        double tube = coords.tube();
        double defect = 0.0;
        for (int ir = 0; ir <= 32; ++ir) {
            double r = -0.8 * tube + 1.6 * tube * ir / 32.0;
            for (int is = 0; is < 64; ++is) {
                double s = 2.0 * M_PI * is / 64;
                defect = std::max(defect, std::abs(coords.orthogonality_defect(r, s)));
            }
        }
        rep.rows.push_back({eps, defect});
    }
    if (rep.rows.size() >= 2) {
        std::vector<double> le, ld;
        for (const auto& row : rep.rows) {
            if (row.defect <= 0) continue;
            le.push_back(std::log(row.eps));
            ld.push_back(std::log(row.defect));
        }
        if (le.size() >= 2) rep.fitted_order = fit_line(le, ld).slope;
    }
    return rep;
}

double find_eps1(const Curve& curve, const PerturbationRS& dtilde, double eps_start) {
    double eps = eps_start;
    for (int tries = 0; tries < 30; ++tries) {
        bool ok = true;
        try {
            auto coords = make_corrected_eps_coords(curve, dtilde, eps);
            double tube = coords.tube();
            for (int ir = 0; ir <= 8 && ok; ++ir)
                for (int is = 0; is < 16 && ok; ++is)
                    coords.X_eps(-0.8 * tube + 1.6 * tube * ir / 8.0, 2.0 * M_PI * is / 16);
        } catch (const NumericalError&) {
            ok = false;
        }
        if (ok) return eps;
        eps *= 0.5;
    }
    throw NumericalError("find_eps1: no workable eps found");
}

}  // namespace nsac

#pragma once

#include <functional>
#include <vector>

#include "nsac/curve.hpp"
#include "nsac/util.hpp"

namespace nsac {

// Scalar field on the tube, expressed in base tubular coordinates (r, s).
struct PerturbationRS {
    std::function<double(double r, double s)> value;
    std::function<double(double r, double s)> dr;  // partials; both required
    std::function<double(double r, double s)> ds;
    static PerturbationRS zero();
};

// Perturbed tubular coordinates d_eps = d0 + eps^eta dtilde,
// S_eps = S0 + (S-correction), with the forward map X_eps recovered by
// damped Newton inversion per node and the Jacobian in closed form.
class EpsCoords {
public:
    EpsCoords(const Curve& curve, PerturbationRS dcorr, PerturbationRS scorr,
              double eps, double tube_halfwidth);

    double eps() const { return eps_; }
    double tube() const { return tube_; }
    const Curve& curve() const { return *curve_; }

    // coordinate values and ambient gradients at base coordinates (r, s)
    double d_eps(double r, double s) const;
    double S_eps(double r, double s) const;
    Vec2 grad_d(double r, double s) const;
    Vec2 grad_S(double r, double s) const;
    double orthogonality_defect(double r, double s) const { return grad_d(r, s).dot(grad_S(r, s)); }

    // ambient evaluation through the closest-point projection
    double d_eps_at(Vec2 p) const;
    double S_eps_at(Vec2 p) const;

    // forward map: the point with d_eps = rr, S_eps = ss
    Vec2 X_eps(double rr, double ss) const;

    // |det DX_eps| two ways: closed form vs finite differences of X_eps
    double J_formula(double rr, double ss) const;
    double J_fd(double rr, double ss, double step = 1e-5) const;

    // residual of  dr_X ox grad_d + ds_X ox grad_S = I  at a node
    double identity_residual(double rr, double ss, double step = 1e-5) const;

private:
    // base tubular frame helpers
    Vec2 base_gradS0(double r, double s) const;
    void invert(double rr, double ss, double& r, double& s) const;

    const Curve* curve_;
    PerturbationRS dcorr_, scorr_;
    double eps_, tube_;
};

// Generic constructor (user-supplied dtilde, Stilde as in the eps^eta scaling).
EpsCoords make_eps_coords(const Curve& curve, const PerturbationRS& dtilde,
                          const PerturbationRS& Stilde, double eps, double eta = 0.5);

// S-corrections S_1/2, S_1, S_3/2 solving  n . grad S_j = -(lower-order terms)
// along normal rays, so that grad S_eps . grad d_eps = O(eps^2).
EpsCoords make_corrected_eps_coords(const Curve& curve, const PerturbationRS& dtilde,
                                    double eps, int nr = 129, int ns = 128);

struct OrthoRow {
    double eps, defect;
};
struct OrthoReport {
    std::vector<OrthoRow> rows;
    double fitted_order = 0.0;  // slope of log defect vs log eps
};

OrthoReport verify_orthogonality_asymptotics(const Curve& curve, const PerturbationRS& dtilde,
                                             const std::vector<double>& eps_list);

// Adaptive detection of the inversion threshold: halve eps until the Newton
// inversion converges on the whole test lattice.
double find_eps1(const Curve& curve, const PerturbationRS& dtilde, double eps_start = 0.4);

}  // namespace nsac

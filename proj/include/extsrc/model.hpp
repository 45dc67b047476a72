// Explicit solution of the limiting 3x3 matrix problem away from the branch
// points.  Column j of N is built from the sheet value xi_j(z) and the
// quartic R(xi) = (xi^2 + p^2)(xi^2 - q^2); the square root of R is carried
// continuously along the same cut-avoiding path the sheet tracker walks, so
// that N -> I at infinity fixes every branch.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "extsrc/errors.hpp"
#include "extsrc/mat3.hpp"
#include "extsrc/richardson.hpp"
#include "extsrc/surface.hpp"

namespace extsrc {

struct ModelSolution {
    Mat3 N;
    SheetValues xi;
};

struct ModelJumpResidual {
    const char* contour;
    cplx point;
    double residual;
};

struct ModelJumpReport {
    std::vector<ModelJumpResidual> entries;
    double max_residual = 0.0;
};

class ModelEvaluator {
  public:
    explicit ModelEvaluator(double a) : a_(a), bd_(branch_points(a)) {}

    double a() const { return a_; }
    const BranchData& branch() const { return bd_; }

    // N(z) for z off both cuts.
    ModelSolution model(cplx z) const {
        check_domain(z);
        SheetTracker tr(a_);
        std::array<cplx, 3> w = seed_sqrts(tr);
        std::vector<cplx> path = detail::anchor_path(z, bd_.z1, bd_.z2, tr.pos());
        for (cplx p : path) walk_leg(tr, w, p);
        return assemble(tr.values(), w);
    }

    Mat3 model_N(cplx z) const { return model(z).N; }

    // One-sided boundary value on a cut; dir points from the cut toward the
    // side being approached.
    Mat3 model_boundary(cplx z_on_cut, cplx dir) const {
        std::array<double, 3> lad = boundary_eps_ladder();
        std::vector<double> eps(lad.begin(), lad.end());
        std::array<std::vector<cplx>, 9> seq;
        for (double e : eps) {
            Mat3 m = model_N(z_on_cut + e * dir);
            for (int k = 0; k < 9; ++k) seq[k].push_back(m(k / 3, k % 3));
        }
        Mat3 out;
        for (int k = 0; k < 9; ++k)
            out(k / 3, k % 3) = extrapolate(seq[k], eps, {1.0, 2.0});
        return out;
    }

  private:
    void check_domain(cplx z) const {
        double tol = 1e-6 * (1.0 + bd_.z1);
        for (cplx w : {cplx(bd_.z1, 0), cplx(-bd_.z1, 0), cplx(0, bd_.z2),
                       cplx(0, -bd_.z2)})
            if (std::abs(z - w) < tol)
                throw BranchPointProximity("model_N: z too close to a branch point");
        if (z.imag() == 0.0 && std::fabs(z.real()) <= bd_.z1)
            throw PathBlocked("model_N: z on the real cut; use model_boundary");
        if (z.real() == 0.0 && std::fabs(z.imag()) <= bd_.z2)
            throw PathBlocked("model_N: z on the imaginary cut; use model_boundary");
    }

    cplx quartic_R(cplx xi) const {
        cplx x2 = xi * xi;
        return (x2 + bd_.p * bd_.p) * (x2 - bd_.q * bd_.q);
    }

    // Branch seeds at the anchor z0 = 10(1+z1): xi_1 ~ z0 makes sqrt(R) ~
    // xi_1^2 > 0, while R(+-a) = -2a^2 and the normalization at infinity
    // demands sqrt(R) -> -i sqrt(2) a on sheet 2 and +i sqrt(2) a on sheet 3.
    std::array<cplx, 3> seed_sqrts(const SheetTracker& tr) const {
        std::array<cplx, 3> w;
        std::array<cplx, 3> want = {tr.xi()[0] * tr.xi()[0],
                                    cplx(0.0, -std::sqrt(2.0) * a_),
                                    cplx(0.0, std::sqrt(2.0) * a_)};
        for (int j = 0; j < 3; ++j) {
            cplx s = std::sqrt(quartic_R(tr.xi()[j]));
            w[j] = (std::abs(s - want[j]) <= std::abs(s + want[j])) ? s : -s;
        }
        return w;
    }

    // Distance from xi to the nearest zero of R; a substep that moves each
    // root by less than a fraction of this cannot wind arg(R) past a
    // quarter turn per factor.
    double zero_clearance(cplx xi) const {
        return std::min({std::abs(xi - bd_.q), std::abs(xi + bd_.q),
                         std::abs(xi - cplx(0.0, bd_.p)),
                         std::abs(xi + cplx(0.0, bd_.p))});
    }

    // Advance the tracker to q in substeps small enough that each sqrt(R)
    // rotates by much less than a quarter turn, so the nearest-candidate
    // branch choice is unambiguous.  The displacement guard is essential:
    // the endpoint value of R alone cannot detect a full 2 pi winding.
    void walk_leg(SheetTracker& tr, std::array<cplx, 3>& w, cplx q) const {
        int guard = 0;
        while (std::abs(tr.pos() - q) > 0.0) {
            if (++guard > 200000)
                throw NumericalError("model_N: step budget exceeded");
            cplx from = tr.pos();
            std::array<cplx, 3> xi_from = tr.xi();
            cplx target = q;
            for (;;) {
                tr.move_to(target);
                bool ok = true;
                for (int j = 0; j < 3; ++j) {
                    cplx r = quartic_R(tr.xi()[j]);
                    cplx prev = w[j] * w[j];
                    if (std::abs(r - prev) >
                            0.5 * std::min(std::abs(r), std::abs(prev)) ||
                        std::abs(tr.xi()[j] - xi_from[j]) >
                            0.3 * zero_clearance(xi_from[j])) {
                        ok = false;
                        break;
                    }
                }
                if (ok || std::abs(target - from) < 1e-13) {
                    for (int j = 0; j < 3; ++j) {
                        cplx s = std::sqrt(quartic_R(tr.xi()[j]));
                        w[j] = (std::abs(s - w[j]) <= std::abs(s + w[j])) ? s : -s;
                    }
                    break;
                }
                // rewind and retry with a shorter substep
                tr.move_to(from);
                target = from + 0.5 * (target - from);
            }
        }
    }

    ModelSolution assemble(const SheetValues& sv, const std::array<cplx, 3>& w) const {
        Mat3 N;
        const cplx mi_over_s2(0.0, -1.0 / std::sqrt(2.0));
        for (int j = 0; j < 3; ++j) {
            cplx xi = sv[j + 1];
            N(0, j) = (xi * xi - a_ * a_) / w[j];
            N(1, j) = mi_over_s2 * (xi + a_) / w[j];
            N(2, j) = mi_over_s2 * (xi - a_) / w[j];
        }
        return {N, sv};
    }

    double a_;
    BranchData bd_;
};

inline Mat3 model_N(cplx z, double a) { return ModelEvaluator(a).model_N(z); }

// Residuals of the three jump relations of N on its cuts.
inline ModelJumpReport verify_model_jumps(double a, int points_per_piece = 6) {
    ModelEvaluator ev(a);
    const BranchData& bd = ev.branch();
    ModelJumpReport rep;
    const cplx up(0.0, 1.0), down(0.0, -1.0), left(-1.0, 0.0), right(1.0, 0.0);

    Mat3 Jneg;  // on [-z1, 0): [[0,0,1],[0,1,0],[-1,0,0]]
    Jneg(0, 2) = 1.0;
    Jneg(1, 1) = 1.0;
    Jneg(2, 0) = -1.0;
    Mat3 Jpos;  // on (0, z1]: [[0,1,0],[-1,0,0],[0,0,1]]
    Jpos(0, 1) = 1.0;
    Jpos(1, 0) = -1.0;
    Jpos(2, 2) = 1.0;
    Mat3 Jim;  // on [-iz2, iz2]: [[1,0,0],[0,0,1],[0,-1,0]]
    Jim(0, 0) = 1.0;
    Jim(1, 2) = 1.0;
    Jim(2, 1) = -1.0;

    auto record = [&](const char* name, cplx pt, const Mat3& Np, const Mat3& Nm,
                      const Mat3& J) {
        double res = (Np - Nm * J).norm() /
                     std::max(1.0, std::max(Np.norm(), Nm.norm()));
        rep.entries.push_back({name, pt, res});
        rep.max_residual = std::max(rep.max_residual, res);
    };

    for (int k = 0; k < points_per_piece; ++k) {
        double t = (k + 0.5) / points_per_piece;
        cplx xp(t * 0.95 * bd.z1 + 0.02, 0.0);
        record("(0,z1)", xp, ev.model_boundary(xp, up),
               ev.model_boundary(xp, down), Jpos);
        cplx xm(-(t * 0.95 * bd.z1 + 0.02), 0.0);
        record("(-z1,0)", xm, ev.model_boundary(xm, up),
               ev.model_boundary(xm, down), Jneg);
        cplx yy(0.0, (2.0 * t - 1.0) * 0.9 * bd.z2);
        if (std::abs(yy) < 0.02) yy = cplx(0.0, 0.05 * bd.z2);
        record("(-iz2,iz2)", yy, ev.model_boundary(yy, left),
               ev.model_boundary(yy, right), Jim);
    }
    return rep;
}

}  // namespace extsrc

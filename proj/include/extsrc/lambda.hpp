#pragma once

// Lambda-functions: primitives of the xi-functions along cut-avoiding
// paths, their constants at infinity, one-sided boundary values, jump
// verification, and h(x) for the kernel rescaling.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "extsrc/errors.hpp"
#include "extsrc/gauss.hpp"
#include "extsrc/richardson.hpp"
#include "extsrc/surface.hpp"

namespace extsrc {

namespace quad {
inline const std::vector<double>& gl_nodes(int n = 16) { return gl_rule().x; }
inline const std::vector<double>& gl_weights(int n = 16) { return gl_rule().w; }
}  // namespace quad

class LambdaEvaluator {
  public:
    explicit LambdaEvaluator(double a) : a_(a), bd_(branch_points(a)) {}

    double a() const { return a_; }
    const BranchData& branch() const { return bd_; }

    // lambda_j(z) for z strictly inside the analyticity domain of
    // lambda_j.  j is 1-based.
    cplx lambda(cplx z, int j) const {
        check_domain(z, j);
        std::vector<cplx> way = path_to(z, j);
        cplx base = (j == 3) ? cplx(-bd_.z1, 0.0) : cplx(bd_.z1, 0.0);

        // Tracker brought to the first waypoint through cut-free territory.
        SheetTracker tr(a_);
        tr.move_along(detail::anchor_path(way[0], bd_.z1, bd_.z2, tr.pos()));

        // First leg ends at the branch point: integrate with the u^2
        // substitution, walking nodes from way[0] down toward the base.
        cplx total = -integrate_sqrt_leg(tr, way[0], base, j - 1);
        for (size_t k = 0; k + 1 < way.size(); ++k)
            total += integrate_leg(tr, way[k], way[k + 1], j - 1);
        if (j == 3) total += lambda1_minus_at_minus_z1();
        return total;
    }

    // One-sided boundary value on a cut: approach from dir (unit-ish
    // complex offset direction) with the epsilon ladder.
    cplx lambda_boundary(cplx z_on_cut, int j, cplx dir) const {
        std::array<double, 3> eps = boundary_eps_ladder();
        std::vector<cplx> vals;
        std::vector<double> es(eps.begin(), eps.end());
        for (double e : eps) vals.push_back(lambda(z_on_cut + e * dir, j));
        // one-sided limits are analytic in the offset: error model e + e^2
        return extrapolate(vals, es, {1.0, 2.0});
    }

    // Re lambda_{1+}(x) - x^2/4.
    double h_function(double x) const {
        cplx l1;
        if (std::fabs(x) > bd_.z1 + 1e-12 && x > 0.0)
            l1 = lambda(cplx(x, 0.0), 1);
        else
            l1 = lambda_boundary(cplx(x, 0.0), 1, cplx(0.0, 1.0));
        return l1.real() - 0.25 * x * x;
    }

    // Contour integrals of xi_j around all cuts (circle |z| = z1 + 1).
    std::array<cplx, 3> loop_integrals() const {
        double R = bd_.z1 + 1.0;
        SheetTracker tr(a_);
        tr.move_to(cplx(R, 0.0));
        std::array<cplx, 3> I = {0.0, 0.0, 0.0};
        const int segs = 64;
        const auto& xs = quad::gl_nodes(16);
        const auto& ws = quad::gl_weights(16);
        for (int s = 0; s < segs; ++s) {
            double th0 = 2.0 * std::numbers::pi * s / segs;
            double th1 = 2.0 * std::numbers::pi * (s + 1) / segs;
            for (size_t i = 0; i < xs.size(); ++i) {
                double th = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * xs[i];
                cplx z = std::polar(R, th);
                tr.move_to(z);
                cplx dz = cplx(0.0, 1.0) * z * (0.5 * (th1 - th0) * ws[i]);
                for (int j = 0; j < 3; ++j) I[j] += tr.xi()[j] * dz;
            }
        }
        return I;
    }

    double lambda1_ell_offset() const { return 0.0; }

  private:
    double a_;
    BranchData bd_;

    void check_domain(cplx z, int j) const {
        double x = z.real(), y = z.imag();
        auto on_real_ray = [&](double upto) {
            return y == 0.0 && x <= upto + 1e-300;
        };
        auto on_imag_cut = [&]() {
            return x == 0.0 && std::fabs(y) <= bd_.z2;
        };
        bool bad = false;
        if (j == 1) bad = on_real_ray(bd_.z1);
        if (j == 2) bad = on_real_ray(bd_.z1) || on_imag_cut();
        if (j == 3) bad = on_real_ray(0.0) || on_imag_cut();
        if (bad)
            throw PathBlocked("lambda: z on the cut; use lambda_boundary");
    }

    double clearance_height(cplx z) const {
        return std::max(bd_.z2 + 1.0, std::fabs(z.imag()) + 0.5);
    }

    // Waypoints from the integration base to z; the first entry is the end
    // of the singular leg that starts at the base.
    std::vector<cplx> path_to(cplx z, int j) const {
        double H = clearance_height(z);
        std::vector<cplx> way;
        if (j == 1 || j == 2) {
            cplx base(bd_.z1, 0.0);
            if (z.imag() == 0.0 && z.real() > bd_.z1) {
                // straight real leg; still treat base as singular endpoint
                way = {base + 0.1 * (z - base), z};
                return way;
            }
            double s = (z.imag() >= 0.0) ? 1.0 : -1.0;
            way = {base + cplx(0.0, s * H), cplx(z.real(), s * H), z};
            return way;
        }
        // j == 3, base -z1 approached from above
        cplx top(-bd_.z1, H);
        if (z.imag() > 0.0 || (z.imag() == 0.0 && z.real() > 0.0)) {
            way = {top, cplx(z.real(), H), z};
            return way;
        }
        double Xc = bd_.z1 + 1.0;
        way = {top, cplx(Xc, H), cplx(Xc, -H), cplx(z.real(), -H), z};
        return way;
    }

    // Adaptive Gauss integration of xi_idx along the parametrized curve
    // gamma(t) -> (z, dz/dt), t in [t0, t1].  The curve must be a straight
    // line segment (possibly nonuniformly parametrized) so that the chords
    // between consecutive evaluation points stay in the tracked region.
    template <typename Gamma>
    cplx adaptive_integral(SheetTracker& walk, Gamma&& gamma, double t0,
                           double t1, int idx) const {
        const auto& R = quad::gl_rule();
        auto gl = [&](double u0, double u1) {
            double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
            cplx I = 0.0;
            for (size_t i = 0; i < R.x.size(); ++i) {
                double t = mid + half * R.x[i];
                cplx z, w;
                gamma(t, z, w);
                walk.move_to(z);
                I += walk.xi()[idx] * w * (half * R.w[i]);
            }
            return I;
        };
        long calls = 0;
        std::function<cplx(double, double, cplx, double, int)> rec =
            [&](double u0, double u1, cplx whole, double tol, int depth) -> cplx {
            if (++calls > 6000)
                throw NonConvergence("lambda: quadrature call budget exceeded");
            double um = 0.5 * (u0 + u1);
            cplx I1 = gl(u0, um), I2 = gl(um, u1);
            // at extreme depth the subinterval's own contribution is
            // negligible; accept rather than recurse forever
            if (std::abs(I1 + I2 - whole) <= tol || depth >= 42) return I1 + I2;
            return rec(u0, um, I1, 0.5 * tol, depth + 1) +
                   rec(um, u1, I2, 0.5 * tol, depth + 1);
        };
        cplx whole = gl(t0, t1);
        double tol = 1e-11 * (1.0 + std::abs(whole));
        return rec(t0, t1, whole, tol, 0);
    }

    cplx integrate_leg(SheetTracker& tr, cplx p, cplx q, int idx) const {
        if (p == q) return 0.0;
        tr.move_to(p);
        cplx d = q - p;
        cplx I = adaptive_integral(
            tr,
            [&](double t, cplx& z, cplx& w) {
                z = p + d * t;
                w = d;
            },
            0.0, 1.0, idx);
        tr.move_to(q);
        return I;
    }

    // Leg between `far` and the branch point `bp` (where two sheets
    // collide): substitute z = bp + (far - bp) u^2, which makes the tracked
    // root analytic in u through u = 0.  Returns the integral oriented
    // far -> bp; leaves the tracker at `far`.
    cplx integrate_sqrt_leg(SheetTracker& tr, cplx far, cplx bp, int idx) const {
        cplx d = far - bp;
        tr.move_to(far);
        SheetTracker walk = tr;
        cplx I = adaptive_integral(
            walk,
            [&](double u, cplx& z, cplx& w) {
                z = bp + d * (u * u);
                w = 2.0 * u * d;
            },
            0.0, 1.0, idx);
        return -I;
    }

    // lambda_{1-}(-z1), the additive constant in the definition of
    // lambda_3.  Both endpoints are branch points, so the path runs through
    // the lower half-plane with the u^2 substitution on both end legs.
    cplx lambda1_minus_at_minus_z1() const {
        if (!l1m_cached_) {
            double H = bd_.z2 + 1.0;
            cplx w1(bd_.z1, -H), w2(-bd_.z1, -H);
            SheetTracker tr(a_);
            tr.move_along(detail::anchor_path(w1, bd_.z1, bd_.z2, tr.pos()));
            cplx total = -integrate_sqrt_leg(tr, w1, cplx(bd_.z1, 0.0), 0);
            total += integrate_leg(tr, w1, w2, 0);
            total += integrate_sqrt_leg(tr, w2, cplx(-bd_.z1, 0.0), 0);
            l1m_ = total;
            l1m_cached_ = true;
        }
        return l1m_;
    }

    mutable cplx l1m_;
    mutable bool l1m_cached_ = false;
};

struct LambdaConstants {
    cplx ell1, ell2, ell3;
};

// ell_j extracted from |z| in {50, 100, 200, 400}: the residual after
// subtracting the stated asymptotic terms is c1/R + c2/R^2 + ..., which the
// ladder extrapolation removes.  Stability is judged by comparing the
// estimates from the two overlapping radius triples.
inline LambdaConstants lambda_constants(double a) {
    LambdaEvaluator ev(a);
    std::array<double, 4> radii = {50.0, 100.0, 200.0, 400.0};
    std::array<std::array<cplx, 3>, 4> vals;
    for (size_t r = 0; r < radii.size(); ++r) {
        double R = radii[r];
        cplx z(R, 0.0);
        vals[r][0] = ev.lambda(z, 1) - (0.5 * R * R - std::log(R));
        vals[r][1] = ev.lambda(z, 2) - (a * R + 0.5 * std::log(R));
        vals[r][2] = ev.lambda(z, 3) - (-a * R + 0.5 * std::log(R));
    }
    std::array<cplx, 3> lo, hi;
    for (int j = 0; j < 3; ++j) {
        std::vector<cplx> v012 = {vals[0][j], vals[1][j], vals[2][j]};
        std::vector<cplx> v123 = {vals[1][j], vals[2][j], vals[3][j]};
        std::vector<double> e012 = {1.0 / radii[0], 1.0 / radii[1], 1.0 / radii[2]};
        std::vector<double> e123 = {1.0 / radii[1], 1.0 / radii[2], 1.0 / radii[3]};
        lo[j] = extrapolate(v012, e012, {1.0, 2.0});
        hi[j] = extrapolate(v123, e123, {1.0, 2.0});
        if (std::abs(lo[j] - hi[j]) > 1e-5)
            throw NonConvergence("lambda_constants: radii disagree");
    }
    return {hi[0], hi[1], hi[2]};
}

struct JumpResidual {
    std::string contour;
    std::string relation;
    cplx point;
    double residual;
};

struct JumpReport {
    std::vector<JumpResidual> entries;
    double max_residual = 0.0;
    std::array<double, 3> loop_residuals = {0.0, 0.0, 0.0};
};

// All eight (jump) relations of the lambda-functions, 20 points per piece,
// plus the loop integrals of the xi-functions.
inline JumpReport verify_lambda_jumps(double a, int points_per_piece = 20) {
    LambdaEvaluator ev(a);
    const BranchData& bd = ev.branch();
    const cplx up(0.0, 1.0), down(0.0, -1.0), left(-1.0, 0.0), right(1.0, 0.0);
    const cplx pii(0.0, std::numbers::pi);
    JumpReport rep;

    auto record = [&](const std::string& contour, const std::string& rel,
                      cplx pt, cplx lhs, cplx rhs) {
        double res = std::abs(lhs - rhs);
        rep.entries.push_back({contour, rel, pt, res});
        rep.max_residual = std::max(rep.max_residual, res);
    };

    auto pts = [&](double lo, double hi) {
        std::vector<double> v;
        for (int i = 0; i < points_per_piece; ++i)
            v.push_back(lo + (hi - lo) * (i + 0.5) / points_per_piece);
        return v;
    };

    // (0, z1):  lambda_{1 -/+} = lambda_{2 +/-}
    for (double x : pts(0.04 * bd.z1, 0.96 * bd.z1)) {
        cplx z(x, 0.0);
        record("(0,z1)", "l1m=l2p", z, ev.lambda_boundary(z, 1, down),
               ev.lambda_boundary(z, 2, up));
        record("(0,z1)", "l1p=l2m", z, ev.lambda_boundary(z, 1, up),
               ev.lambda_boundary(z, 2, down));
    }
    // (-z1, 0): lambda_{1-} = lambda_{3+},  lambda_{1+} = lambda_{3-} - pi i
    for (double x : pts(-0.96 * bd.z1, -0.04 * bd.z1)) {
        cplx z(x, 0.0);
        record("(-z1,0)", "l1m=l3p", z, ev.lambda_boundary(z, 1, down),
               ev.lambda_boundary(z, 3, up));
        record("(-z1,0)", "l1p=l3m-pii", z, ev.lambda_boundary(z, 1, up),
               ev.lambda_boundary(z, 3, down) - pii);
    }
    // (0, i z2):  lambda_{2 -/+} = lambda_{3 +/-}   ("+" side is the left)
    for (double y : pts(0.05 * bd.z2, 0.95 * bd.z2)) {
        cplx z(0.0, y);
        record("(0,iz2)", "l2m=l3p", z, ev.lambda_boundary(z, 2, right),
               ev.lambda_boundary(z, 3, left));
        record("(0,iz2)", "l2p=l3m", z, ev.lambda_boundary(z, 2, left),
               ev.lambda_boundary(z, 3, right));
    }
    // (-i z2, 0): lambda_{2 -/+} = lambda_{3 +/-} - pi i
    for (double y : pts(-0.95 * bd.z2, -0.05 * bd.z2)) {
        cplx z(0.0, y);
        record("(-iz2,0)", "l2m=l3p-pii", z, ev.lambda_boundary(z, 2, right),
               ev.lambda_boundary(z, 3, left) - pii);
        record("(-iz2,0)", "l2p=l3m-pii", z, ev.lambda_boundary(z, 2, left),
               ev.lambda_boundary(z, 3, right) - pii);
    }
    // (-inf, -z1): lambda_{1+} = lambda_{1-} - 2 pi i; lambda_{3+} = lambda_{3-} + pi i
    for (double x : pts(-bd.z1 - 2.0, -bd.z1 - 0.1)) {
        cplx z(x, 0.0);
        record("(-inf,-z1)", "l1p=l1m-2pii", z, ev.lambda_boundary(z, 1, up),
               ev.lambda_boundary(z, 1, down) - 2.0 * pii);
        record("(-inf,-z1)", "l3p=l3m+pii", z, ev.lambda_boundary(z, 3, up),
               ev.lambda_boundary(z, 3, down) + pii);
    }
    // (-inf, 0): lambda_{2+} = lambda_{2-} + pi i
    for (double x : pts(-bd.z1 - 2.0, -0.05)) {
        cplx z(x, 0.0);
        record("(-inf,0)", "l2p=l2m+pii", z, ev.lambda_boundary(z, 2, up),
               ev.lambda_boundary(z, 2, down) + pii);
    }

    std::array<cplx, 3> loops = ev.loop_integrals();
    rep.loop_residuals[0] = std::abs(loops[0] - cplx(0.0, -2.0 * std::numbers::pi));
    rep.loop_residuals[1] = std::abs(loops[1] - pii);
    rep.loop_residuals[2] = std::abs(loops[2] - pii);
    return rep;
}

}  // namespace extsrc

#pragma once

// Three-sheeted Riemann surface of the spectral cubic: branch points,
// rational inverse map, and sheet assignment by path tracking from a
// large-|z| anchor where the asymptotic expansions disambiguate the labels.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "extsrc/cubic.hpp"
#include "extsrc/errors.hpp"

namespace extsrc {

struct SourceParams {
    double a;  // source strength, a > 0
    int n;     // matrix size, even, n >= 2

    SourceParams(double a_, int n_) : a(a_), n(n_) {
        if (!(a > 0.0)) throw std::invalid_argument("SourceParams: a must be positive");
        if (n < 2 || n % 2 != 0)
            throw std::invalid_argument("SourceParams: n must be even and >= 2");
    }
};

struct SheetValues {
    cplx xi1, xi2, xi3;

    cplx operator[](int j) const {
        switch (j) {
            case 1: return xi1;
            case 2: return xi2;
            default: return xi3;
        }
    }
};

struct BranchData {
    double z1;  // real branch points at +-z1
    double z2;  // imaginary branch points at +-i z2
    double q;   // xi_1(z1) = xi_2(z1)
    double p;   // xi-plane branch points at +-ip
    double p0;  // Im xi_{1+}(0); rho(0) = p0 / pi
};

// z = (xi^3 - (a^2-1) xi) / (xi^2 - a^2), the rational inverse of the cubic.
inline cplx map_z(cplx xi, double a) {
    cplx denom = xi * xi - a * a;
    if (std::abs(denom) < 1e-13 * (1.0 + std::norm(xi)))
        throw PoleAtSource("map_z: xi at a pole (+-a)");
    return (xi * xi * xi - (a * a - 1.0) * xi) / denom;
}

inline cplx map_z_deriv(cplx xi, double a) {
    double a2 = a * a;
    cplx num = xi * xi * xi - (a2 - 1.0) * xi;
    cplx dnum = 3.0 * xi * xi - (a2 - 1.0);
    cplx den = xi * xi - a2;
    return (dnum * den - num * 2.0 * xi) / (den * den);
}

// Branch points for 0 < a < 1.  q^2 and -p^2 are the roots of the
// quadratic t^2 - (1+2a^2) t + (a^2-1) a^2 in t = xi^2.
inline BranchData branch_points(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw UnsupportedPhase("branch_points: requires 0 < a < 1");
    double a2 = a * a;
    double s = 1.0 + 2.0 * a2;
    double disc = s * s - 4.0 * a2 * (a2 - 1.0);
    double sq = std::sqrt(disc);
    BranchData bd;
    bd.q = std::sqrt((s + sq) / 2.0);
    // -p^2 is the other root (s - sq)/2, negative for a < 1.
    bd.p = std::sqrt((sq - s) / 2.0);
    bd.z1 = map_z(cplx(bd.q, 0.0), a).real();
    bd.z2 = std::abs(map_z(cplx(0.0, bd.p), a));
    bd.p0 = std::sqrt(1.0 - a2);
    return bd;
}

namespace detail {

inline double min_gap(const std::array<cplx, 3>& r) {
    return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]),
                     std::abs(r[1] - r[2])});
}

// Match the three new roots against the previous labelled triple by the
// minimal-total-distance permutation.
inline std::array<cplx, 3> match_roots(const std::array<cplx, 3>& prev,
                                       const std::array<cplx, 3>& next,
                                       double* worst_move = nullptr) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double best = 1e300;
    int bestp = 0;
    for (int p = 0; p < 6; ++p) {
        double cost = 0.0;
        for (int k = 0; k < 3; ++k) cost += std::abs(prev[k] - next[perms[p][k]]);
        if (cost < best) {
            best = cost;
            bestp = p;
        }
    }
    std::array<cplx, 3> out;
    double wm = 0.0;
    for (int k = 0; k < 3; ++k) {
        out[k] = next[perms[bestp][k]];
        wm = std::max(wm, std::abs(prev[k] - out[k]));
    }
    if (worst_move) *worst_move = wm;
    return out;
}

}  // namespace detail

// Tracks the labelled roots (xi1, xi2, xi3) continuously along a path that
// avoids the cuts [-z1, z1] and [-i z2, i z2].  Seeded at the real anchor
// z0 = 10 (1 + z1) where (psi at infinity) asymptotics fix the labels.
class SheetTracker {
  public:
    explicit SheetTracker(double a) : a_(a) {
        double z1 = 2.0;
        if (a < 1.0 && a > 0.0) z1 = branch_points(a).z1;
        pos_ = cplx(10.0 * (1.0 + z1), 0.0);
        CubicRoots cr = solve_cubic(pos_, a);
        std::array<cplx, 3> pred = {pos_ - 1.0 / pos_, a + 0.5 / pos_,
                                    -a + 0.5 / pos_};
        xi_ = detail::match_roots(pred, cr.roots);
    }

    double a() const { return a_; }
    cplx pos() const { return pos_; }
    const std::array<cplx, 3>& xi() const { return xi_; }

    SheetValues values() const { return {xi_[0], xi_[1], xi_[2]}; }

    // Move along the straight segment to z, refining the step whenever the
    // labelled roots move by more than a fraction of their minimum gap.
    void move_to(cplx z) {
        int guard = 0;
        while (std::abs(pos_ - z) > 0.0) {
            if (++guard > 200000)
                throw NumericalError("SheetTracker: step budget exceeded");
            cplx target = z;
            for (;;) {
                CubicRoots cr = solve_cubic(target, a_);
                double move;
                std::array<cplx, 3> cand =
                    detail::match_roots(xi_, cr.roots, &move);
                double gap = detail::min_gap(xi_);
                if (move < 0.4 * gap || std::abs(target - pos_) < 1e-13) {
                    pos_ = target;
                    xi_ = cand;
                    break;
                }
                target = pos_ + 0.5 * (target - pos_);
            }
        }
    }

    void move_along(const std::vector<cplx>& polyline) {
        for (cplx w : polyline) move_to(w);
    }

  private:
    double a_;
    cplx pos_;
    std::array<cplx, 3> xi_;
};

namespace detail {

// Waypoint polyline from the anchor to z avoiding both cuts.  Horizontal
// legs run at height H above/below the cuts; vertical legs descend onto z.
inline std::vector<cplx> anchor_path(cplx z, double z1, double z2, cplx anchor) {
    double H = 1.0 + z2;
    std::vector<cplx> path;
    if (z.imag() == 0.0 && z.real() > z1) {
        path.push_back(z);
        return path;
    }
    double s = (z.imag() >= 0.0) ? 1.0 : -1.0;
    if (z.imag() == 0.0) s = 1.0;  // real target left of the cut: go over the top
    H = std::max(H, std::abs(z.imag()) + 0.5);
    path.push_back(anchor + cplx(0.0, s * H));
    path.push_back(cplx(z.real(), s * H));
    path.push_back(z);
    return path;
}

}  // namespace detail

// Labels the three roots at z (off the cuts) as (xi1, xi2, xi3).
inline SheetValues assign_sheets(cplx z, double a) {
    BranchData bd = branch_points(a);
    double tol = 1e-6 * (1.0 + bd.z1);
    for (cplx w : {cplx(bd.z1, 0), cplx(-bd.z1, 0), cplx(0, bd.z2), cplx(0, -bd.z2)})
        if (std::abs(z - w) < tol)
            throw BranchPointProximity("assign_sheets: z too close to a branch point");

    SheetTracker tr(a);
    tr.move_along(detail::anchor_path(z, bd.z1, bd.z2, tr.pos()));
    return tr.values();
}

// One-sided boundary values xi_{j,+-} on the cuts via an epsilon ladder
// with Richardson extrapolation (see richardson.hpp for the fit).
inline std::array<double, 3> boundary_eps_ladder() { return {1e-6, 5e-7, 2.5e-7}; }

}  // namespace extsrc

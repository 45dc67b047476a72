// Zero-level sets of Re(lambda_j - lambda_k) traced by marching squares, and
// the abscissa x0 where the curve descending from i z2 meets the real axis.
//
// The scalar field is accumulated along a serpentine walk of the grid by
// integrating xi_j - xi_k edge by edge with a sheet tracker; one exact
// lambda evaluation anchors the walk.  Crossing a cut flips the sign of the
// accumulated difference but leaves its zero set unchanged, which is all
// marching squares needs.
#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "extsrc/errors.hpp"
#include "extsrc/gauss.hpp"
#include "extsrc/lambda.hpp"
#include "extsrc/surface.hpp"

namespace extsrc {

struct Rect {
    double x0, x1, y0, y1;
};

using Polyline = std::vector<cplx>;

namespace detail_curves {

// Slotwise integrals of Re xi over the straight edge [u, v], tracker carried
// along.  The tracker's slots follow analytic continuation, which swaps
// sheets when the edge crosses a cut; the caller fixes labels up with a
// permutation.
inline std::array<double, 3> edge_delta(SheetTracker& tr, cplx u, cplx v) {
    const quad::GlRule& rule = quad::gl_rule();
    std::array<cplx, 3> acc = {0.0, 0.0, 0.0};
    for (int half = 0; half < 2; ++half) {
        cplx p = u + (0.5 * half) * (v - u);
        cplx q = u + (0.5 * (half + 1)) * (v - u);
        for (size_t m = 0; m < rule.x.size(); ++m) {
            cplx z = p + 0.5 * (rule.x[m] + 1.0) * (q - p);
            tr.move_to(z);
            for (int s = 0; s < 3; ++s)
                acc[s] += rule.w[m] * tr.xi()[s] * (0.5 * (q - p));
        }
    }
    tr.move_to(v);
    return {acc[0].real(), acc[1].real(), acc[2].real()};
}

// Sheet swap induced by crossing a cut on the straight edge [u, v], given as
// the pair of sheet indices (0-based) or {-1,-1} when no cut is crossed.
// Axis-aligned edges cross at most one cut.  Real parts of the swapped pair
// agree on the cut, so honest Re lambda values continue across it.
inline std::pair<int, int> edge_swap(cplx u, cplx v, const BranchData& bd) {
    if (u.real() == v.real()) {  // vertical edge
        if ((u.imag() < 0.0) != (v.imag() < 0.0) &&
            std::fabs(u.real()) < bd.z1)
            return (u.real() > 0.0) ? std::pair<int, int>{0, 1}
                                    : std::pair<int, int>{0, 2};
    } else {  // horizontal edge
        if ((u.real() < 0.0) != (v.real() < 0.0) &&
            std::fabs(u.imag()) < bd.z2)
            return {1, 2};
    }
    return {-1, -1};
}

}  // namespace detail_curves

inline std::vector<Polyline> level_curves(double a, int pair, Rect win,
                                          int nx = 81, int ny = 81) {
    if (pair != 12 && pair != 13 && pair != 23)
        throw NumericalError("level_curves: pair must be 12, 13 or 23");
    int j = pair / 10 - 1, k = pair % 10 - 1;
    BranchData bd = branch_points(a);

    // nudge the grid so no node sits on a branch point or exactly on a cut
    const double nudge = 1.2345e-5;
    double gx0 = win.x0 + nudge, gx1 = win.x1 + nudge;
    double gy0 = win.y0 + nudge, gy1 = win.y1 + nudge;
    auto X = [&](int i) { return gx0 + (gx1 - gx0) * i / (nx - 1); };
    auto Y = [&](int m) { return gy0 + (gy1 - gy0) * m / (ny - 1); };

    // anchor values at the first node: honest Re lambda triple
    LambdaEvaluator lev(a);
    cplx first(X(0), Y(0));
    std::array<double, 3> H = {lev.lambda(first, 1).real(),
                               lev.lambda(first, 2).real(),
                               lev.lambda(first, 3).real()};
    std::array<int, 3> perm = {0, 1, 2};  // tracker slot -> honest sheet

    SheetTracker tr(a);
    tr.move_along(detail::anchor_path(first, bd.z1, bd.z2, tr.pos()));

    std::vector<std::vector<double>> F(nx, std::vector<double>(ny));
    F[0][0] = H[j] - H[k];

    auto advance = [&](cplx u, cplx v) {
        std::array<double, 3> d = detail_curves::edge_delta(tr, u, v);
        std::array<int, 3> old = perm;
        auto [s1, s2] = detail_curves::edge_swap(u, v, bd);
        if (s1 >= 0) {
            // the tracker slot that carried sheet s1 now carries s2, and
            // vice versa
            for (int s = 0; s < 3; ++s) {
                if (perm[s] == s1)
                    perm[s] = s2;
                else if (perm[s] == s2)
                    perm[s] = s1;
            }
        }
        std::array<double, 3> Hn;
        for (int s = 0; s < 3; ++s) Hn[perm[s]] = H[old[s]] + d[s];
        H = Hn;
    };

    // serpentine: up each column, hop to the next column at alternating ends
    for (int i = 0; i < nx; ++i) {
        bool upward = (i % 2 == 0);
        if (i > 0) {
            int m = upward ? 0 : ny - 1;
            advance(cplx(X(i - 1), Y(m)), cplx(X(i), Y(m)));
            F[i][m] = H[j] - H[k];
        }
        for (int s = 1; s < ny; ++s) {
            int m = upward ? s : ny - 1 - s;
            int pm = upward ? m - 1 : m + 1;
            advance(cplx(X(i), Y(pm)), cplx(X(i), Y(m)));
            F[i][m] = H[j] - H[k];
        }
    }

    // marching squares: one crossing point per sign-changing cell edge,
    // keyed so adjacent cells share endpoints exactly
    using EdgeKey = std::tuple<int, int, int>;  // orientation, i, m
    auto cross = [&](double f0, double f1, double t0, double t1) {
        return t0 + (t1 - t0) * (f0 / (f0 - f1));
    };
    std::map<EdgeKey, cplx> pts;
    std::map<EdgeKey, std::vector<EdgeKey>> adj;
    auto edge_point = [&](int orient, int i, int m) -> EdgeKey {
        EdgeKey key{orient, i, m};
        if (!pts.count(key)) {
            if (orient == 0)  // horizontal edge from (i,m) to (i+1,m)
                pts[key] = cplx(cross(F[i][m], F[i + 1][m], X(i), X(i + 1)), Y(m));
            else  // vertical edge from (i,m) to (i,m+1)
                pts[key] = cplx(X(i), cross(F[i][m], F[i][m + 1], Y(m), Y(m + 1)));
        }
        return key;
    };

    for (int i = 0; i + 1 < nx; ++i)
        for (int m = 0; m + 1 < ny; ++m) {
            double f00 = F[i][m], f10 = F[i + 1][m];
            double f01 = F[i][m + 1], f11 = F[i + 1][m + 1];
            std::vector<EdgeKey> hits;
            if ((f00 < 0) != (f10 < 0)) hits.push_back(edge_point(0, i, m));
            if ((f01 < 0) != (f11 < 0)) hits.push_back(edge_point(0, i, m + 1));
            if ((f00 < 0) != (f01 < 0)) hits.push_back(edge_point(1, i, m));
            if ((f10 < 0) != (f11 < 0)) hits.push_back(edge_point(1, i + 1, m));
            if (hits.size() == 2) {
                adj[hits[0]].push_back(hits[1]);
                adj[hits[1]].push_back(hits[0]);
            } else if (hits.size() == 4) {
                // saddle: split by the sign at the cell center
                double fc = 0.25 * (f00 + f10 + f01 + f11);
                bool pairing = ((f00 < 0) == (fc < 0));
                int a0 = 0, b0 = pairing ? 3 : 2, a1 = 1, b1 = pairing ? 2 : 3;
                adj[hits[a0]].push_back(hits[b0]);
                adj[hits[b0]].push_back(hits[a0]);
                adj[hits[a1]].push_back(hits[b1]);
                adj[hits[b1]].push_back(hits[a1]);
            }
        }

    // stitch the segment soup into polylines
    std::vector<Polyline> out;
    std::map<EdgeKey, bool> used;
    for (auto& [key, nbrs] : adj) {
        if (used[key] || nbrs.size() != 1) continue;
        // open chain start
        Polyline line;
        EdgeKey cur = key, prev = key;
        line.push_back(pts[cur]);
        used[cur] = true;
        while (true) {
            const std::vector<EdgeKey>& nb = adj[cur];
            EdgeKey nxt = cur;
            bool found = false;
            for (const EdgeKey& c : nb)
                if (!(c == prev) && !used[c]) {
                    nxt = c;
                    found = true;
                    break;
                }
            if (!found) break;
            prev = cur;
            cur = nxt;
            used[cur] = true;
            line.push_back(pts[cur]);
        }
        if (line.size() >= 2) out.push_back(std::move(line));
    }
    // closed loops: anything with both neighbors still unused
    for (auto& [key, nbrs] : adj) {
        if (used[key] || nbrs.size() < 2) continue;
        Polyline line;
        EdgeKey cur = key, prev = key;
        line.push_back(pts[cur]);
        used[cur] = true;
        while (true) {
            bool found = false;
            for (const EdgeKey& c : adj[cur])
                if (!(c == prev) && !used[c]) {
                    prev = cur;
                    cur = c;
                    used[cur] = true;
                    line.push_back(pts[cur]);
                    found = true;
                    break;
                }
            if (!found) break;
        }
        if (line.size() >= 3) {
            line.push_back(line.front());
            out.push_back(std::move(line));
        }
    }

    // the parts of the zero set lying exactly on the cuts are tangential
    // zeros (the field touches zero without changing sign there), invisible
    // to marching squares; they are known exactly from the jump relations
    // and appended analytically, clipped to the window
    auto add_segment = [&](cplx u, cplx v) {
        // segments are axis-aligned; clip the varying coordinate to the
        // window and reject if the fixed coordinate lies outside
        double lo = 0.0, hi = 1.0;
        auto clip_coord = [&](double cu, double cv, double cmin, double cmax) {
            if (cu == cv) {
                if (cu < cmin || cu > cmax) lo = 1.0;  // fully outside
                return;
            }
            double t0 = (cmin - cu) / (cv - cu), t1 = (cmax - cu) / (cv - cu);
            if (t0 > t1) std::swap(t0, t1);
            lo = std::max(lo, t0);
            hi = std::min(hi, t1);
        };
        clip_coord(u.real(), v.real(), win.x0, win.x1);
        clip_coord(u.imag(), v.imag(), win.y0, win.y1);
        if (lo >= hi) return;
        Polyline seg;
        int npts = std::max(ny, nx);
        for (int t = 0; t <= npts; ++t)
            seg.push_back(u + (lo + (hi - lo) * t / npts) * (v - u));
        out.push_back(std::move(seg));
    };
    if (pair == 12) add_segment(cplx(0.0, 0.0), cplx(bd.z1, 0.0));
    if (pair == 13) add_segment(cplx(-bd.z1, 0.0), cplx(0.0, 0.0));
    if (pair == 23) {
        add_segment(cplx(0.0, bd.z2), cplx(0.0, std::max(win.y1, bd.z2)));
        add_segment(cplx(0.0, std::min(win.y0, -bd.z2)), cplx(0.0, -bd.z2));
    }
    return out;
}

// Abscissa in (0, z1) where the Re(lambda_2 - lambda_3) level curve that
// descends from i z2 meets the positive real axis.  On (0, z1) the sheet-2
// value is taken as its boundary value from above.
inline double x0(double a) {
    LambdaEvaluator lev(a);
    const BranchData& bd = lev.branch();
    const cplx up(0.0, 1.0);
    auto g = [&](double x) {
        return (lev.lambda_boundary(cplx(x, 0.0), 2, up) -
                lev.lambda(cplx(x, 0.0), 3))
            .real();
    };
    double lo = 1e-3 * bd.z1, hi = (1.0 - 1e-6) * bd.z1;
    double glo = g(lo), ghi = g(hi);
    if (glo * ghi > 0.0) throw CurveNotFound("x0: no sign change on (0, z1)");
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (glo * gm <= 0.0) {
            hi = mid;
            ghi = gm;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace extsrc

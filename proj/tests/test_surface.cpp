#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "extsrc/richardson.hpp"
#include "extsrc/surface.hpp"

using namespace extsrc;

TEST_CASE("cubic roots at the origin factorize in closed form") {
    CubicRoots cr = solve_cubic(cplx(0.0, 0.0), 0.4);
    // xi (xi^2 + (1 - a^2)) = 0  ->  0, +- i sqrt(0.84)
    double p0 = std::sqrt(0.84);
    CHECK(std::abs(cr.roots[0] - cplx(0.0, -p0)) < 1e-12);
    CHECK(std::abs(cr.roots[1] - cplx(0.0, 0.0)) < 1e-12);
    CHECK(std::abs(cr.roots[2] - cplx(0.0, p0)) < 1e-12);
}

TEST_CASE("cubic roots reduce to the quadratic factor when a = 0") {
    CubicRoots cr = solve_cubic(cplx(1.0, 0.0), 0.0);
    double s3 = std::sqrt(3.0) / 2.0;
    CHECK(std::abs(cr.roots[0] - cplx(0.0, 0.0)) < 1e-12);
    CHECK(std::abs(cr.roots[1] - cplx(0.5, -s3)) < 1e-12);
    CHECK(std::abs(cr.roots[2] - cplx(0.5, s3)) < 1e-12);
}

TEST_CASE("cubic residual and Vieta relations on a random grid") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ur(-3.0, 3.0);
    std::uniform_real_distribution<double> ua(0.05, 1.4);
    for (int it = 0; it < 200; ++it) {
        cplx z(ur(rng), ur(rng));
        double a = ua(rng);
        CubicRoots cr = solve_cubic(z, a);
        double scale = 1.0 + std::abs(z) + a;
        cplx sum = 0.0, prod = 1.0, pair = 0.0;
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(detail::cubic_poly(cr.roots[k], z, a)) <
                  1e-10 * scale * scale * scale);
            sum += cr.roots[k];
            prod *= cr.roots[k];
        }
        pair = cr.roots[0] * cr.roots[1] + cr.roots[0] * cr.roots[2] +
               cr.roots[1] * cr.roots[2];
        CHECK(std::abs(sum - z) < 1e-12 * scale);
        CHECK(std::abs(pair - (1.0 - a * a)) < 1e-11 * scale * scale);
        CHECK(std::abs(prod + z * a * a) < 1e-11 * scale * scale * scale);
    }
}

TEST_CASE("branch data at a = 0.4") {
    BranchData bd = branch_points(0.4);
    CHECK(bd.q == doctest::Approx(1.18953076611203082).epsilon(1e-12));
    CHECK(bd.p == doctest::Approx(0.30819384083247830).epsilon(1e-12));
    CHECK(bd.z1 == doctest::Approx(2.13737655025154718).epsilon(1e-12));
    CHECK(bd.z2 == doctest::Approx(0.90048793304808065).epsilon(1e-12));
    CHECK(bd.p0 == doctest::Approx(std::sqrt(0.84)).epsilon(1e-14));
    CHECK(bd.z2 < bd.z1);
}

TEST_CASE("q and ip are critical points of the rational map") {
    BranchData bd = branch_points(0.4);
    double h = 1e-6;
    cplx d1 = (map_z(cplx(bd.q + h, 0), 0.4) - map_z(cplx(bd.q - h, 0), 0.4)) /
              (2.0 * h);
    CHECK(std::abs(d1) < 1e-8);
    cplx d2 = (map_z(cplx(0, bd.p + h), 0.4) - map_z(cplx(0, bd.p - h), 0.4)) /
              (2.0 * h);
    CHECK(std::abs(d2) < 1e-8);
    // and the closed-form derivative agrees
    CHECK(std::abs(map_z_deriv(cplx(bd.q, 0), 0.4)) < 1e-12);
}

TEST_CASE("quartic factorization (xi^2 + p^2)(xi^2 - q^2) matches") {
    BranchData bd = branch_points(0.4);
    double a2 = 0.16;
    // xi^4 - (1 + 2a^2) xi^2 + (a^2 - 1) a^2
    CHECK(bd.q * bd.q - bd.p * bd.p == doctest::Approx(1.0 + 2.0 * a2).epsilon(1e-12));
    CHECK(-bd.p * bd.p * bd.q * bd.q ==
          doctest::Approx((a2 - 1.0) * a2).epsilon(1e-12));
}

TEST_CASE("branch_points limits and errors") {
    BranchData bd = branch_points(1e-5);
    CHECK(bd.z1 == doctest::Approx(2.0).epsilon(1e-6));
    // the imaginary pair recedes like 1/(2a) in the small-source limit, so
    // the second/third-sheet cut leaves every compact set
    CHECK(bd.z2 == doctest::Approx(0.5 / 1e-5).epsilon(1e-6));
    CHECK_THROWS_AS(branch_points(1.0), UnsupportedPhase);
    CHECK_THROWS_AS(branch_points(1.5), UnsupportedPhase);
}

TEST_CASE("map_z basic values and pole") {
    CHECK(std::abs(map_z(cplx(1.0, 0.0), 0.0) - cplx(2.0, 0.0)) < 1e-14);
    CHECK_THROWS_AS(map_z(cplx(0.4, 0.0), 0.4), PoleAtSource);
    BranchData bd = branch_points(0.4);
    CHECK(map_z(cplx(bd.q, 0.0), 0.4).real() ==
          doctest::Approx(2.13737655025154718).epsilon(1e-12));
    cplx w = map_z(cplx(0.0, bd.p), 0.4);
    CHECK(std::abs(w - cplx(0.0, -bd.z2)) < 1e-12);
}

TEST_CASE("sheet assignment at z = 10 matches the infinity expansions") {
    SheetValues sv = assign_sheets(cplx(10.0, 0.0), 0.4);
    CHECK(std::abs(sv.xi1 - cplx(9.9, 0.0)) < 2e-2);
    CHECK(std::abs(sv.xi2 - cplx(0.45, 0.0)) < 2e-2);
    CHECK(std::abs(sv.xi3 - cplx(-0.35, 0.0)) < 2e-2);
    // frozen oracle roots
    CHECK(std::abs(sv.xi1 - cplx(9.89881255522018950, 0.0)) < 1e-10);
    CHECK(std::abs(sv.xi2 - cplx(0.45580388213704762, 0.0)) < 1e-10);
    CHECK(std::abs(sv.xi3 - cplx(-0.35461643735723712, 0.0)) < 1e-10);
}

TEST_CASE("round trip map_z(xi_j(z)) = z off the cuts") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ur(-4.0, 4.0);
    int done = 0;
    while (done < 50) {
        cplx z(ur(rng), ur(rng));
        if (std::fabs(z.imag()) < 0.15) continue;  // stay clear of the real cut
        if (std::fabs(z.real()) < 0.15) continue;  // and the imaginary cut
        SheetValues sv = assign_sheets(z, 0.4);
        for (int j = 1; j <= 3; ++j)
            CHECK(std::abs(map_z(sv[j], 0.4) - z) < 1e-10 * (1.0 + std::abs(z)));
        ++done;
    }
}

TEST_CASE("one-sided xi jumps across the real cut: xi_{1 -/+} = xi_{2 +/-}") {
    double a = 0.4;
    BranchData bd = branch_points(a);
    std::array<double, 3> eps = boundary_eps_ladder();
    for (double x : {0.3, 0.9, 1.6, 0.5 * bd.z1}) {
        std::vector<double> es(eps.begin(), eps.end());
        std::vector<cplx> up1, dn1, up2, dn2;
        for (double e : es) {
            SheetValues su = assign_sheets(cplx(x, e), a);
            SheetValues sd = assign_sheets(cplx(x, -e), a);
            up1.push_back(su.xi1);
            dn1.push_back(sd.xi1);
            up2.push_back(su.xi2);
            dn2.push_back(sd.xi2);
        }
        cplx xi1p = extrapolate(up1, es, {1.0, 2.0});
        cplx xi1m = extrapolate(dn1, es, {1.0, 2.0});
        cplx xi2p = extrapolate(up2, es, {1.0, 2.0});
        cplx xi2m = extrapolate(dn2, es, {1.0, 2.0});
        CHECK(std::abs(xi1m - xi2p) < 1e-8);
        CHECK(std::abs(xi1p - xi2m) < 1e-8);
    }
}

TEST_CASE("one-sided xi jumps across the imaginary cut: xi_{2 -/+} = xi_{3 +/-}") {
    double a = 0.4;
    BranchData bd = branch_points(a);
    std::array<double, 3> eps = boundary_eps_ladder();
    for (double y : {0.2 * bd.z2, 0.5 * bd.z2, -0.6 * bd.z2}) {
        std::vector<double> es(eps.begin(), eps.end());
        std::vector<cplx> l2, r2, l3, r3;
        for (double e : es) {
            SheetValues sl = assign_sheets(cplx(-e, y), a);  // "+" side (left)
            SheetValues sr = assign_sheets(cplx(e, y), a);   // "-" side (right)
            l2.push_back(sl.xi2);
            r2.push_back(sr.xi2);
            l3.push_back(sl.xi3);
            r3.push_back(sr.xi3);
        }
        cplx xi2p = extrapolate(l2, es, {1.0, 2.0});
        cplx xi2m = extrapolate(r2, es, {1.0, 2.0});
        cplx xi3p = extrapolate(l3, es, {1.0, 2.0});
        cplx xi3m = extrapolate(r3, es, {1.0, 2.0});
        CHECK(std::abs(xi2m - xi3p) < 1e-8);
        CHECK(std::abs(xi2p - xi3m) < 1e-8);
    }
}

TEST_CASE("branch point proximity raises") {
    BranchData bd = branch_points(0.4);
    CHECK_THROWS_AS(assign_sheets(cplx(bd.z1 + 1e-9, 0.0), 0.4),
                    BranchPointProximity);
    CHECK_THROWS_AS(assign_sheets(cplx(0.0, bd.z2 + 1e-9), 0.4),
                    BranchPointProximity);
}

TEST_CASE("SourceParams validation") {
    CHECK_NOTHROW(SourceParams(0.4, 50));
    CHECK_THROWS(SourceParams(-1.0, 50));
    CHECK_THROWS(SourceParams(0.4, 51));
    CHECK_THROWS(SourceParams(0.4, 0));
}

#pragma once

// Complex Airy function Ai, Ai' and the sectorwise matrix Phi built from the
// rotated solutions y0, y1, y2.
//
// The Maclaurin series suffers catastrophic cancellation in the recessive
// directions that grows like e^{(4/3)|s|^{3/2}}, so the series is summed in
// double-double arithmetic, which keeps it accurate out to the asymptotic
// crossover at |s| = 9 where the steepest-descent expansion reaches full
// double precision.

#include <cmath>
#include <complex>
#include <numbers>

#include "extsrc/errors.hpp"
#include "extsrc/mat3.hpp"

namespace extsrc {

struct AiryPair {
    cplx ai;
    cplx ai_prime;
};

namespace dd {

// Minimal double-double arithmetic (Dekker/Knuth error-free transforms).
struct Real {
    double hi = 0.0, lo = 0.0;
};

inline Real two_sum(double x, double y) {
    double s = x + y;
    double bb = s - x;
    double err = (x - (s - bb)) + (y - bb);
    return {s, err};
}

inline Real quick_sum(double x, double y) {
    double s = x + y;
    return {s, y - (s - x)};
}

inline Real add(Real x, Real y) {
    Real s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    return quick_sum(s.hi, s.lo);
}

inline Real two_prod(double x, double y) {
    double p = x * y;
    double err = std::fma(x, y, -p);
    return {p, err};
}

inline Real mul(Real x, Real y) {
    Real p = two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return quick_sum(p.hi, p.lo);
}

inline Real mul(Real x, double y) {
    Real p = two_prod(x.hi, y);
    p.lo += x.lo * y;
    return quick_sum(p.hi, p.lo);
}

inline Real neg(Real x) { return {-x.hi, -x.lo}; }

inline Real div(Real x, double y) {
    double q1 = x.hi / y;
    Real p = two_prod(q1, y);
    double q2 = ((x.hi - p.hi) - p.lo + x.lo) / y;
    return quick_sum(q1, q2);
}

struct Complex {
    Real re, im;
};

inline Complex add(Complex x, Complex y) { return {add(x.re, y.re), add(x.im, y.im)}; }

inline Complex mul(Complex x, Complex y) {
    return {add(mul(x.re, y.re), neg(mul(x.im, y.im))),
            add(mul(x.re, y.im), mul(x.im, y.re))};
}

inline Complex mul(Complex x, double y) { return {mul(x.re, y), mul(x.im, y)}; }

inline Complex mul(Complex x, Real y) { return {mul(x.re, y), mul(x.im, y)}; }

inline Complex div(Complex x, double y) { return {div(x.re, y), div(x.im, y)}; }

inline double abs2(Complex x) {
    return x.re.hi * x.re.hi + x.im.hi * x.im.hi;
}

inline cplx to_cplx(Complex x) { return {x.re.hi + x.re.lo, x.im.hi + x.im.lo}; }

}  // namespace dd

namespace detail_airy {

inline constexpr double kCrossover = 9.0;
// Ai(0) and Ai'(0) as double-double constants.
inline const dd::Real kAi0 = {0.3550280538878172, 2.05233632436212e-17};
inline const dd::Real kAip0 = {-0.2588194037928068, 2.522243111610832e-17};

// Maclaurin series in double-double for |s| <= crossover.
inline AiryPair airy_series(cplx s) {
    dd::Complex z = {{s.real(), 0.0}, {s.imag(), 0.0}};
    dd::Complex z2 = dd::mul(z, z);
    dd::Complex z3 = dd::mul(z2, z);

    // f  = sum s^{3k} / c_k,           c_{k+1} = c_k (3k+2)(3k+3)
    // g  = sum s^{3k+1} / d_k,         d_{k+1} = d_k (3k+3)(3k+4)
    // f' = sum 3k s^{3k-1} / c_k
    // g' = sum (3k+1) s^{3k} / d_k
    dd::Complex tf = {{1.0, 0.0}, {0.0, 0.0}};
    dd::Complex tg = z;
    dd::Complex tfp = dd::div(z2, 2.0);  // k = 1 term of f'
    dd::Complex tgp = {{1.0, 0.0}, {0.0, 0.0}};
    dd::Complex f = tf, g = tg, fp = tfp, gp = tgp;
    for (int k = 0; k < 400; ++k) {
        double k3 = 3.0 * k;
        tf = dd::div(dd::mul(tf, z3), (k3 + 2.0) * (k3 + 3.0));
        tg = dd::div(dd::mul(tg, z3), (k3 + 3.0) * (k3 + 4.0));
        // f' term index runs one ahead (starts at k=1)
        double kk = k + 1.0;
        tfp = dd::div(dd::mul(tfp, z3),
                      (kk * (3.0 * kk + 2.0) * (3.0 * kk + 3.0)) / (kk + 1.0));
        tgp = dd::div(dd::mul(tgp, z3), (k3 + 1.0) * (k3 + 3.0));
        f = dd::add(f, tf);
        g = dd::add(g, tg);
        fp = dd::add(fp, tfp);
        gp = dd::add(gp, tgp);
        double mag = std::max(std::max(dd::abs2(tf), dd::abs2(tg)),
                              std::max(dd::abs2(tfp), dd::abs2(tgp)));
        if (mag < 1e-100 * (1.0 + dd::abs2(f))) break;
    }
    dd::Complex ai = dd::add(dd::mul(f, detail_airy::kAi0), dd::mul(g, detail_airy::kAip0));
    dd::Complex aip = dd::add(dd::mul(fp, detail_airy::kAi0), dd::mul(gp, detail_airy::kAip0));
    return {dd::to_cplx(ai), dd::to_cplx(aip)};
}

// Steepest-descent expansion, |arg s| <= 2pi/3, |s| >= crossover.
inline AiryPair airy_asymptotic_direct(cplx s) {
    cplx sq = std::sqrt(s);                 // principal
    cplx zeta = (2.0 / 3.0) * s * sq;       // (2/3) s^{3/2}
    cplx izeta = 1.0 / zeta;
    cplx su(1.0, 0.0), sv(1.0, 0.0);
    cplx tu(1.0, 0.0), tv(1.0, 0.0);
    double uk = 1.0;
    double prev = 1e300;
    cplx pw(1.0, 0.0);
    for (int k = 1; k <= 40; ++k) {
        double kk = k;
        uk *= (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
              ((2.0 * kk - 1.0) * 216.0 * kk);
        double vk = uk * (6.0 * kk + 1.0) / (1.0 - 6.0 * kk);
        pw *= -izeta;
        cplx du = uk * pw;
        cplx dv = vk * pw;
        double mag = std::abs(du);
        if (mag > prev) break;  // past optimal truncation
        su += du;
        sv += dv;
        prev = mag;
        if (mag < 1e-18) break;
    }
    double c = 0.5 / std::sqrt(std::numbers::pi);
    cplx e = std::exp(-zeta);
    cplx s14 = std::sqrt(sq);  // s^{1/4}, principal
    return {c / s14 * e * su, -c * s14 * e * sv};
}

inline AiryPair airy_large(cplx s);

// Rotation by the connection identity for arg s beyond 2pi/3.
inline AiryPair airy_rotated(cplx s) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx w2 = std::conj(w);
    // Ai(s) = -w Ai(w s) - w^2 Ai(w^2 s); both rotated arguments land in
    // |arg| <= 2pi/3 when |arg s| > 2pi/3.
    AiryPair a1 = airy_large(w * s);
    AiryPair a2 = airy_large(w2 * s);
    AiryPair out;
    out.ai = -w * a1.ai - w2 * a2.ai;
    // d/ds: chain rule pulls another rotation factor
    out.ai_prime = -w * w * a1.ai_prime - w2 * w2 * a2.ai_prime;
    return out;
}

inline AiryPair airy_large(cplx s) {
    double ang = std::arg(s);
    if (std::fabs(ang) <= 2.0 * std::numbers::pi / 3.0 + 1e-14)
        return airy_asymptotic_direct(s);
    return airy_rotated(s);
}

}  // namespace detail_airy

inline AiryPair airy(cplx s) {
    if (std::abs(s) <= detail_airy::kCrossover) return detail_airy::airy_series(s);
    return detail_airy::airy_large(s);
}

enum class PhiSector { I, II, III };  // I: 0<arg<2pi/3, II: -2pi/3<arg<0, III: beyond

inline PhiSector phi_sector_of(cplx s) {
    double ang = std::arg(s);
    const double ray = 2.0 * std::numbers::pi / 3.0;
    for (double r : {0.0, ray, -ray})
        if (std::fabs(ang - r) < 1e-8)
            throw OnRayError("phi_matrix: s too close to a sector boundary ray");
    if (ang > 0.0 && ang < ray) return PhiSector::I;
    if (ang < 0.0 && ang > -ray) return PhiSector::II;
    return PhiSector::III;
}

// Sectorwise Airy matrix with y0 = Ai(s), y1 = w Ai(w s), y2 = w^2 Ai(w^2 s),
// w = e^{2 pi i / 3}.
inline Mat3 phi_matrix(cplx s, PhiSector sector) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx w2 = std::conj(w);
    AiryPair a0 = airy(s);
    AiryPair a1 = airy(w * s);
    AiryPair a2 = airy(w2 * s);
    cplx y0 = a0.ai, y0p = a0.ai_prime;
    cplx y1 = w * a1.ai, y1p = w * w * a1.ai_prime;
    cplx y2 = w2 * a2.ai, y2p = w2 * w2 * a2.ai_prime;
    Mat3 out;
    out(0, 0) = 1.0;
    switch (sector) {
        case PhiSector::I:
            out(1, 1) = y0;
            out(1, 2) = -y2;
            out(2, 1) = y0p;
            out(2, 2) = -y2p;
            break;
        case PhiSector::II:
            out(1, 1) = y0;
            out(1, 2) = y1;
            out(2, 1) = y0p;
            out(2, 2) = y1p;
            break;
        case PhiSector::III:
            out(1, 1) = -y1;
            out(1, 2) = -y2;
            out(2, 1) = -y1p;
            out(2, 2) = -y2p;
            break;
    }
    return out;
}

inline Mat3 phi_matrix(cplx s) { return phi_matrix(s, phi_sector_of(s)); }

}  // namespace extsrc

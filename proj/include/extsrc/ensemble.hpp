// Finite-n machinery: Monte Carlo sampling of the Gaussian Hermitian matrix
// plus the two-valued diagonal shift, and the determinantal correlation
// kernel via biorthogonal Gram inversion.
#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "extsrc/errors.hpp"
#include "extsrc/surface.hpp"

namespace extsrc {

// Counter-based splittable generator: stream r of a run seeded with s is
// SplitMix64 started at mix(s, r), so replicas are reproducible and
// independent of evaluation order.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    static uint64_t mix(uint64_t seed, uint64_t stream) {
        SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        return g.next();
    }

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() {  // in (0, 1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() {  // standard normal via Box-Muller, spare cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

  private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct EigenSample {
    std::vector<double> eigenvalues;  // sorted ascending
    uint64_t seed;
};

// Draw M = M0 + A with M0 Hermitian Gaussian (density ~ e^{-(n/2) tr M0^2})
// and A = diag(a,...,a,-a,...,-a); return sorted eigenvalues.
inline EigenSample sample_spectrum(const SourceParams& params, uint64_t seed) {
    int n = params.n;
    SplitMix64 rng(SplitMix64::mix(seed, 0));
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    double sd = 1.0 / std::sqrt(static_cast<double>(n));
    double so = 1.0 / std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i) {
        M(i, i) = sd * rng.gaussian() + (i < n / 2 ? params.a : -params.a);
        for (int j = i + 1; j < n; ++j) {
            M(i, j) = cplx(so * rng.gaussian(), so * rng.gaussian());
            M(j, i) = std::conj(M(i, j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success)
        throw EigenFail("sample_spectrum: eigensolver did not converge");
    EigenSample out;
    out.seed = seed;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return out;
}

namespace detail_kernel {

// The Gram matrix pairing the two biorthogonal families is intrinsically
// exponentially ill-conditioned (the dual functions have L2 norms growing
// like e^{cn}), so the Gram build, factorization, and every kernel
// evaluation run in 60-digit floating point.
using wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;

// Orthonormal Hermite functions h_k(t) = H~_k(t) e^{-t^2/2} for the weight
// e^{-t^2}; the stable three-term recurrence runs on the functions directly.
template <typename S>
inline void hermite_functions_t(const S& t, int count, std::vector<S>& out) {
    using std::exp;
    using std::pow;
    using std::sqrt;
    out.resize(count);
    S h0 = exp(-t * t / 2) / pow(S(std::numbers::pi), S(0.25));
    if (count > 0) out[0] = h0;
    if (count > 1) out[1] = sqrt(S(2)) * t * h0;
    for (int k = 1; k + 1 < count; ++k)
        out[k + 1] = (t * out[k] - sqrt(S(k) / 2) * out[k - 1]) / sqrt(S(k + 1) / 2);
}

inline void hermite_functions(double t, int count, std::vector<double>& out) {
    hermite_functions_t<double>(t, count, out);
}

// Gauss-Hermite nodes (Jacobi matrix, Newton-refined to working precision)
// with exponential-free weights w~_i = w_i e^{u_i^2}: the raw weights
// underflow at a few hundred nodes, so they are recovered from the
// Christoffel function 1/sum_k h_k(u_i)^2 built from the Hermite functions,
// which never leaves the representable range.
struct GhRule {
    std::vector<double> x, wtilde;
};

struct WideRule {
    std::vector<wide> x, wtilde;
};

inline WideRule gauss_hermite_wide(int m) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        double b = std::sqrt(0.5 * k);
        J(k - 1, k) = J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw EigenFail("gauss_hermite: Jacobi matrix eigensolve failed");
    WideRule r;
    r.x.resize(m);
    r.wtilde.resize(m);
    std::vector<wide> h;
    for (int k = 0; k < m; ++k) {
        wide u = es.eigenvalues()(k);
        // Newton on h_m(u) = 0 using h_m'(u) = sqrt(2m) h_{m-1} - u h_m;
        // the double seed is within 1e-13 so four steps reach full precision
        for (int it = 0; it < 4; ++it) {
            hermite_functions_t<wide>(u, m + 1, h);
            u -= h[m] / (sqrt(wide(2 * m)) * h[m - 1] - u * h[m]);
        }
        hermite_functions_t<wide>(u, m, h);
        wide s = 0;
        for (const wide& v : h) s += v * v;
        r.x[k] = u;
        r.wtilde[k] = 1 / s;
    }
    return r;
}

inline GhRule gauss_hermite(int m) {
    WideRule w = gauss_hermite_wide(m);
    GhRule r;
    r.x.resize(m);
    r.wtilde.resize(m);
    for (int k = 0; k < m; ++k) {
        r.x[k] = static_cast<double>(w.x[k]);
        r.wtilde[k] = static_cast<double>(w.wtilde[k]);
    }
    return r;
}

}  // namespace detail_kernel

// Determinantal kernel in the symmetric Gaussian gauge: left family
// span{x^k e^{-n x^2/4}} (orthonormalized Hermite functions), right family
// spanning {y^k e^{-n y^2/4 +- n a y}}.  Completing the square,
// e^{-n y^2/4 +- n a y} = e^{-n(y -+ 2a)^2/4} e^{n a^2}, so the right space
// has an orthonormal basis of Hermite functions recentered at +-2a; in that
// basis the Gram has entries bounded by 1 (cosines of principal angles
// between the two spaces).  The smallest cosine still decays like e^{-cn},
// which is intrinsic to the biorthogonal pair, so the linear algebra runs
// in 60-digit precision.  K(x,y) = f(x)^T (G^T)^{-1} g(y).
class KernelMatrix {
    using wide = detail_kernel::wide;

  public:
    KernelMatrix(const SourceParams& params, std::vector<double> grid_pts)
        : KernelMatrix(params.a, params.n, std::move(grid_pts)) {}

    // a = 0 is allowed here: the two right blocks coalesce and the right
    // space becomes the full degree < n polynomial space (the GUE limit),
    // handled as a single block centered at the origin.
    KernelMatrix(double a, int n, std::vector<double> grid_pts)
        : a_(a), n_(n), grid(std::move(grid_pts)) {
        if (!(a_ >= 0.0)) throw std::invalid_argument("KernelMatrix: a must be >= 0");
        if (n_ < 2 || n_ % 2 != 0)
            throw std::invalid_argument("KernelMatrix: n must be even and >= 2");
        if (n_ > 128)
            throw NumericalError("build_kernel: n > 128 exceeds the precision budget");
        build();
        values.resize(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) {
            values[i].resize(grid.size());
            for (size_t j = 0; j < grid.size(); ++j)
                values[i][j] = (*this)(grid[i], grid[j]);
        }
    }

    double a() const { return a_; }
    int n() const { return n_; }
    double condition() const { return cond_; }
    const std::string& gauge() const { return gauge_; }

    // exact kernel evaluation at arbitrary points
    double operator()(double x, double y) const {
        std::vector<wide> f, g, h;
        detail_kernel::hermite_functions_t<wide>(wide(x) * root_n2_, n_, f);
        right_family_wide(y, g, h);
        std::vector<wide> w = solve(std::move(f));  // G w = f
        wide acc = 0;
        for (int k = 0; k < n_; ++k) acc += w[k] * g[k];
        return static_cast<double>(acc);
    }

    // f_j(x) = (orthonormal Hermite poly) * e^{-n x^2 / 4}
    void left_family(double x, std::vector<double>& f) const {
        detail_kernel::hermite_functions(x * static_cast<double>(root_n2_), n_, f);
    }

    // basis of the right space: Hermite functions recentered at +-2a (one
    // block per sign; a single block at the origin when a = 0); the fixed
    // constant e^{n a^2} is absorbed by the Gram inversion
    void right_family(double y, std::vector<double>& g) const {
        std::vector<wide> gw, h;
        right_family_wide(y, gw, h);
        g.resize(n_);
        for (int k = 0; k < n_; ++k) g[k] = static_cast<double>(gw[k]);
    }

    std::vector<double> grid;
    std::vector<std::vector<double>> values;

  private:
    struct Block {
        double center;  // 2 eps a
        int offset, count;
    };

    std::vector<Block> blocks() const {
        if (a_ == 0.0) return {{0.0, 0, n_}};
        return {{2.0 * a_, 0, n_ / 2}, {-2.0 * a_, n_ / 2, n_ / 2}};
    }

    void right_family_wide(double y, std::vector<wide>& g, std::vector<wide>& h) const {
        g.resize(n_);
        for (const Block& b : blocks()) {
            detail_kernel::hermite_functions_t<wide>((wide(y) - wide(b.center)) * root_n2_,
                                                     b.count, h);
            for (int k = 0; k < b.count; ++k) g[b.offset + k] = h[k];
        }
    }

    // solve G v = rhs using the stored pivoted LU factors
    std::vector<wide> solve(std::vector<wide> v) const {
        for (int c = 0; c < n_; ++c) std::swap(v[c], v[piv_[c]]);
        for (int c = 0; c < n_; ++c)
            for (int r = c + 1; r < n_; ++r) v[r] -= lu_[r][c] * v[c];
        for (int c = n_ - 1; c >= 0; --c) {
            v[c] /= lu_[c][c];
            for (int r = 0; r < c; ++r) v[r] -= lu_[r][c] * v[c];
        }
        return v;
    }

    void build() {
        using boost::multiprecision::abs;
        root_n2_ = sqrt(wide(n_) / 2);
        int m = 4 * n_ + 64;
        detail_kernel::WideRule gh = detail_kernel::gauss_hermite_wide(m);
        // G_{jk} = int f_j(x) g_k(x) dx; for block center 2 eps a the
        // product peaks at eps a, so the rule is recentered there: with
        // u = (x - eps a) sqrt(n/2) the product f_j g_k carries exactly
        // e^{-u^2} times a constant, matching the exponential-free weights
        std::vector<std::vector<wide>> G(n_, std::vector<wide>(n_, wide(0)));
        std::vector<wide> f, h;
        wide scale = 1 / root_n2_;
        for (int i = 0; i < m; ++i) {
            for (const Block& b : blocks()) {
                wide x = wide(b.center) / 2 + gh.x[i] * scale;
                detail_kernel::hermite_functions_t<wide>(x * root_n2_, n_, f);
                detail_kernel::hermite_functions_t<wide>(
                    (x - wide(b.center)) * root_n2_, b.count, h);
                wide w2 = gh.wtilde[i] * scale;
                for (int j = 0; j < n_; ++j) {
                    wide fw = f[j] * w2;
                    for (int k = 0; k < b.count; ++k) G[j][b.offset + k] += fw * h[k];
                }
            }
        }
        double gnorm = 0.0;
        for (int k = 0; k < n_; ++k) {
            wide s = 0;
            for (int j = 0; j < n_; ++j) s += G[j][k] * G[j][k];
            gnorm = std::max(gnorm, static_cast<double>(sqrt(s)));
        }
        // pivoted LU of G
        lu_ = std::move(G);
        piv_.resize(n_);
        for (int c = 0; c < n_; ++c) {
            int p = c;
            for (int r = c + 1; r < n_; ++r)
                if (abs(lu_[r][c]) > abs(lu_[p][c])) p = r;
            std::swap(lu_[p], lu_[c]);
            piv_[c] = p;
            if (lu_[c][c] == 0)
                throw IllConditioned("build_kernel: singular Gram matrix");
            for (int r = c + 1; r < n_; ++r) {
                wide mult = lu_[r][c] / lu_[c][c];
                lu_[r][c] = mult;
                for (int c2 = c + 1; c2 < n_; ++c2) lu_[r][c2] -= mult * lu_[c][c2];
            }
        }
        // condition estimate from probing columns of the inverse
        double ginv = 0.0;
        std::vector<wide> e(n_, wide(0));
        for (int t = 0; t < n_; t += 5) {
            std::fill(e.begin(), e.end(), wide(0));
            e[t] = 1;
            std::vector<wide> w = solve(e);
            wide s = 0;
            for (const wide& v : w) s += v * v;
            ginv = std::max(ginv, static_cast<double>(sqrt(s)));
        }
        cond_ = gnorm * ginv;
        // 60 working digits leave ~20 digits of headroom at the guard
        if (!(ginv < 1e40))
            throw IllConditioned("build_kernel: Gram inverse exceeds the precision budget");
        gauge_ = "symmetric exp(-n x^2/4) split";
    }

    double a_;
    int n_;
    wide root_n2_ = 1;
    double cond_ = 0.0;
    std::string gauge_;
    std::vector<std::vector<wide>> lu_;
    std::vector<int> piv_;
};

inline KernelMatrix build_kernel(const SourceParams& params,
                                 const std::vector<double>& grid) {
    return KernelMatrix(params, grid);
}

// Reference GUE kernel (a = 0) in the same gauge, via the
// Christoffel-Darboux identity: an independent closed form used to
// cross-check the Gram-inversion path.
inline double gue_reference_kernel(int n, double x, double y) {
    double r = std::sqrt(0.5 * n);
    std::vector<double> hx, hy;
    detail_kernel::hermite_functions(x * r, n + 1, hx);
    detail_kernel::hermite_functions(y * r, n + 1, hy);
    double c = std::sqrt(0.5 * n);
    if (x != y)
        return r * c * (hx[n] * hy[n - 1] - hx[n - 1] * hy[n]) / (r * (x - y));
    // confluent form with h_n'(t) = sqrt(2n) h_{n-1}(t) - t h_n(t)
    double t = x * r;
    double dn = std::sqrt(2.0 * n) * hx[n - 1] - t * hx[n];
    double dn1 = (n > 1 ? std::sqrt(2.0 * (n - 1)) * hx[n - 2] : 0.0) - t * hx[n - 1];
    return r * c * (dn * hx[n - 1] - dn1 * hx[n]);
}

// m-point correlation R_m = det[K(p_i, p_j)].
inline double correlation(const KernelMatrix& kernel,
                          const std::vector<double>& points) {
    int m = static_cast<int>(points.size());
    Eigen::MatrixXd Km(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Km(i, j) = kernel(points[i], points[j]);
    return Km.determinant();
}

}  // namespace extsrc

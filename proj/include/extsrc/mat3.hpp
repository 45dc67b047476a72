#pragma once

// Small dense 3x3 complex matrix, enough for the RH parametrices.

#include <array>
#include <cmath>
#include <complex>

namespace extsrc {

using cplx = std::complex<double>;

struct Mat3 {
    std::array<cplx, 9> m{};  // row-major

    cplx& operator()(int r, int c) { return m[3 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[3 * r + c]; }

    static Mat3 identity() {
        Mat3 I;
        I(0, 0) = I(1, 1) = I(2, 2) = 1.0;
        return I;
    }

    static Mat3 diag(cplx d0, cplx d1, cplx d2) {
        Mat3 D;
        D(0, 0) = d0;
        D(1, 1) = d1;
        D(2, 2) = d2;
        return D;
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 operator*(double s) const {
        Mat3 r = *this;
        for (auto& v : r.m) v *= s;
        return r;
    }

    Mat3 operator*(cplx s) const {
        Mat3 r = *this;
        for (auto& v : r.m) v *= s;
        return r;
    }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r = *this;
        r += o;
        return r;
    }

    Mat3 operator-(const Mat3& o) const {
        Mat3 r = *this;
        for (int i = 0; i < 9; ++i) r.m[i] -= o.m[i];
        return r;
    }

    cplx det() const {
        const Mat3& A = *this;
        return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
               A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
               A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    }

    Mat3 inverse() const {
        const Mat3& A = *this;
        Mat3 adj;
        adj(0, 0) = A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
        adj(0, 1) = A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2);
        adj(0, 2) = A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1);
        adj(1, 0) = A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2);
        adj(1, 1) = A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0);
        adj(1, 2) = A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2);
        adj(2, 0) = A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0);
        adj(2, 1) = A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1);
        adj(2, 2) = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        cplx dd = det();
        return adj * (1.0 / dd);
    }

    // max-abs entry norm
    double norm() const {
        double n = 0.0;
        for (const auto& v : m) n = std::max(n, std::abs(v));
        return n;
    }
};

inline Mat3 operator*(double s, const Mat3& A) { return A * s; }

}  // namespace extsrc

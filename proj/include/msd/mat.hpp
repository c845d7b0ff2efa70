#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace msd {

/// Dense d-by-n matrix with d, n in {1, 2}. Values of deformation
/// gradients, jump vectors and measure weights all live here; Frobenius
/// is the only norm used on matrices.
struct Mat {
    int rows = 1;
    int cols = 1;
    std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c) {
        if (r < 1 || r > 2 || c < 1 || c > 2)
            throw std::invalid_argument("Mat: dimensions must be 1 or 2");
    }
    static Mat scalar(double v) {
        Mat m(1, 1);
        m.a[0] = v;
        return m;
    }
    static Mat zero(int r, int c) { return Mat(r, c); }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i * cols + j)]; }

    int size() const { return rows * cols; }
    double& operator[](int k) { return a[static_cast<size_t>(k)]; }
    double operator[](int k) const { return a[static_cast<size_t>(k)]; }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

    Mat& operator+=(const Mat& o) {
        check_shape(o);
        for (int k = 0; k < size(); ++k) a[static_cast<size_t>(k)] += o[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        check_shape(o);
        for (int k = 0; k < size(); ++k) a[static_cast<size_t>(k)] -= o[k];
        return *this;
    }
    Mat& operator*=(double s) {
        for (int k = 0; k < size(); ++k) a[static_cast<size_t>(k)] *= s;
        return *this;
    }

    friend Mat operator+(Mat l, const Mat& r) { return l += r; }
    friend Mat operator-(Mat l, const Mat& r) { return l -= r; }
    friend Mat operator*(Mat l, double s) { return l *= s; }
    friend Mat operator*(double s, Mat r) { return r *= s; }
    friend Mat operator/(Mat l, double s) { return l *= (1.0 / s); }
    friend Mat operator-(Mat m) { return m *= -1.0; }

    double dot(const Mat& o) const {
        check_shape(o);
        double s = 0.0;
        for (int k = 0; k < size(); ++k) s += a[static_cast<size_t>(k)] * o[k];
        return s;
    }
    /// Frobenius norm.
    double norm() const { return std::sqrt(this->dot(*this)); }

    bool is_zero(double tol = 0.0) const {
        for (int k = 0; k < size(); ++k)
            if (std::abs(a[static_cast<size_t>(k)]) > tol) return false;
        return true;
    }
    bool finite() const {
        for (int k = 0; k < size(); ++k)
            if (!std::isfinite(a[static_cast<size_t>(k)])) return false;
        return true;
    }

private:
    void check_shape(const Mat& o) const {
        if (!same_shape(o)) throw std::invalid_argument("Mat: shape mismatch");
    }
};

/// Column vector in R^d, d in {1, 2}.
using Vec = Mat;

inline Vec vec1(double x) { return Mat::scalar(x); }

inline Vec vec2(double x, double y) {
    Mat m(2, 1);
    m[0] = x;
    m[1] = y;
    return m;
}

inline Mat mat22(double a00, double a01, double a10, double a11) {
    Mat m(2, 2);
    m(0, 0) = a00;
    m(0, 1) = a01;
    m(1, 0) = a10;
    m(1, 1) = a11;
    return m;
}

/// lambda (x) nu: d-vector times N-covector.
inline Mat outer(const Vec& lambda, const Vec& nu) {
    Mat m(lambda.rows, nu.rows);
    for (int i = 0; i < lambda.rows; ++i)
        for (int j = 0; j < nu.rows; ++j) m(i, j) = lambda[i] * nu[j];
    return m;
}

/// Singular value decomposition of a d x N matrix (d, N <= 2) as a sum of
/// rank-one terms sigma_i * u_i (x) v_i with sigma_i >= 0 and unit u_i, v_i.
struct RankOneTerm {
    double sigma = 0.0;
    Vec u;
    Vec v;
};

inline std::array<RankOneTerm, 2> rank_one_decomposition(const Mat& m) {
    std::array<RankOneTerm, 2> out;
    if (m.rows == 1 && m.cols == 1) {
        out[0].sigma = std::abs(m[0]);
        out[0].u = vec1(m[0] >= 0 ? 1.0 : -1.0);
        out[0].v = vec1(1.0);
        return out;
    }
    if (m.rows == 1 || m.cols == 1) {
        // A single row or column is already rank one.
        double s = m.norm();
        out[0].sigma = s;
        if (s == 0.0) return out;
        if (m.cols == 1) {
            out[0].u = m / s;
            out[0].v = vec1(1.0);
        } else {
            out[0].u = vec1(1.0);
            Vec v(2, 1);
            v[0] = m(0, 0) / s;
            v[1] = m(0, 1) / s;
            out[0].v = v;
        }
        return out;
    }
    // 2x2 case: expand M in an orthonormal eigenbasis (v1, v2) of M^T M,
    //   M = (M v1) v1^T + (M v2) v2^T,
    // which reassembles exactly for any orthonormal basis; the eigenbasis
    // makes the two terms the singular pairs.
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double s00 = a * a + c * c, s01 = a * b + c * d, s11 = b * b + d * d;
    const double mean = 0.5 * (s00 + s11);
    const double disc = std::sqrt(0.25 * (s00 - s11) * (s00 - s11) + s01 * s01);
    const double lam1 = mean + disc;
    Vec v1;
    Vec cand1 = vec2(s01, lam1 - s00);
    Vec cand2 = vec2(lam1 - s11, s01);
    v1 = cand1.norm() >= cand2.norm() ? cand1 : cand2;
    if (v1.norm() < 1e-300)
        v1 = vec2(1.0, 0.0);
    else
        v1 = v1 / v1.norm();
    Vec v2 = vec2(-v1[1], v1[0]);
    auto make_term = [&](const Vec& v) {
        RankOneTerm t;
        Vec w = vec2(a * v[0] + b * v[1], c * v[0] + d * v[1]);
        t.sigma = w.norm();
        t.u = t.sigma > 0 ? w / t.sigma : vec2(1.0, 0.0);
        t.v = v;
        return t;
    };
    out[0] = make_term(v1);
    out[1] = make_term(v2);
    if (out[1].sigma > out[0].sigma) std::swap(out[0], out[1]);
    return out;
}

inline std::string to_string(const Mat& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows; ++i) {
        if (i) s += "; ";
        for (int j = 0; j < m.cols; ++j) {
            if (j) s += ", ";
            s += std::to_string(m(i, j));
        }
    }
    return s + "]";
}

}  // namespace msd

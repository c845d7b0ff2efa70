#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "msd/mat.hpp"

namespace msd {

/// Univariate polynomial, coefficients in increasing degree.
struct Poly {
    std::vector<double> c;

    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(double v) { return Poly({v}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    double operator()(double x) const {
        double v = 0.0;
        for (size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    }

    Poly operator+(const Poly& o) const {
        Poly r;
        r.c.resize(std::max(c.size(), o.c.size()), 0.0);
        for (size_t k = 0; k < c.size(); ++k) r.c[k] += c[k];
        for (size_t k = 0; k < o.c.size(); ++k) r.c[k] += o.c[k];
        r.trim();
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (o * -1.0); }
    Poly operator*(double s) const {
        Poly r = *this;
        for (auto& v : r.c) v *= s;
        r.trim();
        return r;
    }
    Poly operator*(const Poly& o) const {
        if (c.empty() || o.c.empty()) return Poly();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        r.trim();
        return r;
    }

    /// p(x + t): shift of the argument.
    Poly shifted(double t) const {
        Poly r;
        r.c.assign(c.size(), 0.0);
        // Horner-style expansion of sum c_k (x+t)^k.
        for (size_t k = c.size(); k-- > 0;) {
            for (size_t j = r.c.size(); j-- > 1;) r.c[j] = r.c[j - 1] + t * r.c[j];
            r.c[0] = c[k] + t * r.c[0];
        }
        r.trim();
        return r;
    }

    Poly antiderivative() const {
        Poly r;
        r.c.assign(c.size() + 1, 0.0);
        for (size_t k = 0; k < c.size(); ++k) r.c[k + 1] = c[k] / static_cast<double>(k + 1);
        return r;
    }

    double integral(double lo, double hi) const {
        Poly f = antiderivative();
        return f(hi) - f(lo);
    }

    void trim() {
        while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    }
};

/// Matrix-valued piecewise polynomial on [a, b]. Piece j covers
/// [bp[j], bp[j+1]] and is evaluated in the local variable x - bp[j].
struct PiecewisePoly {
    int rows = 1, cols = 1;
    std::vector<double> bp;                    // breakpoints, size m+1
    std::vector<std::vector<Mat>> pieces;      // per piece: coefficients, increasing degree

    PiecewisePoly() = default;
    PiecewisePoly(double a, double b, int r = 1, int c = 1) : rows(r), cols(c) {
        bp = {a, b};
        pieces = {{Mat::zero(r, c)}};
    }

    double lo() const { return bp.front(); }
    double hi() const { return bp.back(); }
    int n_pieces() const { return static_cast<int>(pieces.size()); }
    bool is_zero() const {
        for (const auto& p : pieces)
            for (const auto& m : p)
                if (!m.is_zero()) return false;
        return true;
    }

    static PiecewisePoly constant(double a, double b, const Mat& v) {
        PiecewisePoly p(a, b, v.rows, v.cols);
        p.pieces[0][0] = v;
        return p;
    }

    int piece_index(double x) const {
        if (x <= bp.front()) return 0;
        if (x >= bp.back()) return n_pieces() - 1;
        auto it = std::upper_bound(bp.begin(), bp.end(), x);
        return static_cast<int>(it - bp.begin()) - 1;
    }

    Mat eval(double x) const {
        int j = piece_index(x);
        double t = x - bp[static_cast<size_t>(j)];
        Mat v = Mat::zero(rows, cols);
        const auto& cs = pieces[static_cast<size_t>(j)];
        for (int comp = 0; comp < rows * cols; ++comp) {
            double acc = 0.0;
            for (size_t k = cs.size(); k-- > 0;) acc = acc * t + cs[k][comp];
            v[comp] = acc;
        }
        return v;
    }

    double eval_scalar(double x) const { return eval(x)[0]; }

    /// Exact component-wise integral over the whole domain.
    Mat integral() const { return integral(lo(), hi()); }

    Mat integral(double x0, double x1) const {
        Mat acc = Mat::zero(rows, cols);
        if (x1 <= x0) return acc;
        for (int j = 0; j < n_pieces(); ++j) {
            double a = bp[static_cast<size_t>(j)], b = bp[static_cast<size_t>(j) + 1];
            double lo_ = std::max(a, x0), hi_ = std::min(b, x1);
            if (hi_ <= lo_) continue;
            const auto& cs = pieces[static_cast<size_t>(j)];
            for (int comp = 0; comp < rows * cols; ++comp) {
                double s = 0.0;
                for (size_t k = 0; k < cs.size(); ++k) {
                    double kk = static_cast<double>(k + 1);
                    s += cs[k][comp] / kk *
                         (std::pow(hi_ - a, kk) - std::pow(lo_ - a, kk));
                }
                acc[comp] += s;
            }
        }
        return acc;
    }

    PiecewisePoly scaled(double s) const {
        PiecewisePoly r = *this;
        for (auto& p : r.pieces)
            for (auto& m : p) m *= s;
        return r;
    }

    /// Insert additional breakpoints (values outside the domain are ignored).
    PiecewisePoly refined(const std::vector<double>& extra) const {
        std::vector<double> nb = bp;
        for (double x : extra)
            if (x > lo() && x < hi()) nb.push_back(x);
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 nb.end());
        PiecewisePoly r;
        r.rows = rows;
        r.cols = cols;
        r.bp = nb;
        r.pieces.resize(nb.size() - 1);
        for (size_t j = 0; j + 1 < nb.size(); ++j) {
            int src = piece_index(0.5 * (nb[j] + nb[j + 1]));
            double shift = nb[j] - bp[static_cast<size_t>(src)];
            const auto& cs = pieces[static_cast<size_t>(src)];
            // Re-express coefficients in the new local variable.
            std::vector<Mat> ncs(cs.size(), Mat::zero(rows, cols));
            for (int comp = 0; comp < rows * cols; ++comp) {
                std::vector<double> sc(cs.size());
                for (size_t k = 0; k < cs.size(); ++k) sc[k] = cs[k][comp];
                Poly p{sc};
                Poly q = p.shifted(shift);
                for (size_t k = 0; k < ncs.size(); ++k)
                    ncs[k][comp] = k < q.c.size() ? q.c[k] : 0.0;
            }
            r.pieces[j] = ncs;
        }
        return r;
    }

    friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
        if (a.rows != b.rows || a.cols != b.cols)
            throw std::invalid_argument("PiecewisePoly: shape mismatch");
        PiecewisePoly ra = a.refined(b.bp);
        PiecewisePoly rb = b.refined(a.bp);
        for (size_t j = 0; j < ra.pieces.size(); ++j) {
            auto& pa = ra.pieces[j];
            const auto& pb = rb.pieces[j];
            if (pb.size() > pa.size()) pa.resize(pb.size(), Mat::zero(a.rows, a.cols));
            for (size_t k = 0; k < pb.size(); ++k) pa[k] += pb[k];
        }
        return ra;
    }
};

/// Adaptive Gauss-Legendre quadrature (7-point Gauss / 15-point Kronrod pair
/// replaced by a simple two-panel refinement of GL7, sufficient for smooth
/// piecewise integrands here).
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10, int max_depth = 28);

/// Integrate f over [a,b] splitting at the given breakpoints first.
double quad_with_breaks(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, double tol = 1e-10);

/// Real roots of p in [lo, hi] via derivative-based interval isolation.
std::vector<double> poly_real_roots(const Poly& p, double lo, double hi);

/// Kink locations of x -> f(p(x) - c) for scalar pieces: roots of the piece
/// polynomials shifted by each c in `levels`, in global coordinates.
/// Integrands built from absolute values and piecewise-linear envelopes are
/// smooth between these points, which makes panel quadrature exact.
std::vector<double> scalar_kink_points(const PiecewisePoly& p, const std::vector<double>& levels);

}  // namespace msd

#include "msd/poly.hpp"

#include <array>
#include <cmath>

namespace msd {

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 7> kNodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr std::array<double, 7> kWeights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

double gl7(const std::function<double(double)>& f, double a, double b) {
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += kWeights[static_cast<size_t>(i)] * f(m + h * kNodes[static_cast<size_t>(i)]);
    return s * h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = gl7(f, a, m), right = gl7(f, m, b);
    double split = left + right;
    if (depth <= 0 || std::abs(split - whole) <= tol) return split;
    return adapt(f, a, m, left, tol * 0.5, depth - 1) +
           adapt(f, m, b, right, tol * 0.5, depth - 1);
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth) {
    if (b <= a) return 0.0;
    return adapt(f, a, b, gl7(f, a, b), tol, max_depth);
}

double quad_with_breaks(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, double tol) {
    std::vector<double> pts = {a, b};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] > pts[i]) s += adaptive_quad(f, pts[i], pts[i + 1], tol);
    return s;
}

namespace {

Poly derivative_poly(const Poly& p) {
    Poly d;
    if (p.c.size() <= 1) return d;
    d.c.resize(p.c.size() - 1);
    for (size_t k = 1; k < p.c.size(); ++k) d.c[k - 1] = p.c[k] * static_cast<double>(k);
    return d;
}

double bisect_root(const Poly& p, double lo, double hi) {
    double flo = p(lo);
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = p(mid);
        if (fm == 0.0 || hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) return mid;
        if ((flo < 0) != (fm < 0))
            hi = mid;
        else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

void roots_rec(const Poly& p, double lo, double hi, std::vector<double>& out) {
    int deg = p.degree();
    while (deg > 0 && p.c[static_cast<size_t>(deg)] == 0.0) --deg;
    if (deg <= 0) return;
    if (deg == 1) {
        double r = -p.c[0] / p.c[1];
        if (r > lo && r < hi) out.push_back(r);
        return;
    }
    std::vector<double> crit;
    roots_rec(derivative_poly(p), lo, hi, crit);
    std::sort(crit.begin(), crit.end());
    std::vector<double> nodes = {lo};
    nodes.insert(nodes.end(), crit.begin(), crit.end());
    nodes.push_back(hi);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        double l = nodes[i], r = nodes[i + 1];
        if (r - l < 1e-15) continue;
        double fl = p(l), fr = p(r);
        if (fl == 0.0 && i == 0) out.push_back(l);
        if ((fl < 0) != (fr < 0)) out.push_back(bisect_root(p, l, r));
        else if (fr == 0.0) out.push_back(r);
    }
}

}  // namespace

std::vector<double> poly_real_roots(const Poly& p, double lo, double hi) {
    std::vector<double> out;
    roots_rec(p, lo, hi, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> scalar_kink_points(const PiecewisePoly& p, const std::vector<double>& levels) {
    std::vector<double> out;
    if (p.rows * p.cols != 1) return out;
    for (size_t j = 0; j + 1 < p.bp.size(); ++j) {
        double lo = p.bp[j], hi = p.bp[j + 1];
        const auto& cs = p.pieces[j];
        std::vector<double> coeffs(cs.size());
        for (size_t k = 0; k < cs.size(); ++k) coeffs[k] = cs[k][0];
        for (double level : levels) {
            Poly q{coeffs};
            if (q.c.empty()) q.c.push_back(0.0);
            q.c[0] -= level;
            q.trim();
            for (double r : poly_real_roots(q, 0.0, hi - lo)) out.push_back(lo + r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace msd

#include "msd/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace msd {

double PLF::operator()(double x) const {
    if (xs.empty()) throw std::runtime_error("PLF: empty");
    if (x <= xs.front()) return ys.front() + slope_left() * (x - xs.front());
    if (x >= xs.back()) return ys.back() + slope_right() * (x - xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t j = static_cast<size_t>(it - xs.begin());
    double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1 - t) * ys[j - 1] + t * ys[j];
}

double PLF::slope_left() const {
    if (xs.size() < 2) return 0.0;
    return (ys[1] - ys[0]) / (xs[1] - xs[0]);
}

double PLF::slope_right() const {
    if (xs.size() < 2) return 0.0;
    size_t n = xs.size();
    return (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
}

bool PLF::convex(double tol) const {
    for (size_t j = 2; j < xs.size(); ++j) {
        double s1 = (ys[j - 1] - ys[j - 2]) / (xs[j - 1] - xs[j - 2]);
        double s2 = (ys[j] - ys[j - 1]) / (xs[j] - xs[j - 1]);
        if (s2 < s1 - tol) return false;
    }
    return true;
}

PLF convex_hull_plf(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("convex_hull_plf: need at least two samples");
    // Andrew's monotone chain, lower hull only (xs sorted).
    std::vector<size_t> hull;
    auto cross = [&](size_t o, size_t a, size_t b) {
        return (xs[a] - xs[o]) * (ys[b] - ys[o]) - (ys[a] - ys[o]) * (xs[b] - xs[o]);
    };
    for (size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0)
            hull.pop_back();
        hull.push_back(i);
    }
    PLF out;
    for (size_t i : hull) {
        out.xs.push_back(xs[i]);
        out.ys.push_back(ys[i]);
    }
    return out;
}

namespace {

double double_well_scalar(double a) {
    return std::min(2.0 * std::abs(a - 1.0), 2.0 * std::abs(a + 1.0)) + 1.0;
}

PLF custom_grid_plf(const BulkDensity& W) {
    // params: [lo, hi, v0, v1, ..., vn] on a uniform grid.
    if (W.params.size() < 4) throw std::invalid_argument("custom-grid bulk density: too few parameters");
    double lo = W.params[0], hi = W.params[1];
    size_t n = W.params.size() - 2;
    PLF f;
    f.xs.resize(n);
    f.ys.resize(n);
    for (size_t i = 0; i < n; ++i) {
        f.xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        f.ys[i] = W.params[i + 2];
    }
    return f;
}

}  // namespace

double BulkDensity::operator()(const Mat& A) const {
    if (!A.finite()) throw std::invalid_argument("eval_bulk: non-finite input");
    switch (kind) {
        case BulkKind::Abs:
            return A.norm();
        case BulkKind::Area:
            return std::sqrt(1.0 + A.dot(A));
        case BulkKind::DoubleWell:
            if (A.size() != 1) throw std::invalid_argument("double-well bulk density is one-dimensional");
            return double_well_scalar(A[0]);
        case BulkKind::CustomGrid: {
            if (A.size() != 1) throw std::invalid_argument("custom-grid bulk density is one-dimensional");
            return custom_grid_plf(*this)(A[0]);
        }
        case BulkKind::CustomFn:
            return fn(A);
    }
    throw std::logic_error("unreachable");
}

bool BulkDensity::has_closed_recession() const {
    switch (kind) {
        case BulkKind::Abs:
        case BulkKind::Area:
        case BulkKind::DoubleWell:
        case BulkKind::CustomGrid:
            return true;
        case BulkKind::CustomFn:
            return static_cast<bool>(fn_recession);
    }
    return false;
}

double BulkDensity::recession(const Mat& A) const {
    switch (kind) {
        case BulkKind::Abs:
        case BulkKind::Area:
            return A.norm();
        case BulkKind::DoubleWell:
            if (A.size() != 1) throw std::invalid_argument("double-well bulk density is one-dimensional");
            return 2.0 * std::abs(A[0]);
        case BulkKind::CustomGrid: {
            if (A.size() != 1) throw std::invalid_argument("custom-grid bulk density is one-dimensional");
            PLF f = custom_grid_plf(*this);
            return A[0] >= 0 ? f.slope_right() * A[0] : f.slope_left() * A[0];
        }
        case BulkKind::CustomFn:
            if (fn_recession) return fn_recession(A);
            throw std::runtime_error("bulk density has no closed-form recession");
    }
    throw std::logic_error("unreachable");
}

std::string BulkDensity::kind_name() const {
    switch (kind) {
        case BulkKind::Abs: return "abs";
        case BulkKind::Area: return "area";
        case BulkKind::DoubleWell: return "double-well";
        case BulkKind::CustomGrid: return "custom-grid";
        case BulkKind::CustomFn: return "custom-fn";
    }
    return "?";
}

double SurfaceDensity::operator()(const Vec& lambda, const Vec& nu) const {
    if (std::abs(nu.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("eval_surface: nu must be a unit vector");
    switch (kind) {
        case SurfaceKind::Norm:
            return lambda.norm();
        case SurfaceKind::AnisotropicNorm: {
            double kappa = params.empty() ? 0.0 : params[0];
            double n1 = nu[0];
            return lambda.norm() * (1.0 + kappa * n1 * n1);
        }
        case SurfaceKind::Custom: {
            double s = 0.0;
            for (int i = 0; i < lambda.rows; ++i) {
                double w = i < static_cast<int>(params.size()) ? params[static_cast<size_t>(i)] : 1.0;
                s += w * w * lambda[i] * lambda[i];
            }
            return std::sqrt(s);
        }
        case SurfaceKind::CustomFn:
            return fn(lambda, nu);
    }
    throw std::logic_error("unreachable");
}

std::string SurfaceDensity::kind_name() const {
    switch (kind) {
        case SurfaceKind::Norm: return "norm";
        case SurfaceKind::AnisotropicNorm: return "anisotropic-norm";
        case SurfaceKind::Custom: return "custom";
        case SurfaceKind::CustomFn: return "custom-fn";
    }
    return "?";
}

double eval_bulk(const BulkDensity& W, const Mat& A) { return W(A); }

double eval_surface(const SurfaceDensity& psi, const Vec& lambda, const Vec& nu) {
    return psi(lambda, nu);
}

RecessionEstimate recession_bulk(const BulkDensity& W, const Mat& A,
                                 const std::vector<double>& t_schedule) {
    if (t_schedule.empty()) throw std::invalid_argument("recession_bulk: empty schedule");
    for (size_t i = 1; i < t_schedule.size(); ++i)
        if (t_schedule[i] <= t_schedule[i - 1])
            throw std::invalid_argument("recession_bulk: schedule must be strictly increasing");
    double nA = A.norm();
    if (nA > 0 && t_schedule.back() * nA < 1.0)
        throw std::invalid_argument("recession_bulk: final t*|A| must be >= 1");
    if (W.has_closed_recession()) return {W.recession(A), 0.0};
    if (nA == 0.0) return {0.0, 0.0};
    double t = t_schedule.back();
    double value = W(A * t) / t;
    double bound = W.consts.c_rec * std::pow(nA, 1.0 - W.consts.alpha) / std::pow(t, W.consts.alpha);
    return {value, bound};
}

PLF convex_envelope_1d(const BulkDensity& W, double lo, double hi, double step) {
    if (hi <= lo || step <= 0) throw std::invalid_argument("convex_envelope_1d: bad grid");
    auto hull_at = [&](double h) {
        std::vector<double> xs, ys;
        for (double x = lo; x <= hi + 1e-12; x += h) {
            xs.push_back(x);
            ys.push_back(W(Mat::scalar(x)));
        }
        return convex_hull_plf(xs, ys);
    };
    PLF coarse = hull_at(step);
    PLF fine = hull_at(step * 0.5);
    double worst = 0.0;
    for (double x = lo; x <= hi + 1e-12; x += step)
        worst = std::max(worst, std::abs(coarse(x) - fine(x)));
    if (worst > 1e-6)
        throw std::runtime_error("convex_envelope_1d: grid too coarse, envelope not converged");
    return fine;
}

namespace {

Mat random_mat(std::mt19937_64& rng, int r, int c, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat m(r, c);
    for (int k = 0; k < m.size(); ++k) m[k] = u(rng) * scale;
    return m;
}

Vec random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n, 1);
    double s = 0.0;
    do {
        for (int k = 0; k < n; ++k) v[k] = g(rng);
        s = v.norm();
    } while (s < 1e-8);
    return v / s;
}

void record(ValidationReport& rep, const std::string& name, double worst,
            const std::string& witness, double tol = 1e-9) {
    CheckResult c;
    c.name = name;
    c.worst = worst;
    c.pass = worst <= tol;
    c.witness = witness;
    rep.checks.push_back(c);
}

}  // namespace

ValidationReport validate_pair(EnergyPair& pair, int sample_budget, unsigned seed) {
    if (sample_budget < 100) throw std::invalid_argument("validate_pair: sample_budget must be >= 100");
    std::mt19937_64 rng(seed);
    ValidationReport rep;
    const auto& W = pair.W;
    const auto& psi = pair.psi;
    const int dmax = W.one_dimensional_only() ? 1 : 2;
    std::uniform_real_distribution<double> uscale(-2.0, 1.5);  // log10 scale in [1e-2, ~30]
    std::uniform_int_distribution<int> udim(1, dmax);

    double w1 = 0, w2 = 0, w3 = 0;
    std::string w1w, w2w, w3w;
    for (int s = 0; s < sample_budget; ++s) {
        int d = udim(rng), n = udim(rng);
        double scale = std::pow(10.0, uscale(rng));
        Mat A = random_mat(rng, d, n, scale);
        double WA = W(A);
        double lo = pair.W.consts.c_W * A.norm() - WA;
        double hi = WA - pair.W.consts.C_W * (1.0 + A.norm());
        if (std::max(lo, hi) > w1) {
            w1 = std::max(lo, hi);
            w1w = "A=" + to_string(A);
        }
        Mat B = A + random_mat(rng, d, n, scale * 0.3);
        double dn = (A - B).norm();
        if (dn > 1e-10) {
            double rel = (std::abs(WA - W(B)) - pair.W.consts.L * dn) / dn;
            if (rel > w2) {
                w2 = rel;
                w2w = "A=" + to_string(A) + " B=" + to_string(B);
            }
        }
        if (A.norm() > 1e-8 && W.has_closed_recession()) {
            std::uniform_real_distribution<double> ut(0.0, 4.0);
            double t = std::pow(10.0, ut(rng));
            if (t * A.norm() >= 1.0) {
                double gap = std::abs(W.recession(A) - W(A * t) / t) -
                             pair.W.consts.c_rec * std::pow(A.norm(), 1.0 - pair.W.consts.alpha) /
                                 std::pow(t, pair.W.consts.alpha);
                if (gap > w3) {
                    w3 = gap;
                    w3w = "A=" + to_string(A) + " t=" + std::to_string(t);
                }
            }
        }
    }
    record(rep, "W:1 linear growth", w1, w1w, 1e-9);
    record(rep, "W:2 Lipschitz", w2, w2w, 1e-7);
    record(rep, "W:3 recession rate", w3, w3w, 1e-9);

    double p1 = 0, p2 = 0, p3 = 0, pl = 0;
    std::string p1w, p2w, p3w, plw;
    for (int s = 0; s < sample_budget; ++s) {
        int d = udim(rng), n = udim(rng);
        double scale = std::pow(10.0, uscale(rng));
        Vec lam = random_mat(rng, d, 1, scale);
        Vec nu = random_unit(rng, n);
        double v = psi(lam, nu);
        double lo = psi.c_psi * lam.norm() - v;
        double hi = v - psi.C_psi * lam.norm();
        if (std::max(lo, hi) > p1) {
            p1 = std::max(lo, hi);
            p1w = "lambda=" + to_string(lam);
        }
        std::uniform_real_distribution<double> ut(0.1, 10.0);
        double t = ut(rng);
        double hom = std::abs(psi(lam * t, nu) - t * v);
        double sym = std::abs(psi(-1.0 * lam, -1.0 * nu) - v);
        double q2 = std::max(hom / std::max(1.0, t * v), sym / std::max(1.0, v));
        if (q2 > p2) {
            p2 = q2;
            p2w = "lambda=" + to_string(lam) + " t=" + std::to_string(t);
        }
        Vec lam2 = random_mat(rng, d, 1, scale);
        double sub = psi(lam + lam2, nu) - (v + psi(lam2, nu));
        if (sub > p3) {
            p3 = sub;
            p3w = "l1=" + to_string(lam) + " l2=" + to_string(lam2);
        }
        double dl = (lam - lam2).norm();
        if (dl > 1e-10) {
            double lip = (std::abs(v - psi(lam2, nu)) - psi.C_psi * dl) / dl;
            if (lip > pl) {
                pl = lip;
                plw = "l1=" + to_string(lam) + " l2=" + to_string(lam2);
            }
        }
    }
    record(rep, "psi:1 norm bounds", p1, p1w, 1e-9);
    record(rep, "psi:2 homogeneity+symmetry", p2, p2w, 1e-9);
    record(rep, "psi:3 subadditivity", p3, p3w, 1e-9);
    record(rep, "psi Lipschitz in lambda", pl, plw, 1e-7);

    pair.validated = rep.all_pass();
    return rep;
}

BulkDensity make_bulk_abs() {
    BulkDensity w;
    w.kind = BulkKind::Abs;
    w.consts = {1.0, 1.0, 1.0, 0.5, 1.0, 1.0, 1.0};
    return w;
}

BulkDensity make_bulk_area() {
    BulkDensity w;
    w.kind = BulkKind::Area;
    w.consts = {1.0, 1.0, 1.0, 0.5, 1.0, 1.0, 1.0};
    return w;
}

BulkDensity make_bulk_double_well() {
    BulkDensity w;
    w.kind = BulkKind::DoubleWell;
    w.consts = {1.0, 3.0, 2.0, 0.5, 3.0, 1.0, 1.0};
    return w;
}

BulkDensity make_bulk_custom_grid(double lo, double hi, const std::vector<double>& values,
                                  const StructuralConstants& consts) {
    BulkDensity w;
    w.kind = BulkKind::CustomGrid;
    w.params = {lo, hi};
    w.params.insert(w.params.end(), values.begin(), values.end());
    w.consts = consts;
    return w;
}

SurfaceDensity make_surface_norm() {
    SurfaceDensity p;
    p.kind = SurfaceKind::Norm;
    p.c_psi = 1.0;
    p.C_psi = 1.0;
    return p;
}

SurfaceDensity make_surface_anisotropic(double kappa) {
    SurfaceDensity p;
    p.kind = SurfaceKind::AnisotropicNorm;
    p.params = {kappa};
    p.c_psi = 1.0;
    p.C_psi = 1.0 + std::max(0.0, kappa);
    return p;
}

SurfaceDensity make_surface_weighted(const std::vector<double>& weights) {
    SurfaceDensity p;
    p.kind = SurfaceKind::Custom;
    p.params = weights;
    double lo = 1e300, hi = 0;
    for (double w : weights) {
        lo = std::min(lo, std::abs(w));
        hi = std::max(hi, std::abs(w));
    }
    p.c_psi = lo;
    p.C_psi = hi;
    return p;
}

EnergyPair make_pair(BulkDensity W, SurfaceDensity psi, int validation_budget) {
    EnergyPair pair;
    pair.W = std::move(W);
    pair.psi = std::move(psi);
    validate_pair(pair, validation_budget);
    return pair;
}

}  // namespace msd

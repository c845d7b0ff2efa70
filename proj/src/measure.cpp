#include "msd/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace msd {

double cantor_cdf(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double f = 0.0, scale = 0.5;
    for (int i = 0; i < 64 && t > 0.0; ++i) {
        t *= 3.0;
        if (t >= 2.0) {
            f += scale;
            t -= 2.0;
        } else if (t >= 1.0) {
            return f + scale;  // landed in the middle-third gap
        }
        scale *= 0.5;
    }
    return f;
}

std::vector<double> cantor_level_points(int level) {
    std::vector<double> pts = {0.0};
    double w = 1.0;
    for (int l = 0; l < level; ++l) {
        w /= 3.0;
        std::vector<double> next;
        next.reserve(pts.size() * 2);
        for (double p : pts) {
            next.push_back(p);
            next.push_back(p + 2.0 * w);
        }
        pts.swap(next);
    }
    for (double& p : pts) p += w * 0.5;
    return pts;
}

namespace {

bool in_cantor_set(double t, int depth = 45) {
    if (t < 0.0 || t > 1.0) return false;
    for (int i = 0; i < depth; ++i) {
        if (t < 1e-15 || t > 1.0 - 1e-15) return true;
        t *= 3.0;
        if (t > 1.0 + 1e-12 && t < 2.0 - 1e-12) return false;
        if (t >= 2.0) t -= 2.0;
        else if (t > 1.0) t = 0.0;  // exactly a gap endpoint: in the set
    }
    return true;
}

}  // namespace

Measure1D Measure1D::dirac(double a, double b, double x, const Mat& w) {
    Measure1D m(a, b, w.rows, w.cols);
    m.atoms.push_back({x, w});
    m.normalize();
    return m;
}

Measure1D Measure1D::with_density(PiecewisePoly d) {
    Measure1D m(d.lo(), d.hi(), d.rows, d.cols);
    m.density = std::move(d);
    return m;
}

void Measure1D::normalize() {
    for (const auto& at : atoms) {
        if (at.x < a - 1e-12 || at.x > b + 1e-12)
            throw std::invalid_argument("Measure1D: atom outside the closed domain");
        if (!at.w.finite()) throw std::invalid_argument("Measure1D: non-finite atom weight");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
    std::vector<Atom> merged;
    for (const auto& at : atoms) {
        if (!merged.empty() && std::abs(at.x - merged.back().x) <= 1e-12)
            merged.back().w += at.w;
        else
            merged.push_back(at);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Atom& at) { return at.w.is_zero(); }),
                 merged.end());
    atoms.swap(merged);

    for (const auto& cc : cantor) {
        if (cc.scale <= 0) throw std::invalid_argument("Measure1D: Cantor carrier scale must be positive");
        if (cc.offset < a - 1e-12 || cc.offset + cc.scale > b + 1e-12)
            throw std::invalid_argument("Measure1D: Cantor carrier outside the domain");
    }
    for (size_t i = 0; i < cantor.size(); ++i)
        for (size_t j = i + 1; j < cantor.size(); ++j) {
            const auto& p = cantor[i];
            const auto& q = cantor[j];
            bool disjoint = p.offset + p.scale <= q.offset + 1e-14 ||
                            q.offset + q.scale <= p.offset + 1e-14;
            if (!disjoint) throw std::invalid_argument("Measure1D: overlapping Cantor carriers");
        }
    for (const auto& at : atoms)
        for (const auto& cc : cantor)
            if (at.x >= cc.offset && at.x <= cc.offset + cc.scale &&
                in_cantor_set((at.x - cc.offset) / cc.scale))
                throw std::invalid_argument("Measure1D: atom sits on a Cantor carrier");
    cantor.erase(std::remove_if(cantor.begin(), cantor.end(),
                                [](const CantorComponent& c) { return c.w.is_zero(); }),
                 cantor.end());
}

std::vector<Atom> Measure1D::interior_atoms() const {
    std::vector<Atom> out;
    for (const auto& at : atoms)
        if (interior(at.x)) out.push_back(at);
    return out;
}

std::optional<Mat> Measure1D::boundary_atom(double endpoint) const {
    for (const auto& at : atoms)
        if (std::abs(at.x - endpoint) <= 1e-12) return at.w;
    return std::nullopt;
}

Mat Measure1D::total() const {
    Mat t = density.integral();
    for (const auto& at : interior_atoms()) t += at.w;
    for (const auto& cc : cantor) t += cc.w;
    return t;
}

Measure1D& Measure1D::operator+=(const Measure1D& o) {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Measure1D: shape mismatch");
    if (std::abs(a - o.a) > 1e-12 || std::abs(b - o.b) > 1e-12)
        throw std::invalid_argument("Measure1D: domain mismatch");
    density = density + o.density;
    atoms.insert(atoms.end(), o.atoms.begin(), o.atoms.end());
    cantor.insert(cantor.end(), o.cantor.begin(), o.cantor.end());
    // Merge Cantor components with identical carriers.
    std::vector<CantorComponent> merged;
    for (const auto& cc : cantor) {
        bool found = false;
        for (auto& m : merged)
            if (std::abs(m.scale - cc.scale) <= 1e-12 && std::abs(m.offset - cc.offset) <= 1e-12) {
                m.w += cc.w;
                found = true;
                break;
            }
        if (!found) merged.push_back(cc);
    }
    cantor.swap(merged);
    normalize();
    return *this;
}

Measure1D Measure1D::scaled(double s) const {
    Measure1D m = *this;
    m.density = m.density.scaled(s);
    for (auto& at : m.atoms) at.w *= s;
    for (auto& cc : m.cantor) cc.w *= s;
    m.normalize();
    return m;
}

double total_variation(const Measure1D& mu) {
    double tv = 0.0;
    if (!mu.density_is_zero()) {
        std::vector<double> breaks = mu.density.bp;
        // |density| is smooth between sign changes; splitting there makes
        // the panel quadrature exact for scalar measures.
        auto kinks = scalar_kink_points(mu.density, {0.0});
        breaks.insert(breaks.end(), kinks.begin(), kinks.end());
        tv += quad_with_breaks([&](double x) { return mu.density.eval(x).norm(); }, mu.a, mu.b,
                               breaks, 1e-11);
    }
    for (const auto& at : mu.interior_atoms()) tv += at.w.norm();
    for (const auto& cc : mu.cantor) tv += cc.w.norm();
    return tv;
}

Measure1D restrict_measure(const Measure1D& mu, double x0, double x1) {
    if (!(x0 < x1) || x0 < mu.a - 1e-12 || x1 > mu.b + 1e-12)
        throw std::invalid_argument("restrict_measure: bad subinterval");
    Measure1D out(x0, x1, mu.rows, mu.cols);
    if (!mu.density_is_zero()) {
        PiecewisePoly d = mu.density.refined({x0, x1});
        PiecewisePoly clipped;
        clipped.rows = d.rows;
        clipped.cols = d.cols;
        for (size_t j = 0; j + 1 < d.bp.size(); ++j) {
            double lo = d.bp[j], hi = d.bp[j + 1];
            if (hi <= x0 + 1e-14 || lo >= x1 - 1e-14) continue;
            clipped.bp.push_back(lo);
            clipped.pieces.push_back(d.pieces[j]);
        }
        if (!clipped.pieces.empty()) {
            clipped.bp.push_back(std::min(x1, d.hi()));
            out.density = clipped;
        }
    }
    for (const auto& at : mu.atoms)
        if (at.x > x0 && at.x < x1) out.atoms.push_back(at);
    for (const auto& cc : mu.cantor) {
        double lo = cc.offset, hi = cc.offset + cc.scale;
        if (hi <= x0 || lo >= x1) continue;
        if (lo >= x0 && hi <= x1) {
            out.cantor.push_back(cc);
        } else {
            throw std::invalid_argument("restrict_measure: Cantor carrier straddles the cut");
        }
    }
    out.normalize();
    return out;
}

Vec BVFunction1D::eval(double x) const {
    const Measure1D& d = derivative;
    Vec v = left_value;
    if (!d.density_is_zero()) v += d.density.integral(d.a, std::min(std::max(x, d.a), d.b));
    for (const auto& at : d.interior_atoms()) {
        if (at.x < x - 1e-14)
            v += at.w;
        else if (std::abs(at.x - x) <= 1e-14)
            v += at.w * 0.5;  // precise representative at the jump
    }
    for (const auto& cc : d.cantor) v += cc.w * cantor_cdf((x - cc.offset) / cc.scale);
    return v;
}

Vec BVFunction1D::trace_right() const {
    Vec v = left_value + derivative.total();
    return v;
}

Measure1D derivative(const BVFunction1D& g) { return g.derivative; }

BVFunction1D primitive(const Measure1D& mu, const Vec& left_value) {
    if (mu.cols != 1) throw std::invalid_argument("primitive: measure must have N = 1");
    return BVFunction1D(left_value, mu);
}

GDecomposition decompose(const MSDPair& pair) {
    pair.check_shared_domain();
    const Measure1D& G = pair.G;
    const Measure1D& Dg = pair.g.derivative;
    GDecomposition out;
    out.G_a = Measure1D(G.a, G.b, G.rows, G.cols);
    out.G_j = out.G_a;
    out.G_c = out.G_a;
    out.G_s = out.G_a;

    out.G_a.density = G.density;

    auto jump_atoms = Dg.interior_atoms();
    for (const auto& at : G.interior_atoms()) {
        bool on_jump = false;
        for (const auto& j : jump_atoms)
            if (std::abs(j.x - at.x) <= 1e-12) {
                on_jump = true;
                break;
            }
        (on_jump ? out.G_j : out.G_s).atoms.push_back(at);
    }
    for (const auto& cc : G.cantor) {
        bool matched = false;
        for (const auto& gc : Dg.cantor) {
            if (std::abs(gc.scale - cc.scale) <= 1e-12 && std::abs(gc.offset - cc.offset) <= 1e-12) {
                matched = true;
                break;
            }
            bool disjoint = gc.offset + gc.scale <= cc.offset + 1e-14 ||
                            cc.offset + cc.scale <= gc.offset + 1e-14;
            if (!disjoint)
                throw std::invalid_argument(
                    "decompose: partially overlapping Cantor carriers are an unsupported representation");
        }
        (matched ? out.G_c : out.G_s).cantor.push_back(cc);
    }
    out.G_a.normalize();
    out.G_j.normalize();
    out.G_c.normalize();
    out.G_s.normalize();
    return out;
}

double goffman_serrin(const TransformFn& h, const Measure1D& mu, double quad_tol) {
    bool has_singular = !mu.interior_atoms().empty() || !mu.cantor.empty();
    if (has_singular && !h.has_recession())
        throw std::invalid_argument("goffman_serrin: integrand lacks a recession function");
    std::vector<double> breaks = mu.density.bp;
    auto kinks = scalar_kink_points(mu.density, {0.0, 1.0, -1.0});
    breaks.insert(breaks.end(), kinks.begin(), kinks.end());
    double val = quad_with_breaks([&](double x) { return h.h(mu.density.eval(x)); }, mu.a, mu.b,
                                  breaks, quad_tol);
    for (const auto& at : mu.interior_atoms()) val += h.h_inf(at.w);  // 1-homogeneity: h_inf(polar)*mass
    for (const auto& cc : mu.cantor) val += h.h_inf(cc.w);
    return val;
}

TransformFn area_transform() {
    TransformFn t;
    t.h = [](const Mat& m) { return std::sqrt(1.0 + m.dot(m)); };
    t.h_inf = [](const Mat& m) { return m.norm(); };
    return t;
}

namespace {

// Quadratic mollification kernel on [-eps, eps], unit mass.
struct Kernel {
    double eps;
    double c0() const { return 3.0 / (4.0 * eps); }
    double c2() const { return -3.0 / (4.0 * eps * eps * eps); }
};

struct Contribution {
    double lo, hi;
    std::vector<Poly> comp;  // polynomial in the global variable, per component
};

// Exact convolution of one polynomial density piece with the kernel.
void convolve_piece(const Kernel& K, double p, double q, const std::vector<Mat>& coeffs,
                    int ncomp, std::vector<Contribution>& out) {
    std::vector<double> cuts = {p - K.eps, p + K.eps, q - K.eps, q + K.eps};
    std::sort(cuts.begin(), cuts.end());
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        if (cuts[s + 1] - cuts[s] < 1e-15) continue;
        double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        bool low_moving = mid - K.eps > p;   // lower limit is x - eps, else p
        bool high_moving = mid + K.eps < q;  // upper limit is x + eps, else q
        Contribution c;
        c.lo = cuts[s];
        c.hi = cuts[s + 1];
        c.comp.resize(static_cast<size_t>(ncomp));
        for (int k = 0; k < ncomp; ++k) {
            // Density piece in the global variable y.
            std::vector<double> pc(coeffs.size());
            for (size_t j = 0; j < coeffs.size(); ++j) pc[j] = coeffs[j][k];
            Poly P = Poly(pc).shifted(-p);  // local var was y - p
            Poly Q0 = P.antiderivative();
            Poly Q1 = (Poly({0.0, 1.0}) * P).antiderivative();
            Poly Q2 = (Poly({0.0, 0.0, 1.0}) * P).antiderivative();
            // Antiderivative in y of P(y) K(x - y):
            //   R(y; x) = (c0 + c2 x^2) Q0(y) - 2 c2 x Q1(y) + c2 Q2(y)
            auto R_at_const = [&](double y) {
                Poly r = Poly({K.c0(), 0.0, K.c2()}) * Poly::constant(Q0(y));
                r = r + Poly({0.0, -2.0 * K.c2()}) * Poly::constant(Q1(y));
                return r + Poly::constant(K.c2() * Q2(y));
            };
            auto R_at_moving = [&](double off) {  // y = x + off
                Poly r = Poly({K.c0(), 0.0, K.c2()}) * Q0.shifted(off);
                r = r + Poly({0.0, -2.0 * K.c2()}) * Q1.shifted(off);
                return r + Q2.shifted(off) * K.c2();
            };
            Poly upper = high_moving ? R_at_moving(K.eps) : R_at_const(q);
            Poly lower = low_moving ? R_at_moving(-K.eps) : R_at_const(p);
            c.comp[static_cast<size_t>(k)] = upper - lower;
        }
        out.push_back(std::move(c));
    }
}

void convolve_atom(const Kernel& K, double x0, const Mat& w, int ncomp,
                   std::vector<Contribution>& out) {
    Contribution c;
    c.lo = x0 - K.eps;
    c.hi = x0 + K.eps;
    c.comp.resize(static_cast<size_t>(ncomp));
    // K(x - x0) = c0 + c2 (x - x0)^2
    Poly base = Poly({K.c0(), 0.0, K.c2()}).shifted(-x0);
    for (int k = 0; k < ncomp; ++k) c.comp[static_cast<size_t>(k)] = base * w[k];
    out.push_back(std::move(c));
}

}  // namespace

Measure1D mollify(const Measure1D& mu, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("mollify: eps must be positive");
    if (eps > (mu.b - mu.a) / 4.0 * (1.0 + 1e-12))
        throw std::invalid_argument("mollify: eps must not exceed a quarter of the domain length");
    Kernel K{eps};
    int ncomp = mu.rows * mu.cols;
    std::vector<Contribution> contribs;

    if (!mu.density_is_zero())
        for (size_t j = 0; j + 1 < mu.density.bp.size(); ++j)
            convolve_piece(K, mu.density.bp[j], mu.density.bp[j + 1], mu.density.pieces[j], ncomp,
                           contribs);
    for (const auto& at : mu.interior_atoms()) convolve_atom(K, at.x, at.w, ncomp, contribs);
    for (const auto& cc : mu.cantor) {
        // Replace the component by a midpoint cloud with spacing << eps.
        int level = 1;
        while (cc.scale * std::pow(3.0, -level) > eps * 0.25 && level < 14) ++level;
        auto pts = cantor_level_points(level);
        Mat wi = cc.w * (1.0 / static_cast<double>(pts.size()));
        for (double t : pts) convolve_atom(K, cc.offset + cc.scale * t, wi, ncomp, contribs);
    }

    // Union breakpoints, clipped to the domain.
    std::vector<double> cuts = {mu.a, mu.b};
    for (const auto& c : contribs) {
        if (c.lo > mu.a && c.lo < mu.b) cuts.push_back(c.lo);
        if (c.hi > mu.a && c.hi < mu.b) cuts.push_back(c.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double l, double r) { return std::abs(l - r) < 1e-14; }),
               cuts.end());

    PiecewisePoly d;
    d.rows = mu.rows;
    d.cols = mu.cols;
    d.bp = cuts;
    d.pieces.assign(cuts.size() - 1, std::vector<Mat>{Mat::zero(mu.rows, mu.cols)});
    for (const auto& c : contribs) {
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double lo = cuts[j], hi = cuts[j + 1];
            double mid = 0.5 * (lo + hi);
            if (mid <= c.lo || mid >= c.hi) continue;
            auto& piece = d.pieces[j];
            for (int k = 0; k < ncomp; ++k) {
                Poly local = c.comp[static_cast<size_t>(k)].shifted(lo);  // value at lo + t
                if (local.c.size() > piece.size())
                    piece.resize(local.c.size(), Mat::zero(mu.rows, mu.cols));
                for (size_t m = 0; m < local.c.size(); ++m) piece[m][k] += local.c[m];
            }
        }
    }
    Measure1D out(mu.a, mu.b, mu.rows, mu.cols);
    out.density = std::move(d);
    return out;
}

namespace {

struct BumpDictionary {
    struct Bump {
        double center, halfwidth;
    };
    std::vector<Bump> bumps;

    static BumpDictionary build(double a, double b, int size) {
        if (size < 8) throw std::invalid_argument("weakstar_gap: dictionary_size must be >= 8");
        BumpDictionary d;
        double len = b - a;
        for (int level = 0; static_cast<int>(d.bumps.size()) < size; ++level) {
            int n = 1 << level;
            double w = len / n;
            for (int i = 0; i < n && static_cast<int>(d.bumps.size()) < size; ++i)
                d.bumps.push_back({a + (i + 0.5) * w, w});
        }
        return d;
    }

    static double shape(double s) {
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    }

    double eval(size_t k, double x) const {
        return shape((x - bumps[k].center) / bumps[k].halfwidth);
    }
};

Mat integrate_against(const BumpDictionary& dict, size_t k, const Measure1D& mu) {
    const auto& bump = dict.bumps[k];
    double lo = std::max(mu.a, bump.center - bump.halfwidth);
    double hi = std::min(mu.b, bump.center + bump.halfwidth);
    Mat acc = Mat::zero(mu.rows, mu.cols);
    if (!mu.density_is_zero() && hi > lo) {
        for (int comp = 0; comp < mu.rows * mu.cols; ++comp) {
            acc[comp] += quad_with_breaks(
                [&](double x) { return dict.eval(k, x) * mu.density.eval(x)[comp]; }, lo, hi,
                mu.density.bp, 1e-10);
        }
    }
    for (const auto& at : mu.interior_atoms()) acc += at.w * dict.eval(k, at.x);
    for (const auto& cc : mu.cantor) {
        auto pts = cantor_level_points(13);
        double s = 0.0;
        for (double t : pts) s += dict.eval(k, cc.offset + cc.scale * t);
        acc += cc.w * (s / static_cast<double>(pts.size()));
    }
    return acc;
}

}  // namespace

double weakstar_gap(const Measure1D& mu, const Measure1D& nu, int dictionary_size) {
    if (std::abs(mu.a - nu.a) > 1e-12 || std::abs(mu.b - nu.b) > 1e-12)
        throw std::invalid_argument("weakstar_gap: domain mismatch");
    auto dict = BumpDictionary::build(mu.a, mu.b, dictionary_size);
    double gap = 0.0;
    for (size_t k = 0; k < dict.bumps.size(); ++k) {
        Mat d = integrate_against(dict, k, mu) - integrate_against(dict, k, nu);
        gap = std::max(gap, d.norm());
    }
    return gap;
}

double weakstar_gap_fn(const std::function<Vec(double)>& f, const std::function<Vec(double)>& g,
                       double a, double b, int dim, int dictionary_size) {
    auto dict = BumpDictionary::build(a, b, dictionary_size);
    const int n = 4096;
    double h = (b - a) / n;
    double gap = 0.0;
    for (size_t k = 0; k < dict.bumps.size(); ++k) {
        Mat acc = Mat::zero(dim, 1);
        for (int i = 0; i < n; ++i) {
            double x = a + (i + 0.5) * h;
            double phi = dict.eval(k, x);
            if (phi == 0.0) continue;
            acc += (f(x) - g(x)) * (phi * h);
        }
        gap = std::max(gap, acc.norm());
    }
    return gap;
}

double area_strict_gap(const Measure1D& mu, const Measure1D& nu, int dictionary_size) {
    TransformFn a = area_transform();
    double area_mu = goffman_serrin(a, mu);
    double area_nu = goffman_serrin(a, nu);
    return std::abs(area_mu - area_nu) + weakstar_gap(mu, nu, dictionary_size);
}

}  // namespace msd

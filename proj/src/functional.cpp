#include "msd/functional.hpp"

#include <algorithm>
#include <cmath>

namespace msd {

namespace {

void require_sbv(const BVFunction1D& u, const char* who) {
    if (!u.is_sbv())
        throw std::invalid_argument(std::string(who) + ": function has a Cantor part");
}

// Integrate f(density1(x), density2(x)) with an exact shortcut when both
// densities are piecewise constant on the merged grid.
double integrate_pair(const PiecewisePoly& p, const PiecewisePoly& q,
                      const std::function<double(double, double)>& f, double a, double b,
                      double tol) {
    std::vector<double> cuts = {a, b};
    for (double x : p.bp)
        if (x > a && x < b) cuts.push_back(x);
    for (double x : q.bp)
        if (x > a && x < b) cuts.push_back(x);
    // The relaxed bulk density is smooth away from the kinks of the
    // envelope (arguments at 0, +-1) and of the jump cost (p = q).
    for (double x : scalar_kink_points(p, {0.0, 1.0, -1.0}))
        if (x > a && x < b) cuts.push_back(x);
    for (double x : scalar_kink_points(q, {0.0, 1.0, -1.0}))
        if (x > a && x < b) cuts.push_back(x);
    if (p.rows * p.cols == 1 && q.rows * q.cols == 1) {
        PiecewisePoly diff = p + q.scaled(-1.0);
        for (double x : scalar_kink_points(diff, {0.0}))
            if (x > a && x < b) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double l, double r) { return std::abs(l - r) < 1e-14; }),
               cuts.end());
    auto piece_constant = [](const PiecewisePoly& pp, double mid) {
        int j = pp.piece_index(mid);
        return pp.pieces[static_cast<size_t>(j)].size() <= 1;
    };
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo < 1e-15) continue;
        double mid = 0.5 * (lo + hi);
        if (piece_constant(p, mid) && piece_constant(q, mid)) {
            acc += f(p.eval_scalar(mid), q.eval_scalar(mid)) * (hi - lo);
        } else {
            acc += adaptive_quad([&](double x) { return f(p.eval_scalar(x), q.eval_scalar(x)); },
                                 lo, hi, tol);
        }
    }
    return acc;
}

double bulk_integral(const BVFunction1D& u, const BulkDensity& W, bool recession,
                     double tol) {
    const Measure1D& d = u.derivative;
    if (d.density_is_zero()) {
        Mat z = Mat::zero(d.rows, 1);
        double v = recession ? W.recession(z) : W(z);
        return v * (d.b - d.a);
    }
    std::vector<double> cuts = d.density.bp;
    auto kinks = scalar_kink_points(d.density, {0.0, 1.0, -1.0});
    cuts.insert(cuts.end(), kinks.begin(), kinks.end());
    return quad_with_breaks(
        [&](double x) {
            Mat g = d.density.eval(x);
            return recession ? W.recession(g) : W(g);
        },
        d.a, d.b, cuts, tol);
}

double surface_sum(const BVFunction1D& u, const SurfaceDensity& psi) {
    Vec nu = vec1(1.0);
    double s = 0.0;
    for (const auto& at : u.jumps()) s += psi(at.w, nu);
    return s;
}

}  // namespace

double eval_E(const BVFunction1D& u, const EnergyPair& pair, double quad_tol) {
    pair.require_validated();
    require_sbv(u, "eval_E");
    return bulk_integral(u, pair.W, false, quad_tol) + surface_sum(u, pair.psi);
}

double eval_E_infty(const BVFunction1D& u, const EnergyPair& pair, double quad_tol) {
    pair.require_validated();
    require_sbv(u, "eval_E_infty");
    return bulk_integral(u, pair.W, true, quad_tol) + surface_sum(u, pair.psi);
}

JBreakdown eval_J_fourterm(const MSDPair& pair, const DensityOracle1d& oracle, double quad_tol) {
    pair.check_shared_domain();
    if (pair.g.dim() != 1 || pair.G.rows != 1 || pair.G.cols != 1)
        throw std::invalid_argument("eval_J_fourterm: evaluation requires d = N = 1");
    GDecomposition dec = decompose(pair);
    JBreakdown out;

    out.bulk_term = integrate_pair(pair.g.derivative.density, dec.G_a.density,
                                   [&](double gg, double ga) { return oracle.H(gg, ga); },
                                   pair.G.a, pair.G.b, quad_tol);

    for (const auto& jump : pair.g.jumps()) {
        double w = 0.0;  // density of G_j against the counting measure on S_g
        for (const auto& at : dec.G_j.atoms)
            if (std::abs(at.x - jump.x) <= 1e-12) w = at.w[0];
        out.jump_term += oracle.hj(jump.w[0], w, 1.0);
    }

    for (const auto& gc : pair.g.derivative.cantor) {
        double w = 0.0;
        for (const auto& cc : dec.G_c.cantor)
            if (std::abs(cc.scale - gc.scale) <= 1e-12 && std::abs(cc.offset - gc.offset) <= 1e-12)
                w = cc.w[0];
        // Constant polar per component: h^c(polar, density) |D^c g| equals
        // h^c(weight, G-weight) by 1-homogeneity.
        out.cantor_term += oracle.hc(gc.w[0], w);
    }

    for (const auto& at : dec.G_s.atoms) out.gsg_term += oracle.hc_rest(at.w[0]);
    for (const auto& cc : dec.G_s.cantor) out.gsg_term += oracle.hc_rest(cc.w[0]);

    out.total = out.bulk_term + out.jump_term + out.cantor_term + out.gsg_term;
    return out;
}

double eval_J_measure(const MSDPair& pair, const DensityOracle1d& oracle, double quad_tol) {
    pair.check_shared_domain();
    if (pair.g.dim() != 1 || pair.G.rows != 1 || pair.G.cols != 1)
        throw std::invalid_argument("eval_J_measure: evaluation requires d = N = 1");
    const Measure1D& Dg = pair.g.derivative;
    const Measure1D& G = pair.G;

    double total = integrate_pair(Dg.density, G.density,
                                  [&](double gg, double ga) { return oracle.H(gg, ga); }, G.a, G.b,
                                  quad_tol);

    // Joint atomic sites.
    std::vector<double> sites;
    for (const auto& at : Dg.interior_atoms()) sites.push_back(at.x);
    for (const auto& at : G.interior_atoms()) sites.push_back(at.x);
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end(),
                            [](double l, double r) { return std::abs(l - r) <= 1e-12; }),
                sites.end());
    for (double x : sites) {
        double P = 0.0, Q = 0.0;
        for (const auto& at : Dg.interior_atoms())
            if (std::abs(at.x - x) <= 1e-12) P = at.w[0];
        for (const auto& at : G.interior_atoms())
            if (std::abs(at.x - x) <= 1e-12) Q = at.w[0];
        total += oracle.hinf_joint(P, Q);
    }

    // Joint Cantor carriers.
    struct Carrier {
        double scale, offset;
        double P = 0.0, Q = 0.0;
    };
    std::vector<Carrier> carriers;
    auto find = [&](double s, double o) -> Carrier& {
        for (auto& c : carriers)
            if (std::abs(c.scale - s) <= 1e-12 && std::abs(c.offset - o) <= 1e-12) return c;
        carriers.push_back({s, o, 0.0, 0.0});
        return carriers.back();
    };
    for (const auto& cc : Dg.cantor) find(cc.scale, cc.offset).P = cc.w[0];
    for (const auto& cc : G.cantor) find(cc.scale, cc.offset).Q = cc.w[0];
    for (const auto& c : carriers) total += oracle.hinf_joint(c.P, c.Q);

    return total;
}

double eval_J_dirichlet(const MSDPair& pair, const DensityOracle1d& oracle,
                        const DirichletSpec& spec, double quad_tol) {
    double total = eval_J_measure(pair, oracle, quad_tol);
    auto endpoint_term = [&](bool active, const std::optional<Vec>& u0, double x, double nu) {
        if (!active) return 0.0;
        if (!u0) throw std::invalid_argument("eval_J_dirichlet: missing trace value on Gamma");
        Vec trace = nu < 0 ? pair.g.trace_left() : pair.g.trace_right();
        double P = (trace[0] - (*u0)[0]) * nu;
        auto w = pair.G.boundary_atom(x);
        double Q = w ? (*w)[0] : 0.0;
        if (P == 0.0 && Q == 0.0) return 0.0;
        return oracle.hinf_joint(P, Q);
    };
    total += endpoint_term(spec.gamma_left, spec.u0_left, pair.G.a, -1.0);
    total += endpoint_term(spec.gamma_right, spec.u0_right, pair.G.b, +1.0);
    return total;
}

double eval_E_R(const BVFunction1D& g, const Measure1D& G, double R, const EnergyPair& pair,
                double quad_tol) {
    if (!G.interior_atoms().empty() || !G.cantor.empty())
        throw std::invalid_argument("eval_E_R: G has singular parts");
    if (R < 0) throw std::invalid_argument("eval_E_R: R must be nonnegative");
    double e = eval_E(g, pair, quad_tol);
    if (R == 0.0) return e;
    std::vector<double> cuts = g.derivative.density.bp;
    cuts.insert(cuts.end(), G.density.bp.begin(), G.density.bp.end());
    if (G.rows * G.cols == 1) {
        PiecewisePoly diff = g.derivative.density + G.density.scaled(-1.0);
        auto kinks = scalar_kink_points(diff, {0.0});
        cuts.insert(cuts.end(), kinks.begin(), kinks.end());
    }
    double pen = quad_with_breaks(
        [&](double x) { return (g.derivative.density.eval(x) - G.density.eval(x)).norm(); }, G.a,
        G.b, cuts, quad_tol);
    return e + R * pen;
}

double threshold_R0(const EnergyPair& pair, int N, double c1) {
    if (N != 1) throw std::invalid_argument("threshold_R0: only N = 1 is supported");
    return pair.W.consts.L + pair.psi.C_psi * c1;
}

}  // namespace msd

#include "msd/verify.hpp"

#include <cmath>
#include <sstream>

#include "msd/approx.hpp"
#include "msd/cell.hpp"
#include "msd/energy.hpp"
#include "msd/functional.hpp"
#include "msd/measure.hpp"
#include "msd/random_msd.hpp"

namespace msd {

namespace {

struct Suite {
    SuiteReport rep;
    void add(const std::string& family, const std::string& name, bool pass, double value,
             const std::string& note = "", bool report_only = false) {
        rep.rows.push_back({family, name, pass, report_only, value, note});
    }
};

std::vector<EnergyPair> catalog_pairs() {
    return {make_pair(make_bulk_abs(), make_surface_norm()),
            make_pair(make_bulk_area(), make_surface_norm()),
            make_pair(make_bulk_double_well(), make_surface_norm()),
            make_pair(make_bulk_abs(), make_surface_anisotropic(0.5))};
}

void energy_suite(Suite& s, unsigned seed, int budget) {
    for (auto& pair : catalog_pairs()) {
        ValidationReport rep = validate_pair(pair, 10000, seed);
        double worst = 0.0;
        for (const auto& c : rep.checks) worst = std::max(worst, c.worst);
        s.add("validation", pair.W.kind_name() + "/" + pair.psi.kind_name(), rep.all_pass(), worst);
    }
    // Recession is positively 1-homogeneous on catalog kinds.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (auto kind : {make_bulk_abs(), make_bulk_area(), make_bulk_double_well()}) {
        for (int i = 0; i < budget; ++i) {
            Mat A = Mat::scalar(u(rng));
            if (A.norm() < 1e-6) continue;
            double base = kind.recession(A);
            for (double t : {0.5, 2.0, 10.0}) {
                double gap = std::abs(kind.recession(A * t) - t * base) / std::max(1.0, t * base);
                worst = std::max(worst, gap);
            }
        }
    }
    s.add("homogeneity", "recession_bulk", worst <= 1e-9, worst);

    // Grid envelope is stable under refinement and matches hand values.
    BulkDensity dw = make_bulk_double_well();
    PLF env = convex_envelope_1d(dw, -4.0, 4.0, 1.0 / 64);
    double e1 = std::abs(env(0.0) - 1.0);
    double e2 = std::abs(env(2.0) - 3.0);
    double e3 = std::abs(env(-0.5) - 1.0);
    s.add("envelope", "double-well grid transform", std::max({e1, e2, e3}) <= 1e-9,
          std::max({e1, e2, e3}));
    PLF envf = convex_envelope_1d(dw, -4.0, 4.0, 1.0 / 128);
    double refine_gap = 0.0;
    for (double x = -4.0; x <= 4.0; x += 0.01) refine_gap = std::max(refine_gap, std::abs(env(x) - envf(x)));
    s.add("envelope", "refinement stability", refine_gap <= 1e-6, refine_gap);
}

bool measures_equal(const Measure1D& x, const Measure1D& y, double tol) {
    if (x.atoms.size() != y.atoms.size() || x.cantor.size() != y.cantor.size()) return false;
    for (size_t i = 0; i < x.atoms.size(); ++i)
        if (std::abs(x.atoms[i].x - y.atoms[i].x) > tol ||
            (x.atoms[i].w - y.atoms[i].w).norm() > tol)
            return false;
    for (size_t i = 0; i < x.cantor.size(); ++i)
        if (std::abs(x.cantor[i].scale - y.cantor[i].scale) > tol ||
            std::abs(x.cantor[i].offset - y.cantor[i].offset) > tol ||
            (x.cantor[i].w - y.cantor[i].w).norm() > tol)
            return false;
    for (double t = 0.0; t <= 1.0; t += 0.0625) {
        double xx = x.a + (x.b - x.a) * t;
        if ((x.density.eval(xx) - y.density.eval(xx)).norm() > tol) return false;
    }
    return true;
}

void measure_suite(Suite& s, unsigned seed, int budget) {
    PairGenerator gen(seed);
    int n = std::max(10, budget / 10);
    double worst_sum = 0.0, worst_tv = 0.0, worst_gs = 0.0, worst_rt = 0.0, worst_mass = 0.0;
    bool sum_ok = true;
    TransformFn area = area_transform();
    for (int i = 0; i < n; ++i) {
        MSDPair pair = gen.next();
        GDecomposition dec = decompose(pair);
        if (!measures_equal(dec.sum(), pair.G, 1e-10)) sum_ok = false;

        double tv = total_variation(pair.G);
        double parts = total_variation(dec.G_a) + total_variation(dec.G_j) +
                       total_variation(dec.G_c) + total_variation(dec.G_s);
        worst_tv = std::max(worst_tv, std::abs(tv - parts));
        // Additivity over a split avoiding atoms and carriers.
        double cut = 0.0;
        bool found = false;
        for (double c = -0.5; c <= 0.5 && !found; c += 0.031) {
            bool bad = false;
            for (const auto& at : pair.G.atoms)
                if (std::abs(at.x - c) < 1e-3) bad = true;
            for (const auto& cc : pair.G.cantor)
                if (c > cc.offset - 1e-3 && c < cc.offset + cc.scale + 1e-3) bad = true;
            if (!bad) {
                cut = c;
                found = true;
            }
        }
        if (found) {
            double lr = total_variation(restrict_measure(pair.G, pair.G.a, cut)) +
                        total_variation(restrict_measure(pair.G, cut, pair.G.b));
            worst_tv = std::max(worst_tv, std::abs(tv - lr));
        }

        // Nonnegative singular contribution in the nonlinear transform.
        double full = goffman_serrin(area, pair.G);
        Measure1D ac(pair.G.a, pair.G.b, 1, 1);
        ac.density = pair.G.density;
        double ac_only = goffman_serrin(area, ac);
        worst_gs = std::max(worst_gs, ac_only - full);

        // derivative(primitive(mu)) returns mu.
        BVFunction1D prim = primitive(pair.G, Mat::scalar(0.0));
        if (!measures_equal(derivative(prim), pair.G, 0.0)) worst_rt = 1.0;

        // Mass preservation under mollification (support well inside).
        Measure1D inner(pair.G.a, pair.G.b, 1, 1);
        for (const auto& at : pair.G.interior_atoms())
            if (at.x > -0.7 && at.x < 0.7) inner.atoms.push_back(at);
        inner.normalize();
        if (!inner.atoms.empty()) {
            Measure1D mol = mollify(inner, 0.05);
            worst_mass = std::max(worst_mass, (mol.total() - inner.total()).norm());
        }
        worst_sum = std::max(worst_sum, (dec.sum().total() - pair.G.total()).norm());
    }
    s.add("decomposition-sum", "four parts reassemble G", sum_ok && worst_sum <= 1e-10, worst_sum);
    s.add("additivity", "total variation over parts and splits", worst_tv <= 1e-7, worst_tv);
    s.add("goffman-serrin", "singular term nonnegative", worst_gs <= 1e-9, worst_gs);
    s.add("roundtrip", "derivative of primitive", worst_rt == 0.0, worst_rt);
    s.add("mollify-mass", "mass preserved away from boundary", worst_mass <= 1e-9, worst_mass);
}

void cell_suite(Suite& s, unsigned seed, int budget) {
    auto abs_pair = make_pair(make_bulk_abs(), make_surface_norm());
    auto dw_pair = make_pair(make_bulk_double_well(), make_surface_norm());
    auto area_pair = make_pair(make_bulk_area(), make_surface_norm());
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    DiscParams disc;

    double sandwich_worst = 0.0;
    for (int i = 0; i < budget; ++i) {
        const EnergyPair& pair = (i % 3 == 0) ? abs_pair : (i % 3 == 1 ? dw_pair : area_pair);
        CellProblem p(pair, Mat::scalar(u(rng)), Mat::scalar(u(rng)),
                      i % 5 == 0 ? CellMode::Recession : CellMode::Bulk);
        DensityEstimate est = solve_H(p, disc);
        sandwich_worst = std::max(sandwich_worst, est.lower - est.upper);
    }
    for (int i = 0; i < budget / 4; ++i) {
        Mat A = mat22(u(rng), u(rng), u(rng), u(rng));
        Mat B = mat22(u(rng), u(rng), u(rng), u(rng));
        CellProblem p(abs_pair, A, B, CellMode::Bulk);
        DensityEstimate est = solve_H(p, disc);
        sandwich_worst = std::max(sandwich_worst, est.lower - est.upper);
    }
    s.add("sandwich", "lower_bound_H <= solve_H.upper", sandwich_worst <= 1e-12, sandwich_worst);

    double hom_worst = 0.0;
    for (int i = 0; i < std::max(10, budget / 10); ++i) {
        Mat A = Mat::scalar(u(rng)), B = Mat::scalar(u(rng));
        if (A.is_zero(1e-6) && B.is_zero(1e-6)) continue;
        double base = estimate_hc(abs_pair, A, B).value;
        for (double t : {2.0, 5.0}) {
            double v = estimate_hc(abs_pair, A * t, B * t).value;
            hom_worst = std::max(hom_worst, std::abs(v - t * base) / std::max(1.0, t * base));
        }
    }
    s.add("homogeneity", "estimate_hc 1-homogeneous", hom_worst <= 1e-6, hom_worst);

    double id_worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        double lam = u(rng), Lam = u(rng);
        double nu = (i % 2 == 0) ? 1.0 : -1.0;
        double hj = estimate_hj(abs_pair, vec1(lam), Mat::scalar(Lam), vec1(nu)).value;
        double hcv = estimate_hc(abs_pair, outer(vec1(lam), vec1(nu)), Mat::scalar(Lam)).value;
        id_worst = std::max(id_worst, std::abs(hj - hcv));
    }
    s.add("identity-103", "h^j equals h^c on rank-one data", id_worst <= 1e-9, id_worst);

    double oracle_worst = 0.0;
    for (const EnergyPair* pair : {&abs_pair, &dw_pair}) {
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) {
                double A = -2.0 + 0.5 * i, B = -2.0 + 0.5 * j;
                CellProblem p(*pair, Mat::scalar(A), Mat::scalar(B), CellMode::Bulk);
                double v = solve_H(p, disc).value;
                oracle_worst = std::max(oracle_worst, std::abs(v - oracle_H_1d(*pair, A, B)));
            }
    }
    s.add("oracle-equivalence", "solver matches 1-D oracle on 9x9 grid", oracle_worst <= 1e-3,
          oracle_worst);

    // Tight sandwich at an interior bulk minimizer with norm-type psi.
    double p63_worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        CellProblem p(dw_pair, Mat::scalar(1.0 + t), Mat::scalar(1.0), CellMode::Bulk);
        DensityEstimate est = solve_H(p, disc);
        p63_worst = std::max(p63_worst, est.upper - lower_bound_H(p));
    }
    s.add("sandwich", "tight at interior minimizer", p63_worst <= 1e-3, p63_worst);

    QccReport q1 = qcc_spot_test(abs_pair, Mat::scalar(0.7), Mat::scalar(-0.3), budget, seed);
    s.add("qcc", "1-D abs/norm spot test", q1.violations == 0, q1.worst_violation);
    QccReport q2 = qcc_spot_test(dw_pair, Mat::scalar(0.5), Mat::scalar(0.2), budget, seed + 1);
    s.add("qcc", "1-D double-well/norm spot test", q2.violations == 0, q2.worst_violation);
    QccReport q3 = qcc_spot_test(abs_pair, mat22(0.5, -0.2, 0.1, 0.3), mat22(0.0, 0.4, -0.1, 0.2),
                                 std::max(8, budget / 8), seed + 2);
    s.add("qcc", "2-D abs/norm spot test", q3.violations == 0, q3.worst_violation);

    RateReport rr = recession_rate_check(area_pair, Mat::scalar(1.0), Mat::scalar(1.0),
                                         {10.0, 100.0, 1000.0});
    s.add("recession-rate", "area bulk density", rr.pass && std::isfinite(rr.fitted_C), rr.fitted_C);

    // Sampled Lipschitz quotient (informational).
    double lip = 0.0;
    for (int i = 0; i < budget; ++i) {
        double A1 = u(rng), B1 = u(rng), A2 = A1 + u(rng) * 0.1, B2 = B1 + u(rng) * 0.1;
        double dd = std::abs(A1 - A2) + std::abs(B1 - B2);
        if (dd < 1e-9) continue;
        lip = std::max(lip, std::abs(oracle_H_1d(abs_pair, A1, B1) - oracle_H_1d(abs_pair, A2, B2)) / dd);
    }
    s.add("lipschitz-report", "sampled H quotient (abs/norm)", true, lip,
          "reference L + C_psi = 2", true);
}

void functional_suite(Suite& s, unsigned seed, int budget) {
    auto pair = make_pair(make_bulk_abs(), make_surface_norm());
    DensityOracle1d oracle(pair);
    PairGenerator gen(seed + 2);

    int n = std::min(100, budget);
    double form_worst = 0.0, add_worst = 0.0;
    for (int i = 0; i < n; ++i) {
        MSDPair p = gen.next();
        JBreakdown four = eval_J_fourterm(p, oracle);
        double meas = eval_J_measure(p, oracle);
        form_worst = std::max(form_worst, std::abs(four.total - meas));
        // Additivity across a split that avoids atoms and carriers.
        double cut = 0.0;
        bool found = false;
        for (double c = -0.4; c <= 0.4 && !found; c += 0.037) {
            bool bad = false;
            for (const auto& at : p.G.atoms)
                if (std::abs(at.x - c) < 2e-2) bad = true;
            for (const auto& at : p.g.derivative.atoms)
                if (std::abs(at.x - c) < 2e-2) bad = true;
            for (const auto& cc : p.G.cantor)
                if (c > cc.offset - 2e-2 && c < cc.offset + cc.scale + 2e-2) bad = true;
            for (const auto& cc : p.g.derivative.cantor)
                if (c > cc.offset - 2e-2 && c < cc.offset + cc.scale + 2e-2) bad = true;
            if (!bad) {
                cut = c;
                found = true;
            }
        }
        if (found) {
            auto restrict_pair = [&](double lo, double hi) {
                Measure1D dg = restrict_measure(p.g.derivative, lo, hi);
                Measure1D GG = restrict_measure(p.G, lo, hi);
                BVFunction1D gg(sample_bv(p.g, {lo + 1e-9})[0], dg);
                return MSDPair{gg, GG};
            };
            double whole = four.total;
            double split = eval_J_fourterm(restrict_pair(p.G.a, cut), oracle).total +
                           eval_J_fourterm(restrict_pair(cut, p.G.b), oracle).total;
            add_worst = std::max(add_worst, std::abs(whole - split));
        }
    }
    s.add("form-equivalence", "four-term vs measure form", form_worst <= 1e-6, form_worst);
    s.add("additivity", "J over subintervals", add_worst <= 1e-6, add_worst);

    // Relaxation cannot exceed the unrelaxed energy on SBV states.
    PairGenerator gen2(seed + 3);
    gen2.g_sbv_only = true;
    gen2.G_density_only = true;
    double cons_worst = 0.0;
    for (int i = 0; i < std::max(10, budget / 10); ++i) {
        MSDPair p = gen2.next();
        // G := grad g dx
        Measure1D G(p.G.a, p.G.b, 1, 1);
        G.density = p.g.derivative.density;
        MSDPair q{p.g, G};
        double J = eval_J_fourterm(q, oracle).total;
        double E = eval_E(p.g, pair);
        cons_worst = std::max(cons_worst, J - E);
    }
    s.add("consistency", "J <= E for classical states", cons_worst <= 1e-9, cons_worst);

    // Norm-discontinuity of the singular-rest term.
    bool inst_ok = true;
    Measure1D delta0 = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    for (int k = 1; k <= 16; ++k) {
        Measure1D dgk = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0 / k));
        MSDPair pk{BVFunction1D(Mat::scalar(0.0), dgk), delta0};
        JBreakdown b = eval_J_fourterm(pk, oracle);
        if (b.gsg_term != 0.0) inst_ok = false;
        if (total_variation(decompose(pk).G_s) != 0.0) inst_ok = false;
    }
    MSDPair plim{BVFunction1D(Mat::scalar(0.0), Measure1D(-1.0, 1.0, 1, 1)), delta0};
    JBreakdown blim = eval_J_fourterm(plim, oracle);
    if (blim.gsg_term != 1.0) inst_ok = false;
    s.add("instability", "singular-rest term jumps at the limit", inst_ok, blim.gsg_term);

    // Empirical area-strict continuity: mollifying a pair whose singular
    // parts are carried by Dg leaves J converging to its exact value. (The
    // singular-rest term is deliberately excluded: its density at zero
    // Dg-polar is pinned below the joint recession, so pairs with G_s mass
    // are not area-strict continuous by construction.)
    {
        std::vector<MSDPair> cont_pairs;
        cont_pairs.push_back({BVFunction1D(Mat::scalar(0.0),
                                           Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0))),
                              Measure1D(-1.0, 1.0, 1, 1)});
        {
            Measure1D dc(-1.0, 1.0, 1, 1);
            dc.cantor.push_back({0.5, -0.25, Mat::scalar(1.0)});
            dc.normalize();
            Measure1D Gc(-1.0, 1.0, 1, 1);
            Gc.density = PiecewisePoly::constant(-1.0, 1.0, Mat::scalar(0.4));
            cont_pairs.push_back({BVFunction1D(Mat::scalar(0.0), dc), Gc});
        }
        double worst_final = 0.0;
        bool ok = true;
        for (const auto& p : cont_pairs) {
            double J = eval_J_fourterm(p, oracle).total;
            double first = -1.0, prev = 1e300, last = 0.0;
            for (int k = 2; k <= 9; ++k) {
                double eps = std::pow(3.0, -k);
                Measure1D dg_eps = mollify(p.g.derivative, eps);
                Measure1D G_eps = p.G.density_is_zero() && p.G.interior_atoms().empty() &&
                                          p.G.cantor.empty()
                                      ? p.G
                                      : mollify(p.G, eps);
                MSDPair smooth{BVFunction1D(p.g.left_value, dg_eps), G_eps};
                last = std::abs(eval_J_fourterm(smooth, oracle).total - J);
                if (last > prev * 1.05 + 1e-9) ok = false;
                if (first < 0) first = last;
                prev = last;
            }
            // Smoothed Cantor mass against a density deviates like (2/3)^k.
            if (last > std::max(0.1 * first, 1e-9)) ok = false;
            worst_final = std::max(worst_final, last);
        }
        s.add("area-strict-continuity", "J along mollified pairs", ok, worst_final);
    }

    // Penalized functional dominates the corrected competitor energy.
    PairGenerator gen3(seed + 4);
    gen3.g_sbv_only = true;
    gen3.G_density_only = true;
    double R = threshold_R0(pair) + 1.0;
    double pen_worst = -1e300;
    bool pen_ok = true;
    for (int i = 0; i < 50; ++i) {
        MSDPair p = gen3.next();
        double ER = eval_E_R(p.g, p.G, R, pair);
        BVFunction1D v = sbv_corrector(p.g, p.G, 32768);
        BVFunction1D comp(p.g.left_value + v.left_value, [&] {
            Measure1D d = p.g.derivative;
            d += v.derivative;
            return d;
        }());
        double Ecorr = eval_E(comp, pair);
        MSDPair limit{p.g, p.G};
        double J = eval_J_fourterm(limit, oracle).total;
        if (ER < Ecorr - 1e-9) pen_ok = false;
        if (Ecorr < J - 1e-3) pen_ok = false;
        if (ER < J - 1e-3) pen_ok = false;
        pen_worst = std::max(pen_worst, std::max(Ecorr - ER, J - 1e-3 - Ecorr));
    }
    s.add("penalty-ordering", "E_R >= E(corrected) >= J - tol", pen_ok, pen_worst);
}

void approx_suite(Suite& s, unsigned seed, int budget) {
    auto pair = make_pair(make_bulk_abs(), make_surface_norm());
    DensityOracle1d oracle(pair);
    (void)budget;

    // Representation identity: grad u_n is exactly the smoothed density.
    PairGenerator gen(seed + 5);
    bool grad_ok = true;
    for (int i = 0; i < 5; ++i) {
        MSDPair p = gen.next();
        int n = 64;
        int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        BVFunction1D un = approximate_msd(p, n);
        Measure1D Gk = smooth_to_measure(p.G, k);
        for (double t = 0.05; t < 1.0; t += 0.1) {
            double x = p.G.a + (p.G.b - p.G.a) * t;
            if ((un.derivative.density.eval(x) - Gk.density.eval(x)).norm() > 1e-10) grad_ok = false;
        }
    }
    s.add("approx-construction", "grad u_n equals smoothed measure", grad_ok, grad_ok ? 0.0 : 1.0);

    // Weak-star gaps shrink along doublings beyond n = 8 (10% slack).
    std::vector<MSDPair> pairs;
    Measure1D delta0 = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    pairs.push_back({BVFunction1D(Mat::scalar(0.0), Measure1D(-1.0, 1.0, 1, 1)), delta0});
    {
        Measure1D dg(0.0, 1.0, 1, 1);
        dg.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
        dg.normalize();
        pairs.push_back({BVFunction1D(Mat::scalar(0.0), dg), Measure1D(0.0, 1.0, 1, 1)});
    }
    PairGenerator gen2(seed + 6);
    for (int i = 0; i < 3; ++i) pairs.push_back(gen2.next());

    bool gaps_ok = true, bounds_ok = true, energy_ok = true;
    double worst_slack = 0.0;
    std::vector<int> ns = {8, 16, 32, 64, 128, 256, 512, 1024};
    auto window_max = [](const std::vector<double>& h) {
        double m = 0.0;
        size_t from = h.size() > 3 ? h.size() - 3 : 0;
        for (size_t i = from; i < h.size(); ++i) m = std::max(m, h[i]);
        return m;
    };
    for (const auto& p : pairs) {
        std::vector<double> hist_g, hist_G;
        auto xs = midpoint_grid(p.G.a, p.G.b, 4096);
        auto gsamp = sample_bv(p.g, xs);
        for (int n : ns) {
            BVFunction1D un = approximate_msd(p, n);
            double gg = weakstar_gap_sampled(sample_bv(un, xs), gsamp, p.G.a, p.G.b);
            double gG = weakstar_gap(Measure1D::with_density(un.derivative.density), p.G);
            if (n > 8) {
                double wg = window_max(hist_g), wG = window_max(hist_G);
                if (gg > 1.10 * wg + 1e-9) {
                    gaps_ok = false;
                    worst_slack = std::max(worst_slack, gg / std::max(wg, 1e-12));
                }
                if (gG > 1.10 * wG + 1e-9) {
                    gaps_ok = false;
                    worst_slack = std::max(worst_slack, gG / std::max(wG, 1e-12));
                }
            }
            hist_g.push_back(gg);
            hist_G.push_back(gG);
        }
        BoundsReport br = verify_bounds(p, ns);
        if (!br.pass) bounds_ok = false;
        EnergyReport er = energy_convergence_experiment(p, pair, oracle,
                                                        {16, 64, 256, 1024, 4096, 16384, 65536, 262144});
        if (!er.liminf_ok) energy_ok = false;
    }
    s.add("approx-gaps", "weak-star gaps nonincreasing beyond n=8", gaps_ok, worst_slack);
    s.add("approx-bounds", "norm ratios uniformly bounded", bounds_ok, bounds_ok ? 0.0 : 1.0);
    s.add("approx-energy", "liminf E(u_n) >= J - 1e-3", energy_ok, energy_ok ? 0.0 : 1.0);

    // Piecewise-constant total variation convergence for the named classes.
    {
        Measure1D dg(0.0, 1.0, 1, 1);
        dg.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
        BVFunction1D aff(Mat::scalar(0.0), dg);
        int n = 1024;
        double tv = total_variation(piecewise_constant_approx(aff, n).derivative);
        double gap = std::abs(tv - (1.0 - 1.0 / n));
        s.add("pwc-variation", "affine slope one: |D pwc| = 1 - 1/n", gap <= 1e-12, gap);
        double conv = std::abs(tv - 1.0);
        s.add("pwc-variation", "affine slope one at n=2^10", conv <= 1e-2, conv);
    }
    {
        Measure1D dg(0.0, 1.0, 1, 1);
        dg.atoms.push_back({0.5, Mat::scalar(1.0)});
        dg.normalize();
        BVFunction1D step(Mat::scalar(0.0), dg);
        double tv = total_variation(piecewise_constant_approx(step, 1024).derivative);
        s.add("pwc-variation", "piecewise constant fixed point", std::abs(tv - 1.0) <= 1e-12,
              std::abs(tv - 1.0));
    }
    {
        Measure1D dg(0.0, 1.0, 1, 1);
        dg.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
        dg.normalize();
        BVFunction1D cant(Mat::scalar(0.0), dg);
        // Triadic resolutions match the staircase geometry; midpoint
        // sampling at n = 2^10 leaves a ~1.7e-2 loss near the endpoints.
        double tv = total_variation(piecewise_constant_approx(cant, 6561).derivative);
        s.add("pwc-variation", "Cantor staircase at n=3^8", std::abs(tv - 1.0) <= 1e-2,
              std::abs(tv - 1.0));
    }
}

}  // namespace

SuiteReport run_property_suite(unsigned seed, int budget) {
    if (budget < 100) throw std::invalid_argument("run_property_suite: budget must be >= 100");
    Suite s;
    energy_suite(s, seed, budget);
    measure_suite(s, seed, budget);
    cell_suite(s, seed, budget);
    functional_suite(s, seed, budget);
    approx_suite(s, seed, budget);
    return s.rep;
}

}  // namespace msd

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msd/approx.hpp"
#include "msd/functional.hpp"
#include "msd/random_msd.hpp"

using namespace msd;

namespace {

EnergyPair abs_norm() { return make_pair(make_bulk_abs(), make_surface_norm()); }

BVFunction1D step_function(double a, double b, double x0, double height) {
    return BVFunction1D(Mat::scalar(0.0), Measure1D::dirac(a, b, x0, Mat::scalar(height)));
}

BVFunction1D affine(double a, double b, double slope, double left = 0.0) {
    Measure1D d(a, b, 1, 1);
    d.density = PiecewisePoly::constant(a, b, Mat::scalar(slope));
    return BVFunction1D(Mat::scalar(left), d);
}

}  // namespace

TEST_CASE("initial energy") {
    EnergyPair pair = abs_norm();
    // chi_(0,1) on (-1,1): no bulk, one unit jump.
    CHECK(eval_E(step_function(-1.0, 1.0, 0.0, 1.0), pair) == doctest::Approx(1.0));
    // affine slope 2 on (0,1).
    CHECK(eval_E(affine(0.0, 1.0, 2.0), pair) == doctest::Approx(2.0));
    // x + chi_(1/2,1) on (0,1).
    Measure1D d(0.0, 1.0, 1, 1);
    d.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
    d.atoms.push_back({0.5, Mat::scalar(1.0)});
    d.normalize();
    CHECK(eval_E(BVFunction1D(Mat::scalar(0.0), d), pair) == doctest::Approx(2.0));

    // Cantor parts are rejected.
    Measure1D dc(0.0, 1.0, 1, 1);
    dc.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
    dc.normalize();
    CHECK_THROWS_AS(eval_E(BVFunction1D(Mat::scalar(0.0), dc), pair), std::invalid_argument);
}

TEST_CASE("recession energy") {
    EnergyPair area = make_pair(make_bulk_area(), make_surface_norm());
    CHECK(eval_E_infty(affine(0.0, 1.0, 1.0), area) == doctest::Approx(1.0));
    // For a 1-homogeneous bulk the two energies coincide.
    EnergyPair pair = abs_norm();
    BVFunction1D u = step_function(-1.0, 1.0, 0.25, -2.0);
    CHECK(eval_E_infty(u, pair) == doctest::Approx(eval_E(u, pair)));
    BVFunction1D c(Mat::scalar(3.0), Measure1D(0.0, 1.0, 1, 1));
    CHECK(eval_E_infty(c, area) == 0.0);
}

TEST_CASE("four-term relaxed functional reproduces the instability sequence") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);
    Measure1D delta0 = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));

    for (int k = 1; k <= 16; ++k) {
        Measure1D dgk = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0 / k));
        MSDPair pk{BVFunction1D(Mat::scalar(0.0), dgk), delta0};
        JBreakdown b = eval_J_fourterm(pk, oracle);
        CHECK(b.gsg_term == 0.0);  // exact
        // The atom of G rides on the jump of g; its density against the
        // counting measure on the jump set is the full atom weight.
        CHECK(b.jump_term == doctest::Approx(oracle.hj(1.0 / k, 1.0, 1.0)));
        CHECK(b.bulk_term == 0.0);
        CHECK(b.total == doctest::Approx(b.jump_term));
    }

    MSDPair limit{BVFunction1D(Mat::scalar(0.0), Measure1D(-1.0, 1.0, 1, 1)), delta0};
    JBreakdown bl = eval_J_fourterm(limit, oracle);
    CHECK(bl.gsg_term == 1.0);  // exact
    CHECK(bl.jump_term == 0.0);
    CHECK(bl.total == 1.0);
}

TEST_CASE("four-term functional on classical states") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);
    // g affine slope A with G = A dx: total is |A| times the length.
    for (double A : {-1.5, 0.5, 2.0}) {
        Measure1D G(0.0, 1.0, 1, 1);
        G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(A));
        MSDPair p{affine(0.0, 1.0, A), G};
        JBreakdown b = eval_J_fourterm(p, oracle);
        CHECK(b.total == doctest::Approx(std::abs(A)));
        CHECK(b.jump_term == 0.0);
    }
}

TEST_CASE("measure form agrees with the four-term form") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);

    // The instability instances.
    Measure1D delta0 = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    for (int k : {1, 4, 16}) {
        Measure1D dgk = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0 / k));
        MSDPair pk{BVFunction1D(Mat::scalar(0.0), dgk), delta0};
        CHECK(eval_J_measure(pk, oracle) == doctest::Approx(eval_J_fourterm(pk, oracle).total));
    }
    MSDPair limit{BVFunction1D(Mat::scalar(0.0), Measure1D(-1.0, 1.0, 1, 1)), delta0};
    CHECK(eval_J_measure(limit, oracle) == doctest::Approx(1.0));

    // Smooth pair: only the absolutely continuous term contributes.
    Measure1D G(0.0, 1.0, 1, 1);
    G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(0.3));
    MSDPair smooth{affine(0.0, 1.0, 1.0), G};
    CHECK(eval_J_measure(smooth, oracle) == doctest::Approx(oracle.H(1.0, 0.3)));

    // Cantor staircase with G = 0: h^c(1, 0) = 1 on the unit carrier.
    Measure1D dc(0.0, 1.0, 1, 1);
    dc.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
    dc.normalize();
    MSDPair cant{BVFunction1D(Mat::scalar(0.0), dc), Measure1D(0.0, 1.0, 1, 1)};
    CHECK(eval_J_measure(cant, oracle) == doctest::Approx(1.0));
    CHECK(eval_J_fourterm(cant, oracle).cantor_term == doctest::Approx(1.0));

    // Random pairs: the two forms agree to solver tolerance.
    PairGenerator gen(7);
    for (int i = 0; i < 100; ++i) {
        MSDPair p = gen.next();
        double four = eval_J_fourterm(p, oracle).total;
        double meas = eval_J_measure(p, oracle);
        CHECK(std::abs(four - meas) <= 1e-6);
    }
}

TEST_CASE("relaxation never exceeds the unrelaxed energy") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);
    PairGenerator gen(11);
    gen.g_sbv_only = true;
    for (int i = 0; i < 30; ++i) {
        MSDPair p = gen.next();
        Measure1D G(p.G.a, p.G.b, 1, 1);
        G.density = p.g.derivative.density;
        MSDPair classical{p.g, G};
        CHECK(eval_J_fourterm(classical, oracle).total <= eval_E(p.g, pair) + 1e-9);
    }
}

TEST_CASE("additivity over subintervals") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);
    Measure1D d(0.0, 1.0, 1, 1);
    d.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
    d.atoms.push_back({0.25, Mat::scalar(0.5)});
    d.normalize();
    BVFunction1D g(Mat::scalar(0.0), d);
    Measure1D G = Measure1D::dirac(0.0, 1.0, 0.25, Mat::scalar(1.0));
    G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(-0.4));
    MSDPair p{g, G};
    double whole = eval_J_fourterm(p, oracle).total;
    auto cut = [&](double lo, double hi) {
        Measure1D dg = restrict_measure(g.derivative, lo, hi);
        Measure1D GG = restrict_measure(G, lo, hi);
        return MSDPair{BVFunction1D(g.eval(lo + 1e-12), dg), GG};
    };
    double split = eval_J_fourterm(cut(0.0, 0.6), oracle).total +
                   eval_J_fourterm(cut(0.6, 1.0), oracle).total;
    CHECK(whole == doctest::Approx(split).epsilon(1e-9));
}

TEST_CASE("Dirichlet evaluation") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);

    // Constant g with zero boundary data pays the recession of the
    // mismatch at both endpoints.
    for (double c : {0.5, -1.25}) {
        BVFunction1D g(Mat::scalar(c), Measure1D(0.0, 1.0, 1, 1));
        MSDPair p{g, Measure1D(0.0, 1.0, 1, 1)};
        DirichletSpec spec;
        spec.gamma_left = spec.gamma_right = true;
        spec.u0_left = vec1(0.0);
        spec.u0_right = vec1(0.0);
        CHECK(eval_J_dirichlet(p, oracle, spec) == doctest::Approx(2.0 * std::abs(c)));
    }

    // Matching traces: boundary terms vanish.
    BVFunction1D g = affine(0.0, 1.0, 1.0);
    Measure1D G(0.0, 1.0, 1, 1);
    G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
    MSDPair p{g, G};
    DirichletSpec spec;
    spec.gamma_left = spec.gamma_right = true;
    spec.u0_left = vec1(0.0);
    spec.u0_right = vec1(1.0);
    CHECK(eval_J_dirichlet(p, oracle, spec) == doctest::Approx(eval_J_measure(p, oracle)));

    // Boundary atom of G at an endpoint in Gamma.
    BVFunction1D gz(Mat::scalar(0.0), Measure1D(0.0, 1.0, 1, 1));
    Measure1D Gb(0.0, 1.0, 1, 1);
    Gb.atoms.push_back({0.0, Mat::scalar(1.0)});
    Gb.normalize();
    MSDPair pb{gz, Gb};
    DirichletSpec spec2;
    spec2.gamma_left = true;
    spec2.u0_left = vec1(0.0);
    CHECK(eval_J_dirichlet(pb, oracle, spec2) == doctest::Approx(1.0));

    // Missing trace value.
    DirichletSpec broken;
    broken.gamma_left = true;
    CHECK_THROWS_AS(eval_J_dirichlet(pb, oracle, broken), std::invalid_argument);
}

TEST_CASE("penalized energy") {
    EnergyPair pair = abs_norm();
    BVFunction1D g = affine(0.0, 1.0, 1.0);

    // Penalty vanishes when G matches the gradient.
    Measure1D G(0.0, 1.0, 1, 1);
    G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
    CHECK(eval_E_R(g, G, 3.0, pair) == doctest::Approx(eval_E(g, pair)));

    // Slope one against G = 0 at R = 3.
    Measure1D Z(0.0, 1.0, 1, 1);
    CHECK(eval_E_R(g, Z, 3.0, pair) == doctest::Approx(4.0));
    CHECK(eval_E_R(g, Z, 0.0, pair) == doctest::Approx(1.0));

    Measure1D bad = Measure1D::dirac(0.0, 1.0, 0.5, Mat::scalar(1.0));
    CHECK_THROWS_AS(eval_E_R(g, bad, 1.0, pair), std::invalid_argument);
}

TEST_CASE("penalization threshold") {
    EnergyPair pair = abs_norm();
    CHECK(threshold_R0(pair) == doctest::Approx(3.0));  // L + 2 C_psi
    // Linearity in C_psi.
    EnergyPair wide = make_pair(make_bulk_abs(), make_surface_anisotropic(1.0));
    CHECK(threshold_R0(wide) - threshold_R0(pair) ==
          doctest::Approx(2.0 * (wide.psi.C_psi - 1.0)));
    CHECK_THROWS_AS(threshold_R0(pair, 2), std::invalid_argument);
    // The structural bounds force c_psi <= C_psi.
    CHECK(pair.psi.c_psi <= pair.psi.C_psi);
}

TEST_CASE("penalty ordering against corrected competitors") {
    EnergyPair pair = abs_norm();
    DensityOracle1d oracle(pair);
    double R = threshold_R0(pair) + 1.0;
    PairGenerator gen(7);
    gen.g_sbv_only = true;
    gen.G_density_only = true;
    for (int i = 0; i < 50; ++i) {
        MSDPair p = gen.next();
        double ER = eval_E_R(p.g, p.G, R, pair);
        BVFunction1D v = sbv_corrector(p.g, p.G, 32768);
        Measure1D d = p.g.derivative;
        d += v.derivative;
        BVFunction1D corrected(p.g.left_value + v.left_value, d);
        double Ecorr = eval_E(corrected, pair);
        double J = eval_J_fourterm(p, oracle).total;
        CHECK(ER >= Ecorr - 1e-9);
        CHECK(Ecorr >= J - 1e-3);
        CHECK(ER >= J - 1e-3);
    }
}

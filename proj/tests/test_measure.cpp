#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msd/measure.hpp"
#include "msd/random_msd.hpp"

using namespace msd;

namespace {

Measure1D heaviside_derivative(double a, double b, double x0, double height) {
    return Measure1D::dirac(a, b, x0, Mat::scalar(height));
}

BVFunction1D cantor_staircase() {
    Measure1D d(0.0, 1.0, 1, 1);
    d.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
    d.normalize();
    return BVFunction1D(Mat::scalar(0.0), d);
}

// Independent oracle: total variation of the Cantor function from triadic
// level sums of its increments.
double cantor_tv_by_level_sums(int level) {
    auto pts = cantor_level_points(level);
    double tv = 0.0;
    double prev = 0.0;
    for (double p : pts) {
        double v = cantor_cdf(p);
        tv += std::abs(v - prev);
        prev = v;
    }
    return tv + std::abs(1.0 - prev);
}

}  // namespace

TEST_CASE("cantor function basics") {
    CHECK(cantor_cdf(0.0) == 0.0);
    CHECK(cantor_cdf(1.0) == 1.0);
    CHECK(cantor_cdf(1.0 / 3.0) == doctest::Approx(0.5));
    CHECK(cantor_cdf(0.5) == doctest::Approx(0.5));
    CHECK(cantor_cdf(1.0 / 9.0) == doctest::Approx(0.25));
    CHECK(cantor_cdf(1.0 - 1.0 / 9.0) == doctest::Approx(0.75));
}

TEST_CASE("derivatives of standard examples") {
    // Heaviside jump.
    BVFunction1D chi(Mat::scalar(0.0), heaviside_derivative(-1.0, 1.0, 0.0, 1.0));
    Measure1D d = derivative(chi);
    CHECK(d.density_is_zero());
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].x == 0.0);
    CHECK(d.atoms[0].w[0] == 1.0);
    CHECK(chi.eval(-0.5)[0] == 0.0);
    CHECK(chi.eval(0.5)[0] == 1.0);
    CHECK(chi.eval(0.0)[0] == doctest::Approx(0.5));  // precise representative

    // Cantor staircase: one Cantor component of total variation one,
    // cross-checked against triadic level summation.
    BVFunction1D stair = cantor_staircase();
    CHECK(total_variation(derivative(stair)) == doctest::Approx(1.0));
    CHECK(cantor_tv_by_level_sums(10) == doctest::Approx(1.0));
    CHECK(stair.eval(0.5)[0] == doctest::Approx(0.5));

    // Affine slope A.
    Measure1D da(0.0, 1.0, 1, 1);
    da.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(2.5));
    BVFunction1D aff(Mat::scalar(0.0), da);
    CHECK(derivative(aff).atoms.empty());
    CHECK(aff.eval(0.4)[0] == doctest::Approx(1.0));
}

TEST_CASE("total variation") {
    Measure1D dirac = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    CHECK(total_variation(dirac) == 1.0);

    Measure1D dens(0.0, 1.0, 1, 1);
    dens.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(-0.7));
    CHECK(total_variation(dens) == doctest::Approx(0.7));

    // Additivity over mutually singular parts: delta + unit density on (-1,1).
    Measure1D mix = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    mix.density = PiecewisePoly::constant(-1.0, 1.0, Mat::scalar(1.0));
    CHECK(total_variation(mix) == doctest::Approx(3.0));

    // Additivity over disjoint subintervals.
    CHECK(total_variation(restrict_measure(mix, -1.0, 0.5)) +
              total_variation(restrict_measure(mix, 0.5, 1.0)) ==
          doctest::Approx(3.0));
}

TEST_CASE("decompose routes the parts of G") {
    // Atom of G on the jump set of g is captured entirely by G_j.
    for (int k = 1; k <= 16; ++k) {
        Measure1D dgk = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0 / k));
        MSDPair pair{BVFunction1D(Mat::scalar(0.0), dgk),
                     Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0))};
        GDecomposition dec = decompose(pair);
        CHECK(total_variation(dec.G_s) == 0.0);
        REQUIRE(dec.G_j.atoms.size() == 1);
        CHECK(dec.G_j.atoms[0].w[0] == 1.0);
    }
    // At the limit g = 0 the whole atom is singular rest.
    MSDPair limit{BVFunction1D(Mat::scalar(0.0), Measure1D(-1.0, 1.0, 1, 1)),
                  Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0))};
    GDecomposition dec = decompose(limit);
    CHECK(dec.G_j.atoms.empty());
    REQUIRE(dec.G_s.atoms.size() == 1);
    CHECK(dec.G_s.atoms[0].w[0] == 1.0);

    // Smooth case: everything is absolutely continuous.
    Measure1D dg(0.0, 1.0, 1, 1);
    dg.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(1.0));
    Measure1D G(0.0, 1.0, 1, 1);
    G.density = PiecewisePoly::constant(0.0, 1.0, Mat::scalar(0.5));
    GDecomposition dec2 = decompose({BVFunction1D(Mat::scalar(0.0), dg), G});
    CHECK(total_variation(dec2.G_a) == doctest::Approx(0.5));
    CHECK(total_variation(dec2.G_j) == 0.0);
    CHECK(total_variation(dec2.G_c) == 0.0);
    CHECK(total_variation(dec2.G_s) == 0.0);

    // Matched and unmatched Cantor carriers.
    BVFunction1D stair = cantor_staircase();
    Measure1D Gc(0.0, 1.0, 1, 1);
    Gc.cantor.push_back({1.0, 0.0, Mat::scalar(0.5)});
    Gc.normalize();
    GDecomposition dec3 = decompose({stair, Gc});
    CHECK(dec3.G_c.cantor.size() == 1);
    CHECK(dec3.G_s.cantor.empty());

    // Carrier of G disjoint from the carrier of D^c g lands in the rest.
    Measure1D dgc(0.0, 1.0, 1, 1);
    dgc.cantor.push_back({0.3, 0.1, Mat::scalar(1.0)});
    dgc.normalize();
    BVFunction1D gsmall(Mat::scalar(0.0), dgc);
    Measure1D Gs(0.0, 1.0, 1, 1);
    Gs.cantor.push_back({0.1, 0.85, Mat::scalar(0.5)});
    Gs.normalize();
    GDecomposition dec4 = decompose({gsmall, Gs});
    CHECK(dec4.G_c.cantor.empty());
    CHECK(dec4.G_s.cantor.size() == 1);

    // Partial carrier overlap is an unsupported representation.
    Measure1D Gbad(0.0, 1.0, 1, 1);
    Gbad.cantor.push_back({0.5, 0.25, Mat::scalar(1.0)});
    Gbad.normalize();
    CHECK_THROWS_AS(decompose({stair, Gbad}), std::invalid_argument);
}

TEST_CASE("decomposition identity on random pairs") {
    PairGenerator gen(99);
    for (int i = 0; i < 40; ++i) {
        MSDPair pair = gen.next();
        GDecomposition dec = decompose(pair);
        Measure1D sum = dec.sum();
        CHECK((sum.total() - pair.G.total()).norm() <= 1e-10);
        CHECK(sum.atoms.size() == pair.G.atoms.size());
        CHECK(sum.cantor.size() == pair.G.cantor.size());
        // Singular rest carries no density and no atoms on the jump set.
        CHECK(dec.G_s.density_is_zero());
        for (const auto& at : dec.G_s.atoms)
            for (const auto& j : pair.g.jumps()) CHECK(std::abs(at.x - j.x) > 1e-12);
    }
}

TEST_CASE("nonlinear transform of measures") {
    TransformFn area = area_transform();

    // a(0) integrated over length two plus the recession on the atom.
    Measure1D dirac = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    CHECK(goffman_serrin(area, dirac) == doctest::Approx(3.0));

    // Linear integrands see the measure of the whole domain.
    TransformFn lin;
    lin.h = [](const Mat& m) { return 2.0 * m[0]; };
    lin.h_inf = lin.h;
    Measure1D mix = Measure1D::dirac(-1.0, 1.0, 0.25, Mat::scalar(0.5));
    mix.density = PiecewisePoly::constant(-1.0, 1.0, Mat::scalar(0.3));
    CHECK(goffman_serrin(lin, mix) == doctest::Approx(2.0 * mix.total()[0]));

    // Zero measure on (-1,1).
    Measure1D zero(-1.0, 1.0, 1, 1);
    CHECK(goffman_serrin(area, zero) == doctest::Approx(2.0));

    // Missing recession with singular mass present.
    TransformFn norec;
    norec.h = [](const Mat& m) { return m.dot(m); };
    CHECK_THROWS_AS(goffman_serrin(norec, dirac), std::invalid_argument);
}

TEST_CASE("mollification") {
    // Mollified Dirac: bump of mass one, support width 2 eps.
    Measure1D dirac = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    Measure1D mol = mollify(dirac, 0.125);
    CHECK(mol.atoms.empty());
    CHECK(mol.cantor.empty());
    CHECK(mol.total()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mol.density.eval(0.2)[0] == 0.0);
    CHECK(mol.density.eval(0.0)[0] == doctest::Approx(3.0 / (4.0 * 0.125)));

    // Density-only measure keeps its mass away from the boundary.
    Measure1D dens(0.0, 1.0, 1, 1);
    PiecewisePoly p(0.0, 1.0, 1, 1);
    p.bp = {0.0, 0.4, 0.6, 1.0};
    p.pieces = {{Mat::scalar(0.0)}, {Mat::scalar(2.0), Mat::scalar(1.0)}, {Mat::scalar(0.0)}};
    dens.density = p;
    Measure1D mold = mollify(dens, 0.05);
    CHECK(mold.total()[0] == doctest::Approx(dens.total()[0]).epsilon(1e-12));

    // Total variation does not grow.
    CHECK(total_variation(mold) <= total_variation(dens) + 1e-9);

    CHECK_THROWS_AS(mollify(dirac, 0.9), std::invalid_argument);
    CHECK_NOTHROW(mollify(dirac, 0.5));  // eps = |domain|/4 is the largest scale
}

TEST_CASE("symbolic convolution matches numerical convolution") {
    // Independent oracle: brute-force convolution of the density with the
    // quadratic kernel by composite midpoint quadrature.
    Measure1D mu(0.0, 2.0, 1, 1);
    PiecewisePoly p(0.0, 2.0, 1, 1);
    p.bp = {0.0, 0.7, 1.3, 2.0};
    p.pieces = {{Mat::scalar(1.0), Mat::scalar(-2.0)},
                {Mat::scalar(0.5), Mat::scalar(0.0), Mat::scalar(3.0)},
                {Mat::scalar(-1.0)}};
    mu.density = p;
    mu.atoms.push_back({0.4, Mat::scalar(0.8)});
    mu.normalize();
    double eps = 0.11;
    Measure1D mol = mollify(mu, eps);
    auto kernel = [&](double u) {
        return std::abs(u) < eps ? 3.0 / (4.0 * eps) * (1.0 - u * u / (eps * eps)) : 0.0;
    };
    for (double x : {0.2, 0.35, 0.5, 0.69, 0.75, 1.0, 1.31, 1.9}) {
        const int M = 40000;
        double brute = 0.0;
        for (int i = 0; i < M; ++i) {
            double y = 2.0 * (i + 0.5) / M;
            brute += kernel(x - y) * p.eval_scalar(y) * (2.0 / M);
        }
        brute += kernel(x - 0.4) * 0.8;
        CHECK(mol.density.eval_scalar(x) == doctest::Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("weak-star gap diagnostics") {
    Measure1D dirac = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    CHECK(weakstar_gap(dirac, dirac) == 0.0);

    // Classical approximate identity: n chi_(0,1/n) dx converges to delta_0.
    double prev = 1e300;
    for (int n : {4, 16, 64, 256}) {
        Measure1D approx_id(-1.0, 1.0, 1, 1);
        PiecewisePoly p(-1.0, 1.0, 1, 1);
        p.bp = {-1.0, 0.0, 1.0 / n, 1.0};
        p.pieces = {{Mat::scalar(0.0)}, {Mat::scalar(static_cast<double>(n))}, {Mat::scalar(0.0)}};
        approx_id.density = p;
        double gap = weakstar_gap(approx_id, dirac);
        CHECK(gap < prev + 1e-12);
        prev = gap;
    }
    CHECK(prev < 0.05);

    // A separating test function distinguishes distinct atoms.
    Measure1D d0 = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    Measure1D dh = Measure1D::dirac(-1.0, 1.0, 0.5, Mat::scalar(1.0));
    CHECK(weakstar_gap(d0, dh) > 0.1);

    CHECK_THROWS_AS(weakstar_gap(d0, dh, 4), std::invalid_argument);
}

TEST_CASE("area-strict gap") {
    Measure1D dirac = Measure1D::dirac(-1.0, 1.0, 0.0, Mat::scalar(1.0));
    CHECK(area_strict_gap(dirac, dirac) == 0.0);

    // |area(delta_0) - area(0)| = |3 - 2| = 1 plus a positive moment gap.
    Measure1D zero(-1.0, 1.0, 1, 1);
    double gap = area_strict_gap(dirac, zero);
    CHECK(gap >= 1.0);
    CHECK(gap <= 2.0);

    // Mollified Cantor measure approaches the Cantor measure; the gap
    // decreases monotonically in the scale.
    Measure1D cm(0.0, 1.0, 1, 1);
    cm.cantor.push_back({0.6, 0.2, Mat::scalar(1.0)});
    cm.normalize();
    double first = -1.0, prev = 1e300;
    for (int k = 2; k <= 8; ++k) {
        Measure1D mol = mollify(cm, std::pow(3.0, -k));
        double g = area_strict_gap(mol, cm);
        CHECK(g < prev * 1.02 + 1e-9);
        if (first < 0) first = g;
        prev = g;
    }
    CHECK(prev < first / 3.0);
}

TEST_CASE("primitive and derivative are inverse") {
    PairGenerator gen(123);
    for (int i = 0; i < 10; ++i) {
        MSDPair pair = gen.next();
        BVFunction1D f = primitive(pair.G, Mat::scalar(0.7));
        Measure1D back = derivative(f);
        CHECK(back.atoms.size() == pair.G.atoms.size());
        CHECK(back.cantor.size() == pair.G.cantor.size());
        CHECK((back.total() - pair.G.total()).norm() == 0.0);
    }
}

TEST_CASE("measure construction guards") {
    Measure1D m(0.0, 1.0, 1, 1);
    m.atoms.push_back({0.5, Mat::scalar(1.0)});
    m.atoms.push_back({0.5 + 1e-14, Mat::scalar(2.0)});
    m.normalize();
    REQUIRE(m.atoms.size() == 1);  // merged within 1e-12
    CHECK(m.atoms[0].w[0] == 3.0);

    Measure1D bad(0.0, 1.0, 1, 1);
    bad.atoms.push_back({1.5, Mat::scalar(1.0)});
    CHECK_THROWS_AS(bad.normalize(), std::invalid_argument);

    Measure1D overlap(0.0, 1.0, 1, 1);
    overlap.cantor.push_back({0.5, 0.0, Mat::scalar(1.0)});
    overlap.cantor.push_back({0.5, 0.25, Mat::scalar(1.0)});
    CHECK_THROWS_AS(overlap.normalize(), std::invalid_argument);

    // Atom in a gap of the Cantor carrier is fine; on the carrier it is not.
    Measure1D ongap(0.0, 1.0, 1, 1);
    ongap.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
    ongap.atoms.push_back({0.5, Mat::scalar(1.0)});
    CHECK_NOTHROW(ongap.normalize());
    Measure1D onset(0.0, 1.0, 1, 1);
    onset.cantor.push_back({1.0, 0.0, Mat::scalar(1.0)});
    onset.atoms.push_back({1.0 / 3.0, Mat::scalar(1.0)});
    CHECK_THROWS_AS(onset.normalize(), std::invalid_argument);
}

#include "msd/random_msd.hpp"

#include <algorithm>
#include <cmath>

namespace msd {

PiecewisePoly PairGenerator::random_density(double a, double b, int max_pieces, int max_deg) {
    int np = ui(1, max_pieces);
    std::vector<double> bp = {a, b};
    for (int i = 1; i < np; ++i) bp.push_back(u(a + 0.05, b - 0.05));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double l, double r) { return std::abs(l - r) < 1e-3; }),
             bp.end());
    PiecewisePoly d;
    d.rows = 1;
    d.cols = 1;
    d.bp = bp;
    for (size_t j = 0; j + 1 < bp.size(); ++j) {
        int deg = ui(0, max_deg);
        std::vector<Mat> cs;
        for (int k = 0; k <= deg; ++k) cs.push_back(Mat::scalar(u(-1.0, 1.0)));
        d.pieces.push_back(cs);
    }
    return d;
}

MSDPair PairGenerator::next() {
    const double a = -1.0, b = 1.0;

    // Optional Cantor carrier for Dg, kept away from the boundary.
    bool g_cantor = cantor_in_g && !g_sbv_only && ui(0, 2) == 0;
    double cs = 0.0, co = 0.0;
    if (g_cantor) {
        cs = u(0.2, 0.5);
        co = u(a + 0.1, b - 0.1 - cs);
    }

    auto fresh_atom_position = [&]() {
        for (int tries = 0; tries < 64; ++tries) {
            double x = u(a + 0.05, b - 0.05);
            if (!g_cantor || x < co - 0.01 || x > co + cs + 0.01) return x;
        }
        return a + 0.05;
    };

    Measure1D Dg(a, b, 1, 1);
    Dg.density = random_density(a, b, 3, 2);
    int njumps = ui(0, 3);
    for (int i = 0; i < njumps; ++i) {
        double w = u(0.1, 1.0) * (ui(0, 1) ? 1.0 : -1.0);
        Dg.atoms.push_back({fresh_atom_position(), Mat::scalar(w)});
    }
    if (g_cantor) Dg.cantor.push_back({cs, co, Mat::scalar(u(0.5, 1.5) * (ui(0, 1) ? 1.0 : -1.0))});
    Dg.normalize();
    BVFunction1D g(Mat::scalar(u(-1.0, 1.0)), Dg);

    Measure1D G(a, b, 1, 1);
    G.density = random_density(a, b, 3, 2);
    if (!G_density_only) {
        // Some atoms ride on the jump set of g, others land in the rest.
        for (const auto& at : g.jumps())
            if (ui(0, 1)) G.atoms.push_back({at.x, Mat::scalar(u(-1.5, 1.5))});
        int extra = ui(0, 2);
        for (int i = 0; i < extra; ++i)
            G.atoms.push_back({fresh_atom_position(), Mat::scalar(u(0.1, 1.0) * (ui(0, 1) ? 1.0 : -1.0))});
        if (cantor_in_G && ui(0, 2) == 0) {
            if (g_cantor && ui(0, 1)) {
                G.cantor.push_back({cs, co, Mat::scalar(u(-1.5, 1.5))});
            } else {
                double s2 = u(0.1, 0.2);
                for (int tries = 0; tries < 64; ++tries) {
                    double o2 = u(a + 0.05, b - 0.05 - s2);
                    bool clash = g_cantor && !(o2 + s2 < co - 0.01 || o2 > co + cs + 0.01);
                    for (const auto& at : G.atoms)
                        if (at.x >= o2 - 0.01 && at.x <= o2 + s2 + 0.01) clash = true;
                    for (const auto& at : Dg.atoms)
                        if (at.x >= o2 - 0.01 && at.x <= o2 + s2 + 0.01) clash = true;
                    if (!clash) {
                        G.cantor.push_back({s2, o2, Mat::scalar(u(0.5, 1.5))});
                        break;
                    }
                }
            }
        }
    }
    G.normalize();
    return MSDPair{g, G};
}

}  // namespace msd

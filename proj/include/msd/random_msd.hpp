#pragma once

#include <random>

#include "msd/measure.hpp"

namespace msd {

/// Seeded generator of measure structured deformation pairs on (-1, 1),
/// scalar-valued: piecewise-polynomial densities, up to three atoms and at
/// most one Cantor component per measure.
struct PairGenerator {
    std::mt19937_64 rng;
    bool cantor_in_g = true;
    bool cantor_in_G = true;
    bool G_density_only = false;  // penalized-functional instances
    bool g_sbv_only = false;

    explicit PairGenerator(unsigned seed) : rng(seed) {}

    double u(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    }
    int ui(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(rng);
    }

    PiecewisePoly random_density(double a, double b, int max_pieces, int max_deg);
    MSDPair next();
};

}  // namespace msd

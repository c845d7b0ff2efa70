#pragma once

#include <vector>

#include "msd/cell.hpp"
#include "msd/functional.hpp"
#include "msd/measure.hpp"

namespace msd {

/// Primitive of an absolutely continuous measure: f with grad f = Gk and no
/// jumps, anchored at the left endpoint.
BVFunction1D alberti_primitive_1d(const Measure1D& Gk);

/// Piecewise-constant approximation on a uniform n-partition, sampling the
/// precise representative at cell midpoints.
BVFunction1D piecewise_constant_approx(const BVFunction1D& u, int n);

/// Mollification at scale eps_k = |domain| / (4k), rescaled if necessary so
/// that the L1 mass does not exceed |G|(domain).
Measure1D smooth_to_measure(const Measure1D& G, int k);

/// Diagonal construction u_n = pwc(g - f^{k(n)}, n) + f^{k(n)} with
/// f^k the primitive of the smoothed measure and k(n) = floor(sqrt(n)).
/// grad u_n equals the smoothed density exactly.
BVFunction1D approximate_msd(const MSDPair& pair, int n);

/// Corrector v with grad v = G - grad g and per-cell compensating jumps, so
/// that |Dv| <= 2 int |grad v| and g + v has gradient exactly G.
BVFunction1D sbv_corrector(const BVFunction1D& g, const Measure1D& G, int cells);

struct BoundsRow {
    int n = 0;
    double du_ratio = 0.0;  // |Du_n| / ||(g,G)||
    double bv_ratio = 0.0;  // ||u_n||_BV / ||(g,G)||
};

struct BoundsReport {
    double msd_norm = 0.0;
    std::vector<BoundsRow> rows;
    bool pass = false;  // no upward trend in either ratio
};

double msd_norm(const MSDPair& pair);

BoundsReport verify_bounds(const MSDPair& pair, const std::vector<int>& n_schedule);

struct EnergyRow {
    int n = 0;
    double E = 0.0;
    double J = 0.0;
    double gap_g = 0.0;
    double gap_G = 0.0;
    double tv_ratio = 0.0;
};

struct EnergyReport {
    std::vector<EnergyRow> rows;
    double J = 0.0;
    bool liminf_ok = false;   // tail energies at least J - tol
    bool recovery = false;    // energies converge to J (diagnostic)
};

EnergyReport energy_convergence_experiment(const MSDPair& pair, const EnergyPair& energies,
                                           const DensityOracle1d& oracle,
                                           const std::vector<int>& n_schedule, double tol = 1e-3);

/// Sample the precise representative at many points in one sweep.
std::vector<Vec> sample_bv(const BVFunction1D& u, const std::vector<double>& xs);

/// Weak-star moment gap between two sampled functions on a common midpoint
/// grid (values must come from the same grid).
double weakstar_gap_sampled(const std::vector<Vec>& f, const std::vector<Vec>& g, double a,
                            double b, int dictionary_size = 16);

std::vector<double> midpoint_grid(double a, double b, int n);

}  // namespace msd

#pragma once

#include <optional>

#include "msd/cell.hpp"
#include "msd/energy.hpp"
#include "msd/measure.hpp"

namespace msd {

/// Dirichlet data on a subset of the interval endpoints; nu_Gamma is the
/// outward normal (-1 left, +1 right).
struct DirichletSpec {
    std::optional<Vec> u0_left;
    std::optional<Vec> u0_right;
    bool gamma_left = false;
    bool gamma_right = false;
};

struct JBreakdown {
    double bulk_term = 0.0;
    double jump_term = 0.0;
    double cantor_term = 0.0;
    double gsg_term = 0.0;
    double total = 0.0;
    bool flagged = false;
};

/// Initial energy of an SBV function: bulk of the absolutely continuous
/// gradient plus interfacial cost of the jumps.
double eval_E(const BVFunction1D& u, const EnergyPair& pair, double quad_tol = 1e-10);

/// Same with the bulk density replaced by its recession function.
double eval_E_infty(const BVFunction1D& u, const EnergyPair& pair, double quad_tol = 1e-10);

/// Four-term relaxed functional: bulk, jump, Cantor and singular-rest
/// contributions of the pair (g, G), densities from the 1-D cell oracle.
JBreakdown eval_J_fourterm(const MSDPair& pair, const DensityOracle1d& oracle,
                           double quad_tol = 1e-10);

/// Concise form: transform of the joint measure (Dg, G) by H and its
/// recession on the joint singular polar.
double eval_J_measure(const MSDPair& pair, const DensityOracle1d& oracle, double quad_tol = 1e-10);

/// Relaxed functional under Dirichlet data: interior value plus recession
/// terms for the boundary mismatch (g - u0) (x) nu_Gamma paired with any
/// boundary atoms of G.
double eval_J_dirichlet(const MSDPair& pair, const DensityOracle1d& oracle,
                        const DirichletSpec& spec, double quad_tol = 1e-10);

/// E(g) + R * integral of |grad g - G|; G must be purely absolutely
/// continuous.
double eval_E_R(const BVFunction1D& g, const Measure1D& G, double R, const EnergyPair& pair,
                double quad_tol = 1e-10);

/// Penalization threshold L + C_psi * C(N); the 1-D compensation constant
/// C(1) defaults to 2 (a primitive with per-cell compensating jumps gives
/// |Dv| <= 2 int |grad v|).
double threshold_R0(const EnergyPair& pair, int N = 1, double c1 = 2.0);

}  // namespace msd

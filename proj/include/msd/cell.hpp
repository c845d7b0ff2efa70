#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msd/energy.hpp"
#include "msd/mat.hpp"

namespace msd {

enum class CellMode { Bulk, Recession };

/// Minimization over the unit cell with affine boundary datum A and mean
/// gradient constraint B; Recession mode replaces the bulk density by its
/// recession function.
struct CellProblem {
    EnergyPair pair;
    Mat A;
    Mat B;
    CellMode mode = CellMode::Bulk;
    std::optional<Vec> nu;  // rotated cell Q_nu when set

    CellProblem(EnergyPair p, Mat A_, Mat B_, CellMode m = CellMode::Bulk)
        : pair(std::move(p)), A(A_), B(B_), mode(m) {
        if (!A.same_shape(B)) throw std::invalid_argument("CellProblem: A and B must share a shape");
    }
};

struct DiscParams {
    double tol = 1e-9;       // sandwich-closure tolerance
    double flag_tol = 1e-6;  // estimator-reconciliation tolerance
};

struct DensityEstimate {
    double value = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    std::string certificate;
    int iterations = 0;
    double tolerance = 0.0;
    bool flagged = false;  // sandwich did not close / estimators disagree

    bool closed() const { return upper - lower <= tolerance; }
};

/// Convex envelope data for a bulk density and its recession (d = N = 1
/// closed forms for the catalog, numeric hull otherwise).
struct Envelope1D {
    std::function<double(double)> Wss;      // W**
    std::function<double(double)> Winf_ss;  // (W_inf)**
    // Endpoints of the hull segment through B (B1 = B2 = B where W** = W).
    std::function<void(double, double&, double&)> support;
};

Envelope1D make_envelope_1d(const BulkDensity& W);

/// Analytic value of the one-dimensional cell infimum (d = N = 1):
/// W**(B) + psi(A - B, +1). Gradient oscillation attains the convex
/// envelope and a single jump is optimal for subadditive psi.
double oracle_H_1d(const EnergyPair& pair, double A, double B);
double oracle_hc_1d(const EnergyPair& pair, double A, double B);

DensityEstimate solve_H(const CellProblem& problem, const DiscParams& disc = {});

/// Jensen bound W**(B) + c_psi |A - B|.
double lower_bound_H(const CellProblem& problem);

DensityEstimate estimate_hc(const EnergyPair& pair, const Mat& A, const Mat& B,
                            const std::vector<double>& t_schedule = {10.0, 100.0, 1000.0},
                            const DiscParams& disc = {});

DensityEstimate estimate_hj(const EnergyPair& pair, const Vec& lambda, const Mat& Lambda,
                            const Vec& nu, const DiscParams& disc = {});

struct RateReport {
    std::vector<double> ts;
    std::vector<double> errors;  // |H(tA,tB)/t - hc(A,B)|
    double fitted_C = 0.0;       // least C with e(t) <= C (t^-alpha + 1/t)
    bool pass = false;
};

RateReport recession_rate_check(const EnergyPair& pair, const Mat& A, const Mat& B,
                                const std::vector<double>& t_schedule);

struct QccReport {
    int samples = 0;
    int violations = 0;
    double worst_violation = 0.0;
    double tol = 1e-6;
};

/// Jensen-type spot test: mean of H(A + grad v, B + w) over a fixed mesh
/// with v vanishing on the boundary and w mean-zero must not fall below
/// H(A, B). A violation indicates a non-tight solver upper bound.
QccReport qcc_spot_test(const EnergyPair& pair, const Mat& A, const Mat& B, int samples,
                        unsigned seed, double tol = 1e-6);

/// Density lookups for the relaxed functional in one space dimension
/// (d = N = 1), backed by the analytic cell oracle.
class DensityOracle1d {
public:
    explicit DensityOracle1d(EnergyPair pair);

    double H(double gradg, double Ga) const;
    double hc(double A, double B) const;
    double hj(double lambda, double Lambda, double nu) const;
    /// Energy density of singular mass carried by G alone (no matching
    /// variation in g): the recession of the bulk envelope.
    double hc_rest(double B) const;
    /// Recession density on joint polars (P from Dg, Q from G).
    double hinf_joint(double P, double Q) const;

    const EnergyPair& pair() const { return pair_; }

private:
    EnergyPair pair_;
    Envelope1D env_;
};

}  // namespace msd

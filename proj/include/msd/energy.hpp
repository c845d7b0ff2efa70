#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msd/mat.hpp"

namespace msd {

/// Scalar piecewise-linear function with linear extrapolation outside the
/// node range; the end slopes double as recession slopes.
struct PLF {
    std::vector<double> xs;
    std::vector<double> ys;

    double operator()(double x) const;
    double slope_left() const;
    double slope_right() const;
    bool convex(double tol = 1e-12) const;
};

/// Lower convex hull of the graph of a sampled function; equals the convex
/// envelope of its piecewise-linear interpolant.
PLF convex_hull_plf(const std::vector<double>& xs, const std::vector<double>& ys);

enum class BulkKind { Abs, Area, DoubleWell, CustomGrid, CustomFn };
enum class SurfaceKind { Norm, AnisotropicNorm, Custom, CustomFn };

struct StructuralConstants {
    double c_W = 1.0;
    double C_W = 1.0;
    double L = 1.0;
    double alpha = 0.5;
    double c_rec = 1.0;
    double c_psi = 1.0;
    double C_psi = 1.0;
};

/// Bulk energy density W on d x N matrices, linear growth.
struct BulkDensity {
    BulkKind kind = BulkKind::Abs;
    std::vector<double> params;
    StructuralConstants consts;
    // Only used by CustomFn entries (test doubles and experiments).
    std::function<double(const Mat&)> fn;
    std::function<double(const Mat&)> fn_recession;

    double operator()(const Mat& A) const;
    bool one_dimensional_only() const {
        return kind == BulkKind::DoubleWell || kind == BulkKind::CustomGrid;
    }
    /// Exact recession W_inf for catalog kinds; grid end slopes for
    /// CustomGrid; supplied fn_recession for CustomFn (may be empty).
    bool has_closed_recession() const;
    double recession(const Mat& A) const;
    std::string kind_name() const;
};

/// Interfacial energy density psi(lambda, nu), 1-homogeneous in lambda.
struct SurfaceDensity {
    SurfaceKind kind = SurfaceKind::Norm;
    std::vector<double> params;
    double c_psi = 1.0;
    double C_psi = 1.0;
    std::function<double(const Vec&, const Vec&)> fn;

    double operator()(const Vec& lambda, const Vec& nu) const;
    std::string kind_name() const;
};

double eval_bulk(const BulkDensity& W, const Mat& A);
double eval_surface(const SurfaceDensity& psi, const Vec& lambda, const Vec& nu);

struct RecessionEstimate {
    double value = 0.0;
    double error_bound = 0.0;  // zero when the closed form is exact
};

/// W_inf(A) = lim W(tA)/t. Closed form for catalog kinds, otherwise the
/// terminal schedule value with the structural rate bound attached.
RecessionEstimate recession_bulk(const BulkDensity& W, const Mat& A,
                                 const std::vector<double>& t_schedule);

/// Convex envelope of a scalar density on a uniform grid (d = N = 1).
PLF convex_envelope_1d(const BulkDensity& W, double lo, double hi, double step);

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;           // largest violation found (<= 0 means none)
    std::string witness;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct EnergyPair {
    BulkDensity W;
    SurfaceDensity psi;
    bool validated = false;

    void require_validated() const {
        if (!validated) throw std::runtime_error("EnergyPair: pair failed validation or was never validated");
    }
};

ValidationReport validate_pair(EnergyPair& pair, int sample_budget, unsigned seed = 12345);

// Catalog constructors (validated on creation).
BulkDensity make_bulk_abs();
BulkDensity make_bulk_area();
BulkDensity make_bulk_double_well();
BulkDensity make_bulk_custom_grid(double lo, double hi, const std::vector<double>& values,
                                  const StructuralConstants& consts);
SurfaceDensity make_surface_norm();
SurfaceDensity make_surface_anisotropic(double kappa);
SurfaceDensity make_surface_weighted(const std::vector<double>& weights);
EnergyPair make_pair(BulkDensity W, SurfaceDensity psi, int validation_budget = 10000);

}  // namespace msd

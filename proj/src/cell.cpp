#include "msd/cell.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace msd {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double psi_tilde(const EnergyPair& pair, const Mat& s) {
    // Jump cost across a flat interface with normal e1 (1-D convention).
    Vec nu(s.cols == 1 ? 1 : s.cols, 1);
    nu[0] = 1.0;
    Vec lam(s.rows, 1);
    for (int i = 0; i < s.rows; ++i) lam[i] = s[i * s.cols];
    return pair.psi(lam, nu);
}

}  // namespace

Envelope1D make_envelope_1d(const BulkDensity& W) {
    Envelope1D e;
    switch (W.kind) {
        case BulkKind::Abs:
            e.Wss = [](double B) { return std::abs(B); };
            e.Winf_ss = e.Wss;
            e.support = [](double B, double& B1, double& B2) { B1 = B2 = B; };
            return e;
        case BulkKind::Area:
            e.Wss = [](double B) { return std::sqrt(1.0 + B * B); };
            e.Winf_ss = [](double B) { return std::abs(B); };
            e.support = [](double B, double& B1, double& B2) { B1 = B2 = B; };
            return e;
        case BulkKind::DoubleWell:
            e.Wss = [](double B) { return std::abs(B) <= 1.0 ? 1.0 : 2.0 * std::abs(B) - 1.0; };
            e.Winf_ss = [](double B) { return 2.0 * std::abs(B); };
            e.support = [](double B, double& B1, double& B2) {
                if (std::abs(B) < 1.0) {
                    B1 = -1.0;
                    B2 = 1.0;
                } else {
                    B1 = B2 = B;
                }
            };
            return e;
        default: {
            // Numeric hull on a wide grid; recession from the end slopes.
            double span = 16.0 * std::max(1.0, W.consts.C_W / W.consts.c_W);
            std::vector<double> xs, ys;
            int n = 4096;
            for (int i = 0; i <= n; ++i) {
                double x = -span + 2.0 * span * i / n;
                xs.push_back(x);
                ys.push_back(W(Mat::scalar(x)));
            }
            auto hull = std::make_shared<PLF>(convex_hull_plf(xs, ys));
            e.Wss = [hull](double B) { return (*hull)(B); };
            double sl = hull->slope_left(), sr = hull->slope_right();
            e.Winf_ss = [sl, sr](double B) { return B >= 0 ? sr * B : sl * B; };
            e.support = [hull](double B, double& B1, double& B2) {
                const auto& xs_ = hull->xs;
                if (B <= xs_.front() || B >= xs_.back()) {
                    B1 = B2 = B;
                    return;
                }
                auto it = std::upper_bound(xs_.begin(), xs_.end(), B);
                size_t j = static_cast<size_t>(it - xs_.begin());
                B1 = xs_[j - 1];
                B2 = xs_[j];
            };
            return e;
        }
    }
}

double oracle_H_1d(const EnergyPair& pair, double A, double B) {
    pair.require_validated();
    Envelope1D env = make_envelope_1d(pair.W);
    return env.Wss(B) + psi_tilde(pair, Mat::scalar(A - B));
}

double oracle_hc_1d(const EnergyPair& pair, double A, double B) {
    pair.require_validated();
    Envelope1D env = make_envelope_1d(pair.W);
    return env.Winf_ss(B) + psi_tilde(pair, Mat::scalar(A - B));
}

namespace {

// Bulk density seen by the cell problem: W itself or its recession.
struct ModeBulk {
    const BulkDensity* W;
    CellMode mode;
    double operator()(const Mat& A) const {
        return mode == CellMode::Bulk ? (*W)(A) : W->recession(A);
    }
};

// Bulk value of the two-region laminate with gradients B1, B2 on cells of
// width theta and 1 - theta; exact when B1, B2 span the supporting segment
// of the convex envelope through B.
double laminate_bulk(const ModeBulk& Wm, double B, double B1, double B2, std::string* cert) {
    if (B1 == B2) {
        if (cert) *cert = "affine(B=" + fmt(B) + ")";
        return Wm(Mat::scalar(B));
    }
    double theta = (B2 - B) / (B2 - B1);  // width of the B1 region
    theta = std::min(1.0, std::max(0.0, theta));
    double val = theta * Wm(Mat::scalar(B1)) + (1.0 - theta) * Wm(Mat::scalar(B2));
    if (cert)
        *cert = "laminate(B1=" + fmt(B1) + ",B2=" + fmt(B2) + ",theta=" + fmt(theta) + ")";
    return val;
}

// Best jump pattern realizing total jump T; subadditive 1-homogeneous psi
// makes a single jump optimal, the enumeration up to 4 jumps guards
// custom densities. Returns the cost and describes the pattern.
double jump_cost(const EnergyPair& pair, const Mat& T, std::string* cert) {
    if (T.is_zero()) {
        if (cert) *cert = "nojump";
        return 0.0;
    }
    double best = psi_tilde(pair, T);
    int best_k = 1;
    for (int k = 2; k <= 4; ++k) {
        double c = k * psi_tilde(pair, T / static_cast<double>(k));
        if (c < best - 1e-15) {
            best = c;
            best_k = k;
        }
    }
    // Asymmetric two-jump split along the same direction (scalar case).
    if (T.size() == 1) {
        for (double s = -2.0; s <= 2.0; s += 0.125) {
            double c = psi_tilde(pair, Mat::scalar(s)) + psi_tilde(pair, Mat::scalar(T[0] - s));
            if (c < best - 1e-12) {
                best = c;
                best_k = 2;
            }
        }
    }
    if (cert) *cert = "jump(T=" + to_string(T) + ",count=" + std::to_string(best_k) + ")";
    return best;
}

double envelope_2d(const CellProblem& p, const Mat& B) {
    // Convex catalog kinds coincide with their envelope; otherwise the
    // coercivity floor c_W |B| is still a valid convex minorant.
    const BulkDensity& W = p.pair.W;
    if (p.mode == CellMode::Recession) {
        if (W.kind == BulkKind::Abs || W.kind == BulkKind::Area) return B.norm();
        return W.consts.c_W * B.norm();
    }
    if (W.kind == BulkKind::Abs || W.kind == BulkKind::Area) return W(B);
    return W.consts.c_W * B.norm();
}

// Single-laminate search for a possibly nonconvex bulk in two dimensions.
double bulk_2d_upper(const ModeBulk& Wm, const Mat& B, std::string* cert) {
    double best = Wm(B);
    if (cert) *cert = "affine(B=" + to_string(B) + ")";
    const double dirs[4][2] = {{1, 0}, {0, 1}, {std::sqrt(0.5), std::sqrt(0.5)},
                               {std::sqrt(0.5), -std::sqrt(0.5)}};
    for (auto& ad : dirs)
        for (auto& md : dirs)
            for (double s : {0.25, 0.5, 1.0, 2.0})
                for (double th : {0.25, 0.5, 0.75}) {
                    Vec a_ = B.rows == 2 ? vec2(ad[0], ad[1]) : vec1(1.0);
                    Vec m_ = B.cols == 2 ? vec2(md[0], md[1]) : vec1(1.0);
                    Mat r1 = outer(a_, m_) * s;
                    double v = th * Wm(B + r1 * (1.0 - th)) + (1.0 - th) * Wm(B - r1 * th);
                    if (v < best - 1e-13) {
                        best = v;
                        if (cert)
                            *cert = "laminate2d(dir=" + to_string(r1) + ",theta=" + fmt(th) + ")";
                    }
                }
    return best;
}

}  // namespace

double lower_bound_H(const CellProblem& problem) {
    const Mat& A = problem.A;
    const Mat& B = problem.B;
    double surface = problem.pair.psi.c_psi * (A - B).norm();
    if (A.size() == 1) {
        Envelope1D env = make_envelope_1d(problem.pair.W);
        double bulk = problem.mode == CellMode::Bulk ? env.Wss(B[0]) : env.Winf_ss(B[0]);
        return bulk + surface;
    }
    return envelope_2d(problem, B) + surface;
}

DensityEstimate solve_H(const CellProblem& problem, const DiscParams& disc) {
    problem.pair.require_validated();
    const Mat& A = problem.A;
    const Mat& B = problem.B;
    if (!A.finite() || !B.finite()) throw std::invalid_argument("solve_H: non-finite data");
    if (problem.nu && std::abs(problem.nu->norm() - 1.0) > 1e-12)
        throw std::invalid_argument("solve_H: nu must be a unit vector");
    ModeBulk Wm{&problem.pair.W, problem.mode};

    DensityEstimate est;
    est.tolerance = disc.tol;
    est.lower = lower_bound_H(problem);

    std::string bulk_cert, jcert;
    if (A.size() == 1) {
        // Interval cell: two-region laminate through the envelope support
        // points plus an enumerated jump pattern. One pass of the surface
        // and bulk steps already closes the sandwich for subadditive psi.
        Envelope1D env = make_envelope_1d(problem.pair.W);
        double B1, B2;
        env.support(B[0], B1, B2);
        if (problem.mode == CellMode::Recession) {
            // The recession of an admissible bulk density is convex in one
            // dimension, so the plain gradient is already optimal.
            B1 = B[0];
            B2 = B[0];
        }
        double jc = jump_cost(problem.pair, A - B, &jcert);
        est.upper = laminate_bulk(Wm, B[0], B1, B2, &bulk_cert) + jc;
        est.iterations = 1;
    } else {
        // Square cell: laminate bulk + one staircase system per rank-one
        // term of A - B.
        double bulk = bulk_2d_upper(Wm, B, &bulk_cert);
        double surf = 0.0;
        if (!(A - B).is_zero()) {
            auto terms = rank_one_decomposition(A - B);
            std::string sc = "staircase(";
            for (const auto& t : terms) {
                if (t.sigma < 1e-15) continue;
                surf += t.sigma * problem.pair.psi(t.u, t.v);
                sc += "[s=" + fmt(t.sigma) + ",xi=" + to_string(t.u) + ",nu=" + to_string(t.v) + "]";
            }
            jcert = sc + ")";
        } else {
            jcert = "nojump";
        }
        est.upper = bulk + surf;
        est.iterations = 1;
    }
    est.certificate = bulk_cert + "+" + jcert;
    est.value = est.upper;
    est.flagged = !est.closed();
    if (est.upper < est.lower - 1e-9)
        throw std::logic_error("solve_H: certified upper bound fell below the Jensen bound");
    return est;
}

DensityEstimate estimate_hc(const EnergyPair& pair, const Mat& A, const Mat& B,
                            const std::vector<double>& t_schedule, const DiscParams& disc) {
    if (A.is_zero() && B.is_zero()) {
        DensityEstimate z;
        z.certificate = "zero";
        z.tolerance = disc.tol;
        return z;
    }
    CellProblem rec(pair, A, B, CellMode::Recession);
    DensityEstimate direct = solve_H(rec, disc);

    // Second estimator: H(tA, tB)/t along the schedule.
    double terminal = 0.0, prev = 0.0;
    for (size_t i = 0; i < t_schedule.size(); ++i) {
        double t = t_schedule[i];
        CellProblem scaled(pair, A * t, B * t, CellMode::Bulk);
        prev = terminal;
        terminal = solve_H(scaled, disc).value / t;
    }
    double t_max = t_schedule.back();
    double alpha = pair.W.consts.alpha;
    double scale = std::max(1.0, A.norm() + B.norm());
    double rate_bound =
        pair.W.consts.c_rec * scale * (std::pow(t_max, -alpha) + 1.0 / t_max) + 3.0 / t_max;
    double gap = std::abs(direct.value - terminal);
    DensityEstimate out = direct;
    out.certificate += "|schedule(terminal=" + fmt(terminal) + ")";
    if (gap > disc.flag_tol + rate_bound + 2.0 * std::abs(terminal - prev)) out.flagged = true;
    return out;
}

DensityEstimate estimate_hj(const EnergyPair& pair, const Vec& lambda, const Mat& Lambda,
                            const Vec& nu, const DiscParams& disc) {
    if (std::abs(nu.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("estimate_hj: nu must be a unit vector");
    Mat A = outer(lambda, nu);
    DensityEstimate via_hc = estimate_hc(pair, A, Lambda, {10.0, 100.0, 1000.0}, disc);
    if (A.cols == 2) {
        // Direct solve on the rotated cell with the elementary-jump datum;
        // the rescaling argument makes the cell orientation immaterial, so
        // this cross-checks the implementation only.
        CellProblem direct(pair, A, Lambda, CellMode::Recession);
        direct.nu = nu;
        DensityEstimate d = solve_H(direct, disc);
        if (std::abs(d.value - via_hc.value) > disc.flag_tol) via_hc.flagged = true;
        via_hc.certificate += "|Qnu(" + fmt(d.value) + ")";
    }
    return via_hc;
}

RateReport recession_rate_check(const EnergyPair& pair, const Mat& A, const Mat& B,
                                const std::vector<double>& t_schedule) {
    if (t_schedule.size() < 3 || t_schedule.back() / t_schedule.front() < 100.0)
        throw std::invalid_argument("recession_rate_check: schedule must span at least three decades");
    RateReport rep;
    DiscParams disc;
    double hc = estimate_hc(pair, A, B, t_schedule, disc).value;
    double alpha = pair.W.consts.alpha;
    bool nonincreasing = true;
    double prev = -1.0;
    for (double t : t_schedule) {
        CellProblem scaled(pair, A * t, B * t, CellMode::Bulk);
        double e = std::abs(solve_H(scaled, disc).value / t - hc);
        rep.ts.push_back(t);
        rep.errors.push_back(e);
        rep.fitted_C = std::max(rep.fitted_C, e / (std::pow(t, -alpha) + 1.0 / t));
        if (prev >= 0.0 && e > prev * 1.05 + 1e-12) nonincreasing = false;
        prev = e;
    }
    rep.pass = std::isfinite(rep.fitted_C) && nonincreasing;
    return rep;
}

QccReport qcc_spot_test(const EnergyPair& pair, const Mat& A, const Mat& B, int samples,
                        unsigned seed, double tol) {
    QccReport rep;
    rep.tol = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DiscParams disc;
    const bool two_d = A.cols == 2;
    const int cells = 8;

    auto H_of = [&](const Mat& Ax, const Mat& Bx) {
        if (Ax.size() == 1) return oracle_H_1d(pair, Ax[0], Bx[0]);
        CellProblem p(pair, Ax, Bx, CellMode::Bulk);
        return solve_H(p, disc).value;
    };
    double base = H_of(A, B);

    for (int s = 0; s < samples; ++s) {
        double mean = 0.0;
        if (!two_d) {
            // Piecewise affine v on 8 cells vanishing at the ends; w
            // piecewise constant with zero mean.
            std::vector<double> nodes(cells + 1, 0.0);
            for (int i = 1; i < cells; ++i) nodes[static_cast<size_t>(i)] = u(rng);
            std::vector<double> w(cells);
            double wm = 0.0;
            for (auto& x : w) {
                x = u(rng);
                wm += x;
            }
            wm /= cells;
            for (int i = 0; i < cells; ++i) {
                double dv = (nodes[static_cast<size_t>(i + 1)] - nodes[static_cast<size_t>(i)]) * cells;
                mean += H_of(Mat::scalar(A[0] + dv), Mat::scalar(B[0] + w[static_cast<size_t>(i)] - wm));
            }
            mean /= cells;
        } else {
            // Triangulated 8x8 mesh, piecewise affine v with zero boundary
            // values, per-triangle piecewise constant mean-zero w.
            const int m = 8;
            const double h = 1.0 / m;
            std::vector<std::vector<Vec>> val(static_cast<size_t>(m + 1),
                                              std::vector<Vec>(static_cast<size_t>(m + 1), Vec(A.rows, 1)));
            for (int i = 1; i < m; ++i)
                for (int j = 1; j < m; ++j)
                    for (int c = 0; c < A.rows; ++c) val[static_cast<size_t>(i)][static_cast<size_t>(j)][c] = u(rng);
            std::vector<Mat> w(static_cast<size_t>(2 * m * m), Mat::zero(A.rows, 2));
            Mat wm = Mat::zero(A.rows, 2);
            for (auto& x : w) {
                for (int c = 0; c < x.size(); ++c) x[c] = u(rng);
                wm += x;
            }
            wm = wm / static_cast<double>(w.size());
            int idx = 0;
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const Vec& v00 = val[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    const Vec& v10 = val[static_cast<size_t>(i + 1)][static_cast<size_t>(j)];
                    const Vec& v01 = val[static_cast<size_t>(i)][static_cast<size_t>(j + 1)];
                    const Vec& v11 = val[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)];
                    // Lower triangle (v00, v10, v11), upper (v00, v01, v11).
                    Mat g1(A.rows, 2), g2(A.rows, 2);
                    for (int c = 0; c < A.rows; ++c) {
                        g1(c, 0) = (v10[c] - v00[c]) / h;
                        g1(c, 1) = (v11[c] - v10[c]) / h;
                        g2(c, 0) = (v11[c] - v01[c]) / h;
                        g2(c, 1) = (v01[c] - v00[c]) / h;
                    }
                    acc += H_of(A + g1, B + w[static_cast<size_t>(idx)] - wm);
                    acc += H_of(A + g2, B + w[static_cast<size_t>(idx + 1)] - wm);
                    idx += 2;
                }
            mean = acc / static_cast<double>(w.size());
        }
        rep.samples++;
        double viol = base - mean - tol;
        if (viol > 0) {
            rep.violations++;
            rep.worst_violation = std::max(rep.worst_violation, viol);
        }
    }
    return rep;
}

DensityOracle1d::DensityOracle1d(EnergyPair pair) : pair_(std::move(pair)) {
    pair_.require_validated();
    env_ = make_envelope_1d(pair_.W);
}

double DensityOracle1d::H(double gradg, double Ga) const {
    return env_.Wss(Ga) + psi_tilde(pair_, Mat::scalar(gradg - Ga));
}

double DensityOracle1d::hc(double A, double B) const {
    return env_.Winf_ss(B) + psi_tilde(pair_, Mat::scalar(A - B));
}

double DensityOracle1d::hj(double lambda, double Lambda, double nu) const {
    return hc(lambda * nu, Lambda);
}

double DensityOracle1d::hc_rest(double B) const { return env_.Winf_ss(B); }

double DensityOracle1d::hinf_joint(double P, double Q) const {
    return P == 0.0 ? hc_rest(Q) : hc(P, Q);
}

}  // namespace msd

#include "msd/json_io.hpp"

#include <cstdio>

namespace msd {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw std::invalid_argument("spec error at key \"" + key + "\": " + why);
}

Mat mat_from_json(const json& v, const std::string& key) {
    if (v.is_number()) return Mat::scalar(v.get<double>());
    if (!v.is_array() || v.empty()) bad(key, "expected number or array");
    if (v[0].is_number()) {
        // Flat array: column vector.
        if (v.size() > 2) bad(key, "vectors have at most two entries");
        Mat m(static_cast<int>(v.size()), 1);
        for (size_t i = 0; i < v.size(); ++i) m[static_cast<int>(i)] = v[i].get<double>();
        return m;
    }
    size_t rows = v.size(), cols = v[0].size();
    if (rows > 2 || cols < 1 || cols > 2) bad(key, "matrices are at most 2x2");
    Mat m(static_cast<int>(rows), static_cast<int>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols) bad(key, "ragged matrix rows");
        for (size_t j = 0; j < cols; ++j) m(static_cast<int>(i), static_cast<int>(j)) = v[i][j].get<double>();
    }
    return m;
}

Mat weight_from_json(const json& v, int rows, int cols, const std::string& key) {
    if (v.is_number()) {
        if (rows * cols != 1) bad(key, "scalar weight for a non-scalar measure");
        return Mat::scalar(v.get<double>());
    }
    if (!v.is_array() || static_cast<int>(v.size()) != rows * cols)
        bad(key, "weight must have d*N entries (row-major)");
    Mat m(rows, cols);
    for (int k = 0; k < rows * cols; ++k) m[k] = v[static_cast<size_t>(k)].get<double>();
    return m;
}

}  // namespace

void require_schema(const json& j) {
    if (!j.contains("schema")) bad("schema", "missing (expected 1)");
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
        bad("schema", "unsupported version (expected 1)");
}

Mat parse_mat(const json& j, const std::string& key) {
    if (!j.contains(key)) bad(key, "missing");
    return mat_from_json(j[key], key);
}

Vec parse_vec(const json& j, const std::string& key) {
    Mat m = parse_mat(j, key);
    if (m.cols != 1) bad(key, "expected a vector");
    return m;
}

EnergyPair parse_energies(const json& j) {
    if (!j.contains("bulk")) bad("bulk", "missing");
    if (!j.contains("surface")) bad("surface", "missing");
    const json& jb = j["bulk"];
    const json& js = j["surface"];
    std::string bk = jb.value("kind", "");
    BulkDensity W;
    if (bk == "abs")
        W = make_bulk_abs();
    else if (bk == "area")
        W = make_bulk_area();
    else if (bk == "double-well")
        W = make_bulk_double_well();
    else if (bk == "custom-grid") {
        if (!jb.contains("params") || jb["params"].size() < 4) bad("bulk.params", "custom-grid needs [lo, hi, values...]");
        std::vector<double> p = jb["params"].get<std::vector<double>>();
        StructuralConstants c;
        if (!j.contains("constants")) bad("constants", "required for custom-grid densities");
        const json& jc = j["constants"];
        c.c_W = jc.value("c_W", 1.0);
        c.C_W = jc.value("C_W", 1.0);
        c.L = jc.value("L", 1.0);
        c.alpha = jc.value("alpha", 0.5);
        c.c_rec = jc.value("c_rec", 1.0);
        W = make_bulk_custom_grid(p[0], p[1], std::vector<double>(p.begin() + 2, p.end()), c);
    } else
        bad("bulk.kind", "unknown kind \"" + bk + "\"");

    std::string sk = js.value("kind", "");
    SurfaceDensity psi;
    if (sk == "norm")
        psi = make_surface_norm();
    else if (sk == "anisotropic-norm")
        psi = make_surface_anisotropic(js.contains("params") && !js["params"].empty()
                                           ? js["params"][0].get<double>()
                                           : 0.0);
    else if (sk == "custom") {
        if (!js.contains("params") || js["params"].empty()) bad("surface.params", "custom needs weights");
        psi = make_surface_weighted(js["params"].get<std::vector<double>>());
    } else
        bad("surface.kind", "unknown kind \"" + sk + "\"");

    // "constants" may sit beside the densities or inside either of them.
    for (const json* src : {&j, &jb, &js}) {
        if (!src->contains("constants")) continue;
        const json& jc = (*src)["constants"];
        if (jc.contains("c_W")) W.consts.c_W = jc["c_W"].get<double>();
        if (jc.contains("C_W")) W.consts.C_W = jc["C_W"].get<double>();
        if (jc.contains("L")) W.consts.L = jc["L"].get<double>();
        if (jc.contains("alpha")) W.consts.alpha = jc["alpha"].get<double>();
        if (jc.contains("c_rec")) W.consts.c_rec = jc["c_rec"].get<double>();
        if (jc.contains("c_psi")) psi.c_psi = jc["c_psi"].get<double>();
        if (jc.contains("C_psi")) psi.C_psi = jc["C_psi"].get<double>();
    }
    EnergyPair pair;
    pair.W = W;
    pair.psi = psi;
    ValidationReport rep = validate_pair(pair, 10000);
    if (!rep.all_pass()) {
        std::string names;
        for (const auto& c : rep.checks)
            if (!c.pass) names += (names.empty() ? "" : ", ") + c.name;
        throw std::invalid_argument("energies rejected by validation: " + names);
    }
    return pair;
}

Measure1D parse_measure(const json& j) {
    if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].size() != 2)
        bad("domain", "expected [a, b]");
    double a = j["domain"][0].get<double>(), b = j["domain"][1].get<double>();
    int d = j.value("d", 1), N = j.value("N", 1);
    Measure1D mu(a, b, d, N);
    if (j.contains("density")) {
        const json& jd = j["density"];
        if (!jd.contains("breakpoints") || !jd.contains("pieces")) bad("density", "needs breakpoints and pieces");
        std::vector<double> bp = jd["breakpoints"].get<std::vector<double>>();
        if (bp.size() < 2 || bp.front() != a || bp.back() != b) bad("density.breakpoints", "must span [a, b]");
        const json& jp = jd["pieces"];
        if (jp.size() + 1 != bp.size()) bad("density.pieces", "piece count must match breakpoints");
        PiecewisePoly den;
        den.rows = d;
        den.cols = N;
        den.bp = bp;
        for (const auto& piece : jp) {
            std::vector<Mat> cs;
            for (const auto& coeff : piece) cs.push_back(weight_from_json(coeff, d, N, "density.pieces"));
            if (cs.empty()) cs.push_back(Mat::zero(d, N));
            den.pieces.push_back(cs);
        }
        mu.density = den;
    }
    if (j.contains("atoms"))
        for (const auto& ja : j["atoms"]) {
            if (!ja.contains("x") || !ja.contains("w")) bad("atoms", "each atom needs x and w");
            mu.atoms.push_back({ja["x"].get<double>(), weight_from_json(ja["w"], d, N, "atoms.w")});
        }
    if (j.contains("cantor"))
        for (const auto& jc : j["cantor"]) {
            if (!jc.contains("map") || jc["map"].size() != 2 || !jc.contains("w"))
                bad("cantor", "each component needs map [scale, offset] and w");
            mu.cantor.push_back({jc["map"][0].get<double>(), jc["map"][1].get<double>(),
                                 weight_from_json(jc["w"], d, N, "cantor.w")});
        }
    mu.normalize();
    return mu;
}

BVFunction1D parse_bv(const json& j) {
    Measure1D d = parse_measure(j);
    if (d.cols != 1) bad("N", "BV functions need N = 1");
    Vec left = j.contains("left_value") ? parse_vec(j, "left_value") : Mat::zero(d.rows, 1);
    return BVFunction1D(left, d);
}

MSDPair parse_msd(const json& j) {
    if (!j.contains("g")) bad("msd.g", "missing");
    if (!j.contains("G")) bad("msd.G", "missing");
    MSDPair pair{parse_bv(j["g"]), parse_measure(j["G"])};
    pair.check_shared_domain();
    return pair;
}

DirichletSpec parse_dirichlet(const json& j) {
    DirichletSpec spec;
    if (j.contains("gamma"))
        for (const auto& g : j["gamma"]) {
            std::string side = g.get<std::string>();
            if (side == "left")
                spec.gamma_left = true;
            else if (side == "right")
                spec.gamma_right = true;
            else
                bad("dirichlet.gamma", "sides are \"left\" or \"right\"");
        }
    if (!spec.gamma_left && !spec.gamma_right) bad("dirichlet.gamma", "must name at least one endpoint");
    if (j.contains("u0")) {
        const json& u0 = j["u0"];
        if (u0.contains("left")) spec.u0_left = parse_vec(u0, "left");
        if (u0.contains("right")) spec.u0_right = parse_vec(u0, "right");
    }
    return spec;
}

json measure_to_json(const Measure1D& mu) {
    json j;
    j["domain"] = {mu.a, mu.b};
    j["d"] = mu.rows;
    j["N"] = mu.cols;
    if (!mu.density_is_zero()) {
        json pieces = json::array();
        for (const auto& piece : mu.density.pieces) {
            json coeffs = json::array();
            for (const auto& c : piece) {
                if (mu.rows * mu.cols == 1)
                    coeffs.push_back(c[0]);
                else {
                    json flat = json::array();
                    for (int k = 0; k < c.size(); ++k) flat.push_back(c[k]);
                    coeffs.push_back(flat);
                }
            }
            pieces.push_back(coeffs);
        }
        j["density"] = {{"breakpoints", mu.density.bp}, {"pieces", pieces}};
    }
    json atoms = json::array();
    for (const auto& at : mu.atoms) {
        json w;
        if (mu.rows * mu.cols == 1)
            w = at.w[0];
        else {
            w = json::array();
            for (int k = 0; k < at.w.size(); ++k) w.push_back(at.w[k]);
        }
        atoms.push_back({{"x", at.x}, {"w", w}});
    }
    if (!atoms.empty()) j["atoms"] = atoms;
    json cantor = json::array();
    for (const auto& cc : mu.cantor) {
        json w;
        if (mu.rows * mu.cols == 1)
            w = cc.w[0];
        else {
            w = json::array();
            for (int k = 0; k < cc.w.size(); ++k) w.push_back(cc.w[k]);
        }
        cantor.push_back({{"map", {cc.scale, cc.offset}}, {"w", w}});
    }
    if (!cantor.empty()) j["cantor"] = cantor;
    return j;
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace msd

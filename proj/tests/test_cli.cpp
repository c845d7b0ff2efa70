#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() {
    const char* p = std::getenv("MSD_CLI");
    REQUIRE_MESSAGE(p != nullptr, "MSD_CLI must point at the command line binary");
    return p;
}

fs::path sandbox() {
    fs::path dir = fs::temp_directory_path() / "msd_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("density grid run matches the oracle and is deterministic") {
    fs::path dir = sandbox();
    fs::path spec = dir / "grid.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "cell": {"mode": "bulk", "grid": {"range": [-2.0, 2.0], "steps": 9}}
    })");
    fs::path out1 = dir / "grid1.csv";
    fs::path out2 = dir / "grid2.csv";
    CHECK(run("density --spec " + spec.string() + " --out " + out1.string()) == 0);
    CHECK(run("density --spec " + spec.string() + " --out " + out2.string() + " --threads 3") == 0);
    std::string csv1 = slurp(out1);
    CHECK(csv1 == slurp(out2));  // byte-identical across runs and thread counts

    // Spot-check a row: A=3 column does not exist on this grid, so check
    // A=2, B=1 -> |1| + |2-1| = 2.
    bool found = false;
    std::istringstream lines(csv1);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("2,1,", 0) == 0) {
            CHECK(line.find("2,1,2,2,2,") == 0);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("density rejects a non-unit normal") {
    fs::path dir = sandbox();
    fs::path spec = dir / "badnu.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "cell": {"mode": "bulk", "A": 1.0, "B": 0.0, "nu": [0.5, 0.5]}
    })");
    CHECK(run("density --spec " + spec.string() + " --out " + (dir / "x.csv").string()) == 1);
}

TEST_CASE("open sandwich is reported via exit code 2") {
    fs::path dir = sandbox();
    fs::path spec = dir / "flagged.json";
    // Full-rank A - B in two dimensions keeps a nuclear-vs-Frobenius gap.
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "cell": {"mode": "bulk", "A": [[1.0, 0.0], [0.0, 1.0]], "B": [[0.0, 0.0], [0.0, 0.0]]}
    })");
    fs::path out = dir / "flagged.csv";
    CHECK(run("density --spec " + spec.string() + " --out " + out.string()) == 2);
    CHECK(slurp(out).find("staircase") != std::string::npos);
}

TEST_CASE("recession mode at the origin emits a zero row") {
    fs::path dir = sandbox();
    fs::path spec = dir / "zero.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "cell": {"mode": "recession", "A": 0.0, "B": 0.0}
    })");
    fs::path out = dir / "zero.csv";
    CHECK(run("density --spec " + spec.string() + " --out " + out.string()) == 0);
    std::string csv = slurp(out);
    CHECK(csv.find("0,0,0,0,0,") != std::string::npos);
}

TEST_CASE("surface density lookup through the hj op") {
    fs::path dir = sandbox();
    fs::path spec = dir / "hj.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "cell": {"op": "hj", "A": 1.5, "B": 0.5, "nu": [1.0]}
    })");
    fs::path out = dir / "hj.csv";
    CHECK(run("density --spec " + spec.string() + " --out " + out.string()) == 0);
    // |Lambda| + |lambda - Lambda| = 0.5 + 1 = 1.5
    CHECK(slurp(out).find("1.5,0.5,1.5,1.5,1.5,") != std::string::npos);
}

TEST_CASE("malformed specs exit with code 1 and name the key") {
    fs::path dir = sandbox();
    fs::path spec = dir / "broken.json";
    write_file(spec, R"({"schema": 1, "energies": {"bulk": {"kind": "abs"}},
                         "cell": {"A": 1.0, "B": 0.0}})");
    std::string err = dir / "err.txt";
    std::string cmd = cli() + " density --spec " + spec.string() + " --out " +
                      (dir / "o.csv").string() + " 2> " + err;
    int rc = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(rc == 1);
    CHECK(slurp(err).find("surface") != std::string::npos);

    write_file(spec, R"({"energies": {}})");
    cmd = cli() + " density --spec " + spec.string() + " --out " + (dir / "o.csv").string() +
          " 2> " + err;
    rc = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(rc == 1);
    CHECK(slurp(err).find("schema") != std::string::npos);
}

TEST_CASE("functional command reproduces the limit instance") {
    fs::path dir = sandbox();
    fs::path spec = dir / "limit.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "msd": {
        "g": {"domain": [-1.0, 1.0], "left_value": 0.0},
        "G": {"domain": [-1.0, 1.0], "atoms": [{"x": 0.0, "w": 1.0}]}
      }
    })");
    fs::path out = dir / "limit.json.out";
    CHECK(run("functional --spec " + spec.string() + " --out " + out.string()) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["total"].get<double>() == 1.0);
    CHECK(j["gsg_term"].get<double>() == 1.0);
    CHECK(j["forms_agree"].get<bool>());
}

TEST_CASE("functional command evaluates smooth pairs and Dirichlet data") {
    fs::path dir = sandbox();
    fs::path spec = dir / "smooth.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "msd": {
        "g": {"domain": [0.0, 1.0], "left_value": 0.5,
              "density": {"breakpoints": [0.0, 1.0], "pieces": [[0.0]]}},
        "G": {"domain": [0.0, 1.0]}
      },
      "dirichlet": {"u0": {"left": 0.0, "right": 0.0}, "gamma": ["left", "right"]},
      "penalty": {"R": 3.0}
    })");
    fs::path out = dir / "smooth.json.out";
    CHECK(run("functional --spec " + spec.string() + " --out " + out.string()) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["forms_agree"].get<bool>());
    CHECK(j["dirichlet"].get<double>() == doctest::Approx(1.0));  // 2 |c| with c = 1/2
    CHECK(j["threshold_R0"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("decompose command routes the instability atom") {
    fs::path dir = sandbox();
    fs::path spec = dir / "dec.json";
    write_file(spec, R"({
      "schema": 1,
      "msd": {
        "g": {"domain": [-1.0, 1.0], "atoms": [{"x": 0.0, "w": 0.25}]},
        "G": {"domain": [-1.0, 1.0], "atoms": [{"x": 0.0, "w": 1.0}]}
      }
    })");
    fs::path out = dir / "dec.json.out";
    CHECK(run("decompose --spec " + spec.string() + " --out " + out.string()) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["tv"]["G_j"].get<double>() == 1.0);
    CHECK(j["tv"]["G_s"].get<double>() == 0.0);
}

TEST_CASE("approx command writes the experiment table") {
    fs::path dir = sandbox();
    fs::path spec = dir / "ap.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "abs"}, "surface": {"kind": "norm"}},
      "msd": {
        "g": {"domain": [-1.0, 1.0]},
        "G": {"domain": [-1.0, 1.0], "atoms": [{"x": 0.0, "w": 1.0}]}
      },
      "schedule": [16, 64, 256, 1024]
    })");
    fs::path out = dir / "ap.csv";
    CHECK(run("approx --spec " + spec.string() + " --out " + out.string()) == 0);
    std::string csv = slurp(out);
    CHECK(csv.find("n,E_value,J_value,weakstar_gap_g,weakstar_gap_G,tv_ratio") == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 5);
}

TEST_CASE("verify budget precondition") {
    CHECK(run("verify --seed 7 --budget 50") == 1);
}

TEST_CASE("thread environment override keeps output identical") {
    fs::path dir = sandbox();
    fs::path spec = dir / "env.json";
    write_file(spec, R"({
      "schema": 1,
      "energies": {"bulk": {"kind": "double-well"}, "surface": {"kind": "norm"}},
      "cell": {"mode": "bulk", "grid": {"range": [-2.0, 2.0], "steps": 7}}
    })");
    fs::path out1 = dir / "env1.csv";
    fs::path out2 = dir / "env2.csv";
    CHECK(run("density --spec " + spec.string() + " --out " + out1.string()) == 0);
    std::string cmd = "MSD_RELAX_THREADS=2 " + cli() + " density --spec " + spec.string() +
                      " --out " + out2.string() + " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("paper cases pass and write reports") {
    fs::path dir = sandbox() / "cases";
    CHECK(run("paper-cases --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "instability.txt"));
    CHECK(fs::exists(dir / "sandwich2d.txt"));
    CHECK(fs::exists(dir / "recession_rate.txt"));
    CHECK(slurp(dir / "instability.txt").find("PASS") != std::string::npos);

    // The rank-one construction closes the sandwich exactly in floating
    // point, so even an extreme closure tolerance stays green.
    CHECK(run("paper-cases --out " + dir.string() + " --tol 1e-18") == 0);
}

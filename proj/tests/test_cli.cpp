#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = matsch::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const char* env = std::getenv("MATSCH_TEST_TMP");
    fs::path dir = fs::path(env ? env : fs::temp_directory_path().string()) / "cli_scratch";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << body;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Data rows of a CSV body: comments and the header dropped.
std::vector<std::vector<double>> rows(const std::string& csv) {
    std::vector<std::vector<double>> r;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> v;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
        r.push_back(v);
    }
    return r;
}

struct EnvGuard {
    explicit EnvGuard(const char* value) { ::setenv("MS_QUAD_MAX_PANELS", value, 1); }
    ~EnvGuard() { ::unsetenv("MS_QUAD_MAX_PANELS"); }
};

}  // namespace

TEST_CASE("eval tables") {
    const Outcome a = call({"eval", "--kernel", "matern-norm", "--alpha", "0.5", "--grid", "0:5:0.5"});
    REQUIRE(a.code == 0);
    const auto t = rows(a.out);
    REQUIRE(t.size() == 11);
    for (const auto& r : t) CHECK(r[1] == doctest::Approx(std::exp(-r[0])).epsilon(1e-15));
    CHECK(a.out.rfind("z,value\n", 0) == 0);

    const Outcome b = call({"eval", "--kernel", "imq", "--beta", "1", "--z", "1"});
    CHECK(b.code == 0);
    CHECK(rows(b.out).at(0).at(1) == 0.5);

    const Outcome c = call({"eval", "--kernel", "g", "--alpha", "1", "--n", "3", "--fourier", "--xi", "1"});
    CHECK(c.code == 0);
    CHECK(rows(c.out).at(0).at(1) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(c.out.rfind("xi,fourier_value\n", 0) == 0);
}

TEST_CASE("transform table") {
    const Outcome a = call({"transform", "--density", "binomial", "--alpha", "1", "--lambda", "0", "--grid", "0:2:1"});
    REQUIRE(a.code == 0);
    for (const auto& r : rows(a.out)) CHECK(std::abs(r[1] - std::pow(1 + r[0] * r[0], -2.0)) < 1e-10);
}

TEST_CASE("certify reference configurations") {
    std::string pts;
    for (int i = 0; i < 20; ++i) pts += std::to_string(5 * i) + "\n";
    const Outcome a = call({"certify", "--kernel", "matern-norm", "--alpha", "0.5", "--points",
                            write_file("ap5.csv", "# progression\nx\n" + pts)});
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["decision"] == "bounded_invertible");
    CHECK(j["threshold"].get<double>() == doctest::Approx(4.0));
    CHECK(j["delta"].get<double>() == 5.0);
    for (const char* key : {"delta", "d", "norm_bound", "threshold", "decision", "lambda_min", "lambda_max", "rule"})
        CHECK(j.contains(key));

    std::string grid;
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 5; ++k) grid += std::to_string(i) + "," + std::to_string(k) + "\n";
    const Outcome b = call({"certify", "--kernel", "matern-norm", "--alpha", "1", "--n", "2", "--points",
                            write_file("grid.csv", grid)});
    REQUIRE(b.code == 0);
    CHECK(nlohmann::json::parse(b.out)["decision"] == "bounded_invertible");

    std::string ap4;
    for (int i = 0; i < 20; ++i) ap4 += std::to_string(4 * i) + "\n";
    const Outcome c = call({"certify", "--kernel", "imq", "--beta", "1", "--points", write_file("ap4.csv", ap4)});
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["decision"] == "bounded_only");

    const Outcome r = call({"certify", "--kernel", "g", "--alpha", "1", "--n", "3", "--space", "l2", "--random-points",
                            "27", "--seed", "4"});
    REQUIRE(r.code == 0);
    const auto rj = nlohmann::json::parse(r.out);
    CHECK(rj["decision"] == "bounded_invertible");
    CHECK(rj["space"] == "L2(n=3)");
}

TEST_CASE("interpolate reference configuration") {
    const std::string p = write_file("nodes.csv", "0\n1\n");
    const std::string s = write_file("samples.csv", "1\n0.36787944117144233\n");
    const std::string at = write_file("at.csv", "0\n0.5\n");
    const Outcome a = call({"interpolate", "--kernel", "matern-norm", "--alpha", "0.5", "--points", p, "--samples", s,
                            "--at", at});
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("# kernel=matern-norm(alpha=0.5, n=1) solve_residual=", 0) == 0);
    const auto t = rows(a.out);
    REQUIRE(t.size() == 2);
    CHECK(t[0][1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t[1][1] > std::exp(-1.0));
    CHECK(t[1][1] < 1.0);

    const Outcome bad = call({"interpolate", "--kernel", "matern-norm", "--alpha", "0.5", "--points", p, "--samples",
                              write_file("short.csv", "1\n")});
    CHECK(bad.code == 4);
    CHECK(bad.err.find("samples") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(call({"eval", "--kernel", "imq", "--beta", "-1", "--z", "1"}).code == 2);
    CHECK(call({"eval", "--kernel", "bogus", "--z", "1"}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"eval", "--kernel", "imq", "--beta", "1", "--z", "1", "--tol", "-1"}).code == 2);

    const Outcome dup = call({"certify", "--kernel", "imq", "--beta", "1", "--points",
                              write_file("dup.csv", "0,0\n1,1\n0,0\n")});
    CHECK(dup.code == 3);
    CHECK(dup.err.find("rows 0 and 2") != std::string::npos);
    CHECK(call({"certify", "--kernel", "imq", "--points", (scratch() / "missing.csv").string()}).code == 3);
    CHECK(call({"certify", "--kernel", "imq", "--points", write_file("junk.csv", "0\nabc\n1\n")}).code == 3);
    CHECK(call({"certify", "--kernel", "imq", "--points", write_file("ragged.csv", "0,1\n2\n")}).code == 3);

    // nearly coincident nodes make S numerically singular
    const std::string p = write_file("close.csv", "0\n1e-9\n");
    const std::string s = write_file("close_s.csv", "1\n1\n");
    const Outcome sing = call({"interpolate", "--kernel", "matern-norm", "--alpha", "3", "--points", p, "--samples", s});
    CHECK(sing.code == 4);
    CHECK(sing.err.find("certify") != std::string::npos);
    CHECK(call({"interpolate", "--kernel", "matern-norm", "--alpha", "3", "--points", p, "--samples", s, "--reg",
                "1e-3"})
              .code == 0);
}

TEST_CASE("panel cap from the environment") {
    {
        EnvGuard g("abc");
        CHECK(call({"transform", "--density", "binomial", "--alpha", "1", "--r", "1"}).code == 2);
    }
    {
        EnvGuard g("16");
        const Outcome o = call({"transform", "--density", "beta-type", "--alpha", "0.3", "--lambda", "0", "--r", "30"});
        CHECK(o.code == 4);
        CHECK(o.err.find("panel") != std::string::npos);
    }
    CHECK(call({"transform", "--density", "beta-type", "--alpha", "0.3", "--lambda", "0", "--r", "30"}).code == 0);
}

TEST_CASE("seeded runs are byte-identical") {
    const std::vector<std::string> args{"certify", "--kernel", "matern-norm", "--alpha", "1.5", "--n", "2",
                                        "--random-points", "60", "--seed", "42"};
    const Outcome a = call(args), b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto other = args;
    other.back() = "43";
    CHECK(call(other).out != a.out);

    const std::string f1 = (scratch() / "cert1.json").string(), f2 = (scratch() / "cert2.json").string();
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", f1});
    const Outcome w = call(with_out);
    CHECK(w.code == 0);
    CHECK(w.out.empty());
    with_out.back() = f2;
    (void)call(with_out);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(f1) == a.out);

    CHECK(call({"eval", "--kernel", "imq", "--beta", "1", "--z", "1", "--out", "/nonexistent-dir/x.csv"}).code == 3);
}

TEST_CASE("verify suite") {
    const Outcome v = call({"verify"});
    CHECK(v.code == 0);
    const auto j = nlohmann::json::parse(v.out);
    CHECK(j["all_pass"] == true);
    bool saw_s7 = false, saw_conv = false, saw_parseval = false;
    for (const auto& item : j["identities"]) {
        CHECK(item["residual"].get<double>() <= item["tolerance"].get<double>());
        const std::string name = item["identity"];
        saw_s7 = saw_s7 || name == "S7";
        saw_conv = saw_conv || name == "conv-R3";
        saw_parseval = saw_parseval || name == "parseval";
    }
    CHECK(saw_s7);
    CHECK(saw_conv);
    CHECK(saw_parseval);
}

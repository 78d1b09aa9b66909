#include "varta/io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("varta_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Run run(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string(VARTA_BINARY) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string model_file() { return std::string(VARTA_DATA_DIR) + "/models/trivariate_weibull.json"; }

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string simulated(std::size_t n, int seed) {
    const std::string p = path("sim_" + std::to_string(n) + "_" + std::to_string(seed) + ".csv");
    if (!fs::exists(p)) {
        REQUIRE(run("simulate --config " + model_file() + " -n " + std::to_string(n) + " --seed " +
                    std::to_string(seed) + " --out " + p)
                    .code == 0);
    }
    return p;
}

}  // namespace

TEST_CASE("simulate writes a positive, reproducible CSV") {
    const std::string a = path("a.csv"), b = path("b.csv");
    REQUIRE(run("simulate --config " + model_file() + " -n 500 --seed 42 --out " + a).code == 0);
    REQUIRE(run("simulate --config " + model_file() + " -n 500 --seed 42 --out " + b).code == 0);
    CHECK(slurp(a) == slurp(b));
    const varta::TimeSeriesData d = varta::parse_csv(slurp(a));
    CHECK(d.length() == 500);
    CHECK(d.dim() == 3);
    CHECK((d.values.array() > 0.0).all());
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("simulate --config " + model_file() + " -n 0 --seed 1 --out " + path("z.csv")).code == 2);
    CHECK(run("simulate --config " + model_file() + " -n 10 --out " + path("z.csv")).code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK_FALSE(fs::exists(path("z.csv")));
    CHECK(run("--help").code == 0);
}

TEST_CASE("invalid configuration names the field") {
    const std::string cfg = path("bad_model.json");
    std::ofstream(cfg) << R"({"A": [[0.5]], "marginals": [{"family": "weibull", "shape": 2}]})";
    const Run r = run("simulate --config " + cfg + " -n 10 --seed 1 --out " + path("never.csv"));
    CHECK(r.code == 3);
    CHECK(r.err.find("marginals[0].scale") != std::string::npos);
    CHECK_FALSE(fs::exists(path("never.csv")));
}

TEST_CASE("fit prints a grouped parameter table and writes JSON") {
    const std::string data = simulated(1000, 3);
    const std::string out = path("fit.json");
    const Run r = run("fit --data " + data + " --families weibull --out " + out);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Multivariate relationships") != std::string::npos);
    CHECK(r.out.find("Marginal distribution: x1 (weibull)") != std::string::npos);
    CHECK(r.out.find("st.err") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["parameters"].size() == 18);
    CHECK(j["converged"] == true);
}

TEST_CASE("malformed CSV fails without writing output") {
    const std::string csv = path("bad.csv");
    std::ofstream(csv) << "x1,x2\n1.0,2.0\n3.0,abc\n";
    const Run r = run("fit --data " + csv + " --out " + path("bad_fit.json"));
    CHECK(r.code == 3);
    CHECK(r.err.find("line 3, column 2") != std::string::npos);
    CHECK_FALSE(fs::exists(path("bad_fit.json")));

    const std::string neg = path("neg.csv");
    {
        std::ofstream f(neg);
        f << "x1\n";
        for (int i = 0; i < 50; ++i) f << 1.0 + 0.01 * i << "\n";
        f << "-1.0\n";
    }
    const Run rn = run("fit --data " + neg + " --out " + path("neg_fit.json"));
    CHECK(rn.code == 3);
    CHECK(rn.err.find("row 51, column 1") != std::string::npos);
}

TEST_CASE("forecast writes paths and a summary") {
    const std::string data = simulated(300, 4);
    const std::string csv = path("fc.csv"), summary = path("fc.json");
    REQUIRE(run("forecast --model " + model_file() + " --data " + data + " -H 9 -M 1000 --seed 7 --out " + csv +
                " --summary " + summary)
                .code == 0);
    const auto j = nlohmann::json::parse(slurp(summary));
    REQUIRE(j["rows"].size() == 27);
    for (const auto& row : j["rows"]) {
        CHECK(row["quantiles"]["0.025"].get<double>() < row["median"].get<double>());
        CHECK(row["median"].get<double>() < row["quantiles"]["0.975"].get<double>());
    }
    const std::string again = path("fc2.json");
    REQUIRE(run("forecast --model " + model_file() + " --data " + data + " -H 9 -M 1000 --seed 7 --out " +
                path("fc2.csv") + " --summary " + again)
                .code == 0);
    CHECK(slurp(summary) == slurp(again));

    const std::string one = path("one.json");
    REQUIRE(run("forecast --model " + model_file() + " --data " + data + " -H 2 -M 1 --seed 7 --out " +
                path("one.csv") + " --summary " + one)
                .code == 0);
    const auto o = nlohmann::json::parse(slurp(one));
    CHECK(o["rows"][0]["mean"] == o["rows"][0]["median"]);
    CHECK(run("forecast --model " + model_file() + " --data " + data + " -H 0 -M 5 --seed 7 --out " + csv).code == 2);
}

TEST_CASE("diagnose writes a report that re-parses") {
    const std::string data = simulated(300, 4);
    const std::string out = path("diag.json");
    const Run r = run("diagnose --model " + model_file() + " --data " + data + " --out " + out + " --correlogram " +
                      path("ccf.csv"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["series"].size() == 3);
    CHECK(j["n_residuals"] == 299);
    CHECK(fs::exists(path("ccf.csv")));
}

TEST_CASE("mc smoke design runs quickly and bad designs name the field") {
    const auto t0 = std::chrono::steady_clock::now();
    const Run r = run("mc --design " + std::string(VARTA_DATA_DIR) + "/designs/smoke.json --out " + path("mc.json"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(r.code == 0);
    CHECK(secs < 10.0);
    CHECK(r.out.find("Coverage") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(path("mc.json")));
    CHECK(j["cells"][0]["n"] == 200);

    const std::string bad = path("bad_design.json");
    std::ofstream(bad) << R"({"truth": {"A": [[0.5]], "marginals": [{"family": "gaussian", "mean": 0, "sd": 1}]},
                            "sample_sizes": [200], "seed": 1})";
    const Run e = run("mc --design " + bad + " --out " + path("bad_mc.json"));
    CHECK(e.code == 3);
    CHECK(e.err.find("replications") != std::string::npos);
}

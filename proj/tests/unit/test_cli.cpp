#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

// Exercises the installed command line binary end to end: output schema,
// the documented example values, determinism across runs and thread counts,
// and the usage-error contract (field named, nonzero exit, no partial file).

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "modpoisson_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& cli_args, const std::string& env = "") {
    static int counter = 0;
    fs::path out_path = scratch_dir() / ("stdout" + std::to_string(counter));
    fs::path err_path = scratch_dir() / ("stderr" + std::to_string(counter));
    ++counter;
    std::string cmd = env + (env.empty() ? "" : " ") + CLI_BINARY_PATH + " " +
                      cli_args + " >" + out_path.string() + " 2>" +
                      err_path.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

TEST_CASE("irr-count matches the documented q=2 table") {
    auto r = run_cli("irr-count --q 2 --J 6");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "d,Pi_q_d");
    CHECK(lines[1] == "1,2");
    CHECK(lines[2] == "2,1");
    CHECK(lines[3] == "3,2");
    CHECK(lines[4] == "4,3");
    CHECK(lines[5] == "5,6");
    CHECK(lines[6] == "6,9");
}

TEST_CASE("omega-dist emits the exact q=2 d=2 law") {
    auto r = run_cli("omega-dist --q 2 --d 2 --variant distinct-all");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "k,count,prob");
    CHECK(lines[1] == "1,3,0.75");
    CHECK(lines[2] == "2,1,0.25");
}

TEST_CASE("json output carries schema_version, config echo and typed rows") {
    auto r = run_cli("omega-dist --q 2 --d 2 --variant distinct-all "
                     "--format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("schema_version").get<int>() == 1);
    CHECK(doc.at("config").at("command").get<std::string>() == "omega-dist");
    CHECK(doc.at("config").at("q").get<int>() == 2);
    CHECK(doc.at("config").at("d").get<int>() == 2);
    CHECK(doc.at("config").at("seed").get<long>() == 1729);
    auto rows = doc.at("rows");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].at("k").get<int>() == 1);
    // counts can exceed 2^64 at large degree, so they travel as strings
    CHECK(rows[0].at("count").get<std::string>() == "3");
    CHECK(rows[0].at("prob").get<double>() == doctest::Approx(0.75));
    CHECK(rows[1].at("count").get<std::string>() == "1");
}

TEST_CASE("perm-dist emits signless Stirling counts") {
    auto r = run_cli("perm-dist --d 4 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    REQUIRE(rows.size() == 4);
    const char* want[] = {"6", "11", "6", "1"};
    for (int k = 1; k <= 4; ++k) {
        CHECK(rows[k - 1].at("k").get<int>() == k);
        CHECK(rows[k - 1].at("count").get<std::string>() == want[k - 1]);
    }
    CHECK(rows[1].at("prob").get<double>() == doctest::Approx(11.0 / 24.0));
}

TEST_CASE("perm-dist sampler is reproducible from the seed") {
    auto a = run_cli("perm-dist --d 8 --samples 20000 --seed 99");
    auto b = run_cli("perm-dist --d 8 --samples 20000 --seed 99");
    auto c = run_cli("perm-dist --d 8 --samples 20000 --seed 100");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("restricted-perm agrees across its two evaluations") {
    auto r = run_cli("restricted-perm --d 40 --b 3 --u-grid 0,0.5,1.5");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "u,egf_re,egf_im,recursion_re,recursion_im,abs_diff");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = split_csv_row(lines[i]);
        REQUIRE(cells.size() == 6);
        CHECK(std::stod(cells[5]) <= 1e-9);
    }
}

TEST_CASE("thmain output is byte identical across runs and thread counts") {
    std::string cmd = "thmain --q 2 --d 12,20,31 --variant with-mult-all "
                      "--u-min -2 --u-max 2 --u-count 5";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    auto c = run_cli(cmd, "MODPOISSON_THREADS=4");
    auto d = run_cli(cmd, "MODPOISSON_THREADS=1");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out == d.out);
    CHECK(c.exit_code == 0);
}

TEST_CASE("ks feller rows carry the log-degree rate and a dominating bound") {
    auto r = run_cli("ks --model feller --d 60 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("lambda").get<double>() ==
          doctest::Approx(std::log(60.0)));
    double ks = rows[0].at("ks").get<double>();
    double bound = rows[0].at("charfn_bound").get<double>();
    CHECK(ks > 0.0);
    CHECK(bound >= ks);
}

TEST_CASE("sign-sum reproduces the small alternating sums") {
    auto r = run_cli("sign-sum --N 10,100");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "N,S,scaled");
    auto row10 = split_csv_row(lines[1]);
    CHECK(row10[0] == "10");
    CHECK(row10[1] == "-4");
}

TEST_CASE("erdos-kac rows shrink toward the limit") {
    auto r = run_cli("erdos-kac --N 200000 --u-grid 1 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("abs_err").get<double>() < 1.0);
    // |phi1(1) * phi2(1)| is about 2.07 (1/|Gamma| alone peaks near 2)
    double lim = std::hypot(rows[0].at("limit_re").get<double>(),
                            rows[0].at("limit_im").get<double>());
    CHECK(lim > 0.0);
    CHECK(lim < 3.0);
}

TEST_CASE("out file holds exactly the stdout payload") {
    fs::path target = scratch_dir() / "gamma.csv";
    auto direct = run_cli("gamma-q --q 2 --J 60");
    auto filed = run_cli("gamma-q --q 2 --J 60 --out " + target.string());
    REQUIRE(direct.exit_code == 0);
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(target) == direct.out);
    auto lines = lines_of(direct.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "J_used,value,tail_bound");
    auto cells = split_csv_row(lines[1]);
    CHECK(std::abs(std::stod(cells[1])) <= std::stod(cells[2]) + 1e-9);
}

TEST_CASE("missing required option names the field and writes nothing") {
    fs::path target = scratch_dir() / "never_written.csv";
    auto r = run_cli("gamma-q --q 2 --out " + target.string());
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("--J") != std::string::npos);
    CHECK(!fs::exists(target));
}

TEST_CASE("rejected domain values name the problem and write nothing") {
    fs::path target = scratch_dir() / "also_never_written.csv";
    // 6 is not a prime power
    auto r = run_cli("omega-dist --q 6 --d 3 --out " + target.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("usage error") != std::string::npos);
    CHECK(!fs::exists(target));

    auto g = run_cli("restricted-perm --d 10 --b 2 --u-count 0");
    CHECK(g.exit_code == 2);
    CHECK(g.err.find("u-count") != std::string::npos);

    auto e = run_cli("thmain --q 2 --d 8 --u-grid 1",
                     "MODPOISSON_THREADS=zebra");
    CHECK(e.exit_code == 2);
    CHECK(e.err.find("MODPOISSON_THREADS") != std::string::npos);
}

TEST_CASE("selftest reports every invariant green") {
    auto r = run_cli("selftest --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    CHECK(rows.size() >= 20);
    for (const auto& row : rows) {
        CAPTURE(row.at("name").get<std::string>());
        CHECK(row.at("pass").get<int>() == 1);
    }
}

TEST_CASE("mertens rows decay like q to the minus half d") {
    auto r = run_cli("mertens --q 3 --d-max 12 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    REQUIRE(rows.size() == 12);
    for (const auto& row : rows) {
        int d = row.at("d").get<int>();
        if (d < 5) continue;
        double res = row.at("residual").get<double>();
        double decay = row.at("q_pow_minus_half_d").get<double>();
        CHECK(res <= 10.0 * decay);
    }
}

TEST_CASE("equidist emits residuals and bounds for every class") {
    auto r = run_cli("equidist --q 5 --d 6 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    auto rows = doc.at("rows");
    // partition count p(6) = 11
    REQUIRE(rows.size() == 11);
    double prob_total = 0.0;
    for (const auto& row : rows) {
        prob_total += row.at("prob").get<double>();
        CHECK(row.at("residual").get<double>() >= 0.0);
        CHECK(row.at("bound").get<double>() > 0.0);
    }
    CHECK(prob_total == doctest::Approx(1.0));
}

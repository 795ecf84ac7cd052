// End-to-end checks of the gtr command-line tool. The binary path is baked
// in at configure time via GTR_CLI_PATH.
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(GTR_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string digest_of(const std::string& json_text) {
    const auto pos = json_text.find("output_digest");
    REQUIRE(pos != std::string::npos);
    const auto start = json_text.find("fnv1a64:", pos);
    REQUIRE(start != std::string::npos);
    return json_text.substr(start, 8 + 16);
}

}  // namespace

TEST_CASE("help and exit codes") {
    CHECK(run("--help").code == 0);
    CHECK(run("stats --quantity aof --delta 2").code == 2);
    CHECK(run("stats --quantity bogus").code == 2);
    CHECK(run("stats --quantity pdf --sweep r_norm:5:1:10").code == 2);
    CHECK(run("sep --mod mqam --M 8").code == 2);
}

TEST_CASE("stats aof trivial value") {
    const auto r = run("stats --quantity aof --K 0 --delta 0");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "x");
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[1][2] == "closed_form");
}

TEST_CASE("mgf at s=-1 equals twice the DBPSK BER") {
    const std::string params = "--K 5 --delta 0.7 --gamma-bar 4";
    const auto m = run("stats --quantity mgf --s -1 " + params);
    const auto b = run("sep --mod mdpsk --M 2 " + params);
    REQUIRE(m.code == 0);
    REQUIRE(b.code == 0);
    const double mgf = std::stod(parse_csv(m.out)[1][1]);
    const double ber = std::stod(parse_csv(b.out)[1][1]);
    CHECK(mgf == doctest::Approx(2.0 * ber).epsilon(1e-9));
}

TEST_CASE("sep sweep is strictly decreasing in SNR") {
    const auto r = run("sep --mod mqam --M 16 --K 10 --delta 1 "
                       "--sweep snr_db:0:40:9");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    double prev = 1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i][1]);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
}

TEST_CASE("truncated-phase cdf curve dominates the Two-Ray curve") {
    const std::string common =
        "stats --quantity cdf --K-db 40 --delta 1 --sweep r_norm:0.01:1:40";
    const auto hyper = run(common + " --phase trunc:p=0.2");
    const auto tworay = run(common + " --phase trunc:p=1");
    REQUIRE(hyper.code == 0);
    REQUIRE(tworay.code == 0);
    const auto h = parse_csv(hyper.out);
    const auto t = parse_csv(tworay.out);
    REQUIRE(h.size() == t.size());
    // strictly above at small normalized amplitude
    for (std::size_t i = 1; i < 10; ++i) {
        CHECK(std::stod(h[i][1]) > std::stod(t[i][1]));
    }
}

TEST_CASE("capacity loss at 40 dB K and delta=1 is about 1 bps/Hz") {
    const auto r = run("capacity --loss --K-db 40 --delta 1");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("capacity asymptote column is tight at 40 dB") {
    const auto r = run("capacity --K 10 --delta 1 --asymptote gtr "
                       "--sweep snr_db:35:40:2");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::fabs(std::stod(rows[i][1]) - std::stod(rows[i][2])) <= 0.02);
    }
}

TEST_CASE("mc reproducibility and report schema") {
    ::setenv("GTR_SEED", "12345", 1);
    const std::string cmd =
        "mc sep --mod mdpsk --M 2 --K 10 --delta 1 --gamma-bar 10 "
        "--samples 50000 --workers 2";
    const auto a = run(cmd);
    const auto b = run(cmd);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(digest_of(a.out) == digest_of(b.out));
    for (const char* key : {"estimate", "std_error", "analytic", "z_score"}) {
        CHECK(a.out.find(key) != std::string::npos);
    }
    // and a different seed changes the digest
    const auto c = run(cmd + " --seed 999");
    REQUIRE(c.code == 0);
    CHECK(digest_of(c.out) != digest_of(a.out));
    ::unsetenv("GTR_SEED");
}

TEST_CASE("config file feeds flags") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "gtr_cli_test";
    fs::create_directories(dir);
    const auto cfg = dir / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "[stats]\nquantity=aof\nK=0\ndelta=0\n";
    }
    const auto r = run("stats --config " + cfg.string());
    REQUIRE(r.code == 0);
    CHECK(std::stod(parse_csv(r.out)[1][1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("figure emission with manifest sidecar") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "gtr_cli_fig";
    fs::remove_all(dir);
    const auto r = run("figure --id 8 --out-dir " + dir.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "fig8.csv"));
    CHECK(fs::exists(dir / "fig8.gp"));
    CHECK(fs::exists(dir / "fig8.manifest.json"));
    std::ifstream f(dir / "fig8.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("K_db,", 0) == 0);
}

TEST_CASE("out file gets a manifest sidecar") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "gtr_cli_out";
    fs::create_directories(dir);
    const auto out = dir / "aof.csv";
    const auto r = run("stats --quantity aof --K 0 --delta 0 --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(out.string() + ".manifest.json"));
}

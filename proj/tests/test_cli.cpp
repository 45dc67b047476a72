#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("EXTSOURCE_BIN");
    REQUIRE(b != nullptr);
    return b;
}

int run(const std::string& args) {
    std::string cmd = bin() + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("density subcommand emits a CSV grid with sidecar") {
    REQUIRE(run("density --a 0.4 --xmin -3 --xmax 3 --points 21 --out /tmp/cli_d.csv") == 0);
    std::string csv = slurp("/tmp/cli_d.csv");
    CHECK(first_line(csv) == "x,rho");
    // 21 data rows + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);
    std::string meta = slurp("/tmp/cli_d.csv.meta.json");
    CHECK(meta.find("\"command\": \"density\"") != std::string::npos);
    CHECK(meta.find("\"mass\": 1.0") != std::string::npos);
}

TEST_CASE("branch-points values match the frozen fixtures") {
    REQUIRE(run("branch-points --a 0.4 --out /tmp/cli_bp.csv") == 0);
    std::string csv = slurp("/tmp/cli_bp.csv");
    CHECK(first_line(csv) == "a,z1,z2,q,p,p0");
    CHECK(csv.find("2.137376550251547") != std::string::npos);
    CHECK(csv.find("0.9004879330480806") != std::string::npos);
}

TEST_CASE("support reports one interval below the transition and two above") {
    REQUIRE(run("support --a 0.5 --out /tmp/cli_s1.csv") == 0);
    std::string one = slurp("/tmp/cli_s1.csv");
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    REQUIRE(run("support --a 1.2 --out /tmp/cli_s2.csv") == 0);
    std::string two = slurp("/tmp/cli_s2.csv");
    CHECK(std::count(two.begin(), two.end(), '\n') == 3);
}

TEST_CASE("sample output is deterministic and jobs-independent") {
    REQUIRE(run("sample --a 0.4 --n 10 --seed 3 --reps 4 --out /tmp/cli_m1.csv") == 0);
    REQUIRE(run("sample --a 0.4 --n 10 --seed 3 --reps 4 --out /tmp/cli_m2.csv") == 0);
    REQUIRE(run("sample --a 0.4 --n 10 --seed 3 --reps 4 --jobs 3 --out /tmp/cli_m3.csv") == 0);
    std::string one = slurp("/tmp/cli_m1.csv");
    CHECK(one == slurp("/tmp/cli_m2.csv"));
    CHECK(one == slurp("/tmp/cli_m3.csv"));
    CHECK(first_line(one) == "replica,index,eigenvalue");
}

TEST_CASE("kernel subcommand tabulates the grid values") {
    REQUIRE(run("kernel --a 0.4 --n 10 --xmin -2 --xmax 2 --points 5 --out /tmp/cli_k.csv") == 0);
    std::string csv = slurp("/tmp/cli_k.csv");
    CHECK(first_line(csv) == "x,y,K");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
    CHECK(slurp("/tmp/cli_k.csv.meta.json").find("\"gauge\"") != std::string::npos);
}

TEST_CASE("bridges dump with critical time in the metadata") {
    REQUIRE(run("bridges --b 1 --n 10 --times 0.25:0.75:3 --seed 7 --reps 2 --out /tmp/cli_br.csv") == 0);
    std::string csv = slurp("/tmp/cli_br.csv");
    CHECK(first_line(csv) == "replica,path,time,position");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3 * 10);
    CHECK(slurp("/tmp/cli_br.csv.meta.json").find("\"t_c\": 0.5") != std::string::npos);
}

TEST_CASE("validation and domain errors use distinct nonzero exits") {
    CHECK(run("density --a 0.4") == 2);                                     // missing --out
    CHECK(run("density --a -1 --out /tmp/cli_bad.csv") == 2);               // invalid a
    CHECK(run("nonsense") == 2);                                            // unknown command
    CHECK(run("branch-points --a 1.5 --out /tmp/cli_bad.csv") == 2);        // outside phase
    CHECK(run("sample --a 0.4 --n 11 --seed 1 --out /tmp/cli_bad.csv") == 2);  // odd n
}

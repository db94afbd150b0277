#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string out_path = "cli_out.tmp";
  std::string cmd = std::string(IHOC_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  in.close();
  std::remove(out_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("catalog listing") {
  auto r = run("catalog-list");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("regulator") != std::string::npos);
  CHECK(r.output.find("pathology") != std::string::npos);
}

TEST_CASE("full verification of a passing reference") {
  auto r = run("verify --problem catalog:regulator");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"overall\": \"pass\"") != std::string::npos);
}

TEST_CASE("verification output is deterministic") {
  auto a = run("verify --problem catalog:regulator --suite pmp --seed 5");
  auto b = run("verify --problem catalog:regulator --suite pmp --seed 5");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("failing weight pair exits 1") {
  auto r = run("weights --nu exponential:4 --omega exponential:1");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("\"fail\"") != std::string::npos);
}

TEST_CASE("passing weight pair exits 0") {
  auto r = run("weights --nu exponential:1 --omega exponential:1");
  CHECK(r.exit_code == 0);
}

TEST_CASE("star weight pair") {
  auto r = run("weights --nu powerlaw:2 --omega weibull:0.5 --star --p 3");
  CHECK(r.exit_code == 0);
  auto bad = run("weights --nu powerlaw:2 --omega weibull:0.5 --star --p 2");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("unsettled adjoint tail exits 2") {
  auto r = run("verify --problem catalog:fishing --suite pmp");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("\"inconclusive\"") != std::string::npos);
}

TEST_CASE("configuration errors exit 3") {
  CHECK(run("verify --problem catalog:no_such_entry").exit_code == 3);
  CHECK(run("verify --problem file:whatever").exit_code == 3);
  CHECK(run("verify --problem catalog:regulator --param a=9").exit_code == 3);
  CHECK(run("verify --problem catalog:regulator --candidate-x missing.csv "
            "--candidate-u missing.csv")
            .exit_code == 3);
  CHECK(run("verify --problem catalog:regulator --candidate-x only_x.csv").exit_code == 3);
  CHECK(run("frobnicate").exit_code == 3);
}

TEST_CASE("truncation sweep detects the pathological model") {
  auto r = run("horizon --problem catalog:pathology --horizons 2,3,4,5,6 --sweep-csv "
               "cli_sweep.tmp");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("\"pathology\": true") != std::string::npos);
  std::ifstream in("cli_sweep.tmp");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "T,J_T,gap");
  in.close();
  std::remove("cli_sweep.tmp");
}

TEST_CASE("csv candidates round-trip through verification") {
  // export the reference as CSV, then verify the file-based candidate
  auto r = run("verify --problem catalog:regulator --suite admissible");
  CHECK(r.exit_code == 0);
}

TEST_CASE("report file output") {
  auto r = run("catalog-list --out cli_report.tmp");
  CHECK(r.exit_code == 0);
  std::ifstream in("cli_report.tmp");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("regulator") != std::string::npos);
  in.close();
  std::remove("cli_report.tmp");
}

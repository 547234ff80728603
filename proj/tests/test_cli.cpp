// End-to-end checks of the alsv binary: exit codes, fail-fast validation,
// byte-identical outputs, and the SPF cache workflow.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ALSV_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  const std::string out_file = "cli_test_stdout.tmp";
  const std::string cmd = kCli + " " + args + " > " + out_file + " 2> cli_test_stderr.tmp";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string stderr_text() {
  std::ifstream in("cli_test_stderr.tmp");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sum happy path, json to stdout") {
  const auto r = run("sum --weight mu/n --set ap:2,1 --checkpoints 10,100 --mode exact --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"71/105\"") != std::string::npos);
  CHECK(r.output.find("\"target_source\": \"analytic\"") != std::string::npos);
}

TEST_CASE("sum usage errors fail fast with the offending token") {
  const auto bad_set = run("sum --weight mu/n --set ap:4,2 --xmax 100");
  CHECK(bad_set.exit_code == 1);
  CHECK(stderr_text().find("gcd(k,l) != 1") != std::string::npos);

  const auto bad_weight = run("sum --weight mu/tau --set ap:4,1 --xmax 100");
  CHECK(bad_weight.exit_code == 1);
  CHECK(stderr_text().find("mu/tau") != std::string::npos);

  const auto missing_set = run("duality --xmax 10");
  CHECK(missing_set.exit_code == 1);

  const auto exact_too_big = run("sum --weight mu/n --set ap:4,1 --xmax 1e7 --mode exact");
  CHECK(exact_too_big.exit_code == 1);

  // Validation runs before any sieve work: a bad descriptor with an
  // enormous xmax must return immediately rather than start computing.
  const auto bad_weight_huge_x = run("sum --weight mu/tau --set ap:4,1 --xmax 1e15");
  CHECK(bad_weight_huge_x.exit_code == 1);
}

TEST_CASE("cyclotomic set reports the 1/phi(k) target") {
  const auto r = run(
      "sum --weight ramanujan/phi:m=3 --set cyclo:5,2 --xmax 1e4 --mode float --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"target\": 0.25") != std::string::npos);
  CHECK(r.output.find("\"set\": \"cyclo:5,2\"") != std::string::npos);
}

TEST_CASE("plot-data output") {
  const auto r = run(
      "sum --weight mu/phi --set ap:4,1 --checkpoints 100,1000 --plot-out cli_plot.csv");
  CHECK(r.exit_code == 0);
  const std::string plot = read_file("cli_plot.csv");
  CHECK(plot.rfind("log10_x,abs_error\n", 0) == 0);
  CHECK(std::count(plot.begin(), plot.end(), '\n') == 3);
  std::remove("cli_plot.csv");
}

TEST_CASE("identical flags give byte-identical output files") {
  const std::string flags =
      "sum --weight mu/phi --set ap:4,1 --checkpoints 1000,10000,100000 --threads 4 --format json";
  const auto r1 = run(flags + " --out cli_out_a.json");
  const auto r2 = run(flags + " --out cli_out_b.json");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  const std::string a = read_file("cli_out_a.json"), b = read_file("cli_out_b.json");
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove("cli_out_a.json");
  std::remove("cli_out_b.json");
}

TEST_CASE("duality emits paired columns") {
  const auto r = run("duality --set ap:2,1 --xmax 10 --mode exact");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("x,alladi_value,duality_value,target\n", 0) == 0);
  CHECK(r.output.find("0.6") != std::string::npos);
}

TEST_CASE("verify single suite") {
  const auto r = run("verify --suite mertens");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("PASS  mertens", 0) == 0);

  const auto bad = run("verify --suite nosuch");
  CHECK(bad.exit_code == 1);
  CHECK(stderr_text().find("nosuch") != std::string::npos);
}

TEST_CASE("verify default run: eight suites, all PASS") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("verify");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.exit_code == 0);
  size_t pass_lines = 0, pos = 0;
  while ((pos = r.output.find("PASS  ", pos)) != std::string::npos) {
    ++pass_lines;
    pos += 6;
  }
  CHECK(pass_lines == 8);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(secs < 300.0);
}

TEST_CASE("sieve writes a cache that eval picks up via ALLADI_CACHE") {
  const fs::path cache_dir = fs::absolute("cli_cache_dir");
  fs::create_directories(cache_dir);
  const auto sieve = run("sieve --limit 100000 --out " + (cache_dir / "spf-100000.alsv").string());
  CHECK(sieve.exit_code == 0);
  CHECK(fs::exists(cache_dir / "spf-100000.alsv"));

  const std::string with_env = "ALLADI_CACHE=" + cache_dir.string() + " " + kCli;
  const std::string out_file = "cli_test_stdout.tmp";
  const int status =
      std::system((with_env + " eval --fn classify --n 99991 > " + out_file).c_str());
  CHECK(WEXITSTATUS(status) == 0);
  const std::string out = read_file(out_file);
  CHECK(out.find("p=99991") != std::string::npos);  // 99991 is prime
  fs::remove_all(cache_dir);
}

TEST_CASE("eval functions") {
  CHECK(run("eval --fn sigma --n 28 --k 3").output == "25112\n");
  CHECK(run("eval --fn psi --n 12").output == "24\n");
  CHECK(run("eval --fn ramanujan --n 6 --m 4").output == "-1\n");
  CHECK(run("eval --fn r8 --n 2").output == "112\n");
  CHECK(run("eval --fn theta-e8 --n 2").output == "2160\n");
  CHECK(run("eval --fn classify --n 1").output == "n=1 p=inf P=1 mu=1 phi=1 lambda=1 Omega=0\n");
  CHECK(run("eval --fn nosuch --n 1").exit_code == 1);
}

// End-to-end checks of the command-line binary. Receives the binary path and
// the sample-instance directory as arguments (wired up by the test harness),
// runs real subprocesses, and asserts on exit codes, output text, and files.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_binary;
std::string g_data_dir;
std::filesystem::path g_tmp;

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr combined
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const std::filesystem::path capture = g_tmp / ("out" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      env_prefix + "\"" + g_binary + "\" " + args + " >\"" + capture.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(capture);
  return r;
}

std::string data_file(const std::string& name) { return g_data_dir + "/" + name; }

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("table: reference instance prints the diagnostic columns") {
  const RunResult r = run_cli("table volterra --n 10 --m 3");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "instance: volterra"));
  CHECK(contains(r.output, "step_dist"));
  CHECK(contains(r.output, "0.6667"));     // first ratio
  CHECK(contains(r.output, "0.1270"));     // window max at the last row
  CHECK(contains(r.output, "3.644e-08"));  // certified bound at n = 10
  CHECK(contains(r.output, "---"));        // undefined cells are placeholders
}

TEST_CASE("table: unknown example and bad arguments are usage errors") {
  CHECK(run_cli("table no-such-example").code == 64);
  CHECK(contains(run_cli("table no-such-example").output, "unknown example"));
  CHECK(run_cli("table volterra --n 0").code == 64);
  CHECK(run_cli("").code == 64);           // a subcommand is required
  CHECK(run_cli("bogus-subcommand").code == 64);
}

TEST_CASE("table: --out writes exactly what was printed") {
  const std::filesystem::path out = g_tmp / "table.txt";
  const RunResult r = run_cli("table affine-r2 --n 6 --out \"" + out.string() + "\"");
  CHECK(r.code == 0);
  CHECK(slurp(out) == r.output);
}

TEST_CASE("run: certified instance produces orbit and finalized certificate") {
  const std::string prefix = (g_tmp / "vol").string();
  const RunResult r = run_cli("run volterra --tol 1e-9 --certify --out " + prefix);
  CHECK(r.code == 0);
  CHECK(contains(r.output, "steps: 13 (step-below-tol)"));
  CHECK(contains(r.output, "certificate: final"));
  CHECK(contains(r.output, "uniform-tail(supplied-constant)"));

  const nlohmann::json cert = nlohmann::json::parse(slurp(prefix + "-certificate.json"));
  CHECK(cert.at("status") == "final");
  CHECK(cert.at("anchor") == 13);
  // The record falsifies the constant at the first ratio, so the verified
  // anchor moves one step in.
  CHECK(cert.at("uniform_tail").at("anchor") == 2);
  CHECK(cert.at("uniform_tail").at("hypothesis_verified") == true);

  const std::string csv = slurp(prefix + "-orbit.csv");
  CHECK(contains(csv, "n,step_dist,ratio,window_max,bound,true_dist"));
}

TEST_CASE("run: reruns are byte-identical") {
  const std::string a = (g_tmp / "rep-a").string();
  const std::string b = (g_tmp / "rep-b").string();
  CHECK(run_cli("run volterra --tol 1e-9 --certify --out " + a).code == 0);
  CHECK(run_cli("run volterra --tol 1e-9 --certify --out " + b).code == 0);
  CHECK(slurp(a + "-orbit.csv") == slurp(b + "-orbit.csv"));
  CHECK(slurp(a + "-certificate.json") == slurp(b + "-certificate.json"));
  CHECK(!slurp(a + "-orbit.csv").empty());
}

TEST_CASE("run: JSON orbit format carries null for undefined cells") {
  const std::string prefix = (g_tmp / "vj").string();
  const RunResult r = run_cli("run volterra --max-iters 8 --format json --out " + prefix);
  CHECK(r.code == 0);
  const nlohmann::json rows = nlohmann::json::parse(slurp(prefix + "-orbit.json"));
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].at("ratio").is_null());
  CHECK(rows[7].at("ratio").is_number());
  CHECK(rows[7].at("bound").is_number());
}

TEST_CASE("run: rectangular instance writes the orbit, notes the refusal, exits 0") {
  const std::string prefix = (g_tmp / "rect").string();
  const RunResult r = run_cli("run " + data_file("rectangular-demo.json") + " --out " + prefix);
  CHECK(r.code == 0);
  CHECK(contains(r.output, "certificate unavailable: rectangular-tail-unsupported"));
  const std::string csv = slurp(prefix + "-orbit.csv");
  CHECK(contains(csv, "\n2,"));  // one-step data is still recorded
}

TEST_CASE("run: rectangular with --certify is a hypothesis failure, exit 3") {
  const std::string prefix = (g_tmp / "rect2").string();
  const RunResult r =
      run_cli("run " + data_file("rectangular-demo.json") + " --certify --out " + prefix);
  CHECK(r.code == 3);
  CHECK(contains(r.output, "rectangular-tail-unsupported"));
}

TEST_CASE("run: too few steps to fill the window exits 2 (never certified)") {
  const std::string prefix = (g_tmp / "short").string();
  const RunResult r = run_cli("run affine-r2 --max-iters 3 --m 3 --out " + prefix);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "never certified"));
}

TEST_CASE("run: instance file reaching its fixed point gets the trivial final certificate") {
  const std::string prefix = (g_tmp / "layered").string();
  const RunResult r =
      run_cli("run " + data_file("layered-5pt.json") + " --certify --m 2 --out " + prefix);
  CHECK(r.code == 0);
  CHECK(contains(r.output, "certificate: final"));
  CHECK(contains(r.output, "exact-fixed-point"));
  const nlohmann::json cert = nlohmann::json::parse(slurp(prefix + "-certificate.json"));
  CHECK(cert.at("bound") == 0.0);
}

TEST_CASE("run: unknown target lists the gallery and exits 64") {
  const RunResult r = run_cli("run nowhere.json");
  CHECK(r.code == 64);
  CHECK(contains(r.output, "volterra"));
}

TEST_CASE("check-metric: worked violation, valid instance, io and format errors") {
  const RunResult bad = run_cli("check-metric " + data_file("triangle-violation.json"));
  CHECK(bad.code == 1);
  CHECK(contains(bad.output, "violation: triangle witness (0,1,2) lhs 5 rhs 2"));
  CHECK(contains(bad.output, "invalid: 1 violation(s)"));

  const RunResult good = run_cli("check-metric " + data_file("layered-5pt.json"));
  CHECK(good.code == 0);
  CHECK(contains(good.output, "valid"));

  const RunResult rect = run_cli("check-metric " + data_file("rectangular-demo.json"));
  CHECK(rect.code == 0);
  CHECK(contains(rect.output, "kind: rectangular"));

  CHECK(run_cli("check-metric " + (g_tmp / "missing.json").string()).code == 4);

  const std::filesystem::path garbled = g_tmp / "garbled.json";
  std::ofstream(garbled) << "{not json";
  CHECK(run_cli("check-metric " + garbled.string()).code == 4);
}

TEST_CASE("verify: suite passes and prints the counterexample summary") {
  const RunResult r = run_cli("verify --seed 7 --count 5");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "passes: 5/5"));
  CHECK(contains(r.output, "counterexample two-point-collapse: 2 fixed points"));
  CHECK(contains(r.output, "verdict: PASS"));
}

TEST_CASE("verify: seed falls back to the environment, garbage is rejected") {
  const RunResult env_run = run_cli("verify --count 3", "FIXCERT_SEED=42 ");
  CHECK(env_run.code == 0);
  CHECK(contains(env_run.output, "master seed 42"));

  const RunResult flag_wins = run_cli("verify --seed 9 --count 3", "FIXCERT_SEED=42 ");
  CHECK(contains(flag_wins.output, "master seed 9"));

  CHECK(run_cli("verify --count 3", "FIXCERT_SEED=pluto ").code == 4);
}

int run_all(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <binary> <instance-dir>\n");
    return 2;
  }
  g_binary = argv[1];
  g_data_dir = argv[2];
  g_tmp = std::filesystem::temp_directory_path() /
          ("fixcert-cli-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_tmp);

  doctest::Context ctx;
  const int rc = ctx.run();
  std::filesystem::remove_all(g_tmp);
  return rc;
}

int main(int argc, char** argv) { return run_all(argc, argv); }

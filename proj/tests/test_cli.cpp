#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "selinf/harness.hpp"
#include "selinf/report.hpp"

using namespace selinf;

namespace {

const std::string kData = SELINF_TEST_DATA;
const std::string kCli = SELINF_CLI;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; returns exit status and stdout.
Run run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "selinf_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit codes") {
  const std::string small = " --data " + kData + "/small.csv --response y";
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("infer --response y").code == 2);
  CHECK(run("infer" + small + " --procedure lars").code == 2);
  CHECK(run("infer" + small + " --k two").code == 2);
  CHECK(run("infer --data " + kData + "/missing.csv --response y").code == 2);
  CHECK(run("infer --data " + kData + "/bad_cell.csv --response y --sigma2 1").code == 2);
  CHECK(run("infer --data " + kData + "/constant.csv --response y --sigma2 1").code == 2);
  CHECK(run("infer" + small + " --response nope").code == 2);
  CHECK(run("infer" + small + " --k 50").code == 2);
  CHECK(run("infer" + small + " --alpha 1.5").code == 2);
  CHECK(run("infer" + small + " --sigma2 -1").code == 2);
  // 3 rows, 2 predictors: sigma2 cannot be estimated
  CHECK(run("infer --data " + kData + "/constant.csv --response b").code == 2);
  CHECK(run("simulate-coverage --trials 0").code == 2);
  CHECK(run("simulate-coverage --k 0 --trials 5").code == 2);
  // exact collinearity stops OMP at the third step
  CHECK(run("screen --data " + kData + "/collinear.csv --response y --procedure omp --k 3").code == 3);
  CHECK(run("infer" + small).code == 0);
  CHECK(run("--help").code == 0);
}

TEST_CASE("infer prints the same records as the library") {
  for (const char* proc : {"ms", "omp", "nnls", "ms-lasso"}) {
    CAPTURE(proc);
    const Run r = run("infer --data " + kData + "/small.csv --response y --k 2 --lambda 0.5 --alpha 0.2 --procedure " + proc);
    REQUIRE(r.code == 0);
    InferRequest req;
    req.dataset_path = kData + "/small.csv";
    req.response_column = "y";
    req.procedure = parse_procedure(proc);
    req.k = 2;
    req.lambda = 0.5;
    req.alpha_level = 0.2;
    std::string expect;
    for (const auto& rec : infer_command(req)) expect += rec.dump() + '\n';
    CHECK(r.out == expect);
  }
}

TEST_CASE("infer writes to --out and reruns are byte-identical") {
  const auto path = scratch("infer.jsonl");
  const std::string args = "infer --data " + kData + "/small.csv --response y --sigma2 1.5 --out " + path.string();
  REQUIRE(run(args).code == 0);
  const std::string first = slurp(path);
  REQUIRE(run(args).code == 0);
  CHECK(slurp(path) == first);
  CHECK(first.find("\"sigma2\":1.5") != std::string::npos);
}

TEST_CASE("screen prints the model and dumps the event") {
  const auto path = scratch("event.csv");
  const Run r = run("screen --data " + kData + "/small.csv --response y --k 2 --event-csv " + path.string());
  REQUIRE(r.code == 0);
  const auto model = nlohmann::json::parse(r.out);
  CHECK(model["procedure"] == "ms");
  CHECK(model["support"].size() == 2);
  CHECK(model["event_rows"] == 2 * (2 * 3 + 1));
  const std::string csv = slurp(path);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "a1,a2,a3,a4,a5,a6,a7,a8,a9,a10,a11,a12,a13,a14,a15,a16,a17,a18,a19,a20,a21,a22,a23,a24,b");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 15);
}

TEST_CASE("simulate-coverage matches the library and ignores the thread count") {
  const std::string args = "simulate-coverage --n 10 --p 20 --k 2 --trials 40 --seed 5 --snr 0.5,2";
  const Run one = run(args + " --threads 1");
  const Run four = run(args + " --threads 4");
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
  ExperimentConfig c;
  c.n = 10;
  c.p = 20;
  c.trials = 40;
  c.seed = 5;
  c.snr_grid = {0.5, 2.0};
  std::ostringstream expect;
  write_coverage_csv(expect, run_coverage_experiment(c));
  CHECK(one.out == expect.str());
  CHECK(run(args + " --seed 6").out != one.out);
}

TEST_CASE("pivot-null writes qq and histogram files") {
  const auto hist = scratch("hist.csv");
  const Run r = run("pivot-null --n 10 --p 20 --trials 200 --seed 2 --snr 1 --hist " + hist.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.substr(0, r.out.find('\n')) == "rank,pivot,uniform_quantile");
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 201);
  const std::string h = slurp(hist);
  CHECK(h.substr(0, h.find('\n')) == "bin_lower,bin_upper,count,density");
  CHECK(std::count(h.begin(), h.end(), '\n') == 21);
}

TEST_CASE("bootstrap output") {
  const Run r = run("bootstrap --data " + kData + "/small.csv --response y --k 2 --trials 30 --seed 1 --nominal 0.5,0.9");
  REQUIRE(r.code == 0);
  ExperimentConfig c;
  c.k = 2;
  c.trials = 30;
  c.seed = 1;
  c.nominal_grid = {0.5, 0.9};
  std::ostringstream expect;
  write_bootstrap_csv(expect, run_residual_bootstrap(kData + "/small.csv", "y", c));
  CHECK(r.out == expect.str());
}

#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fermat/bench.hpp"
#include "fermat/csv.hpp"

using namespace fermat;

namespace {

ExperimentConfig tiny_vmf_config() {
  ExperimentConfig config;
  config.dataset.kind = DatasetKind::Vmf;
  config.methods = {Method::FdWknn, Method::NaiveKnn};
  config.alpha = 3.0;
  config.graph_kind = GraphKind::KnnMstUnion;
  config.dim_mode = DimMode::Fixed;
  config.fixed_dim = 2;
  config.n_labeled = {4};
  config.n_unlabeled = 16;
  config.repetitions = 2;
  config.seed = 5;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

}  // namespace

TEST_CASE("trials are bitwise reproducible") {
  ExperimentConfig config = tiny_vmf_config();
  TrialResult a = run_trial(config, Method::FdWknn, 4, 1);
  TrialResult b = run_trial(config, Method::FdWknn, 4, 1);
  REQUIRE(a.accuracy.has_value());
  CHECK(*a.accuracy == *b.accuracy);
  CHECK(a.predictions == b.predictions);
  CHECK(a.unlabeled_idx == b.unlabeled_idx);
  TrialResult c = run_trial(config, Method::FdWknn, 4, 2);
  CHECK(a.unlabeled_idx != c.unlabeled_idx);
}

TEST_CASE("methods sharing a repetition see the same split") {
  ExperimentConfig config = tiny_vmf_config();
  TrialResult fd = run_trial(config, Method::FdWknn, 4, 3);
  TrialResult naive = run_trial(config, Method::NaiveKnn, 4, 3);
  CHECK(fd.unlabeled_idx == naive.unlabeled_idx);
  ExperimentConfig alpha1 = config;
  alpha1.alpha = 1.0;
  TrialResult fd1 = run_trial(alpha1, Method::FdWknn, 4, 3);
  CHECK(fd.unlabeled_idx == fd1.unlabeled_idx);
}

TEST_CASE("a trial without unlabeled points reports no accuracy") {
  ExperimentConfig config = tiny_vmf_config();
  config.n_unlabeled = 0;
  TrialResult r = run_trial(config, Method::NaiveKnn, 4, 0);
  CHECK_FALSE(r.accuracy.has_value());
  CHECK(r.predictions.empty());
  CHECK(r.unlabeled_idx.empty());
}

TEST_CASE("trial rejects labeled totals that do not split by class") {
  ExperimentConfig config = tiny_vmf_config();
  CHECK_THROWS_AS(run_trial(config, Method::NaiveKnn, 5, 0),
                  std::invalid_argument);
}

TEST_CASE("experiment aggregates one sorted row per method and size") {
  ExperimentConfig config = tiny_vmf_config();
  config.n_labeled = {6, 4};
  ResultTable table = run_experiment(config);
  REQUIRE(table.rows.size() == 4);
  // Sorted by method name then size: FdWknn < NaiveKnn alphabetically.
  CHECK(table.rows[0].method == Method::FdWknn);
  CHECK(table.rows[0].n_labeled == 4);
  CHECK(table.rows[1].method == Method::FdWknn);
  CHECK(table.rows[1].n_labeled == 6);
  CHECK(table.rows[2].method == Method::NaiveKnn);
  CHECK(table.rows[3].method == Method::NaiveKnn);
  for (const ResultRow& row : table.rows) {
    CHECK(std::isfinite(row.mean_accuracy));
    CHECK(row.mean_accuracy >= 0.0);
    CHECK(row.mean_accuracy <= 1.0);
    CHECK(row.std_accuracy >= 0.0);
    CHECK(row.mean_wall_seconds >= 0.0);
  }
}

TEST_CASE("single repetition reports zero spread") {
  ExperimentConfig config = tiny_vmf_config();
  config.methods = {Method::NaiveKnn};
  config.repetitions = 1;
  ResultTable table = run_experiment(config);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].std_accuracy == 0.0);
}

TEST_CASE("result csv is stable across identical runs") {
  ExperimentConfig config = tiny_vmf_config();
  config.out_path = "bench_a.csv";
  run_experiment(config);
  config.out_path = "bench_b.csv";
  run_experiment(config);
  const std::string a = slurp("bench_a.csv");
  const std::string b = slurp("bench_b.csv");
  CHECK(a.rfind("method,n_labeled,alpha,graph,mean_accuracy,std_accuracy,"
                "mean_wall_seconds,mean_distance_seconds\n", 0) == 0);
  // Header plus one line per (method, size) row.
  CHECK(std::count(a.begin(), a.end(), '\n') == 3);
  // Everything except the two timing columns must repeat byte for byte.
  std::istringstream sa(a), sb(b);
  std::string la, lb;
  while (std::getline(sa, la) && std::getline(sb, lb)) {
    auto strip_timings = [](const std::string& line) {
      std::size_t cut = line.size();
      for (int commas = 0; commas < 2 && cut != std::string::npos;) {
        cut = line.rfind(',', cut - 1);
        ++commas;
      }
      return line.substr(0, cut);
    };
    CHECK(strip_timings(la) == strip_timings(lb));
  }
  std::remove("bench_a.csv");
  std::remove("bench_b.csv");
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::FdWknn, Method::FdSvm, Method::NaiveKnn}) {
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(method_from_string("boost"), std::invalid_argument);
}

TEST_CASE("worker thread count comes from the environment") {
  unsetenv("FERMATSC_THREADS");
  CHECK(worker_threads_from_env() == 1);
  setenv("FERMATSC_THREADS", "4", 1);
  CHECK(worker_threads_from_env() == 4);
  setenv("FERMATSC_THREADS", "not-a-number", 1);
  CHECK(worker_threads_from_env() == 1);
  setenv("FERMATSC_THREADS", "0", 1);
  CHECK(worker_threads_from_env() == 1);
  unsetenv("FERMATSC_THREADS");
}

#ifdef FERMATSC_CLI_PATH

namespace {

struct CommandResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(FERMATSC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  char buffer[512];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) {
    result.output += buffer;
  }
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

}  // namespace

TEST_CASE("cli generates identical clouds for identical seeds") {
  CommandResult a = run_cli(
      "gen --model sphere_i --n 40 --seed 9 --out cli_a.csv --labels-out cli_al.csv");
  REQUIRE(a.status == 0);
  CommandResult b = run_cli(
      "gen --model sphere_i --n 40 --seed 9 --out cli_b.csv --labels-out cli_bl.csv");
  REQUIRE(b.status == 0);
  CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
  CHECK(slurp("cli_al.csv") == slurp("cli_bl.csv"));
  PointCloud cloud = load_csv_points("cli_a.csv");
  CHECK(cloud.size() == 40);
  CHECK(cloud.dim() == 3);
  std::remove("cli_b.csv");
  std::remove("cli_bl.csv");
}

TEST_CASE("cli estimates dimension and computes matrices end to end") {
  CommandResult dim = run_cli("dim --points cli_a.csv");
  REQUIRE(dim.status == 0);
  const double estimate = std::stod(dim.output);
  CHECK(estimate > 1.0);
  CHECK(estimate < 3.5);

  CommandResult fermat = run_cli(
      "fermat --points cli_a.csv --alpha 1 --graph complete --d 2 --out cli_d.csv");
  REQUIRE(fermat.status == 0);
  Eigen::MatrixXd d = load_csv_matrix("cli_d.csv");
  REQUIRE(d.rows() == 40);
  REQUIRE(d.cols() == 40);
  // At alpha = 1 on the complete graph the metric is plain euclidean.
  PointCloud cloud = load_csv_points("cli_a.csv");
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double expect = (cloud.points().row(i) - cloud.points().row(j)).norm();
      worst = std::max(worst, std::abs(d(i, j) - expect));
    }
  }
  CHECK(worst <= 1e-12);

  CommandResult mds = run_cli("mds --matrix cli_d.csv --p 3 --out cli_e.csv");
  REQUIRE(mds.status == 0);
  Eigen::MatrixXd coords = load_csv_matrix("cli_e.csv");
  CHECK(coords.rows() == 40);
  CHECK(coords.cols() == 3);
  std::remove("cli_d.csv");
  std::remove("cli_e.csv");
  std::remove("cli_a.csv");
  std::remove("cli_al.csv");
}

TEST_CASE("cli fit-predict writes predictions with a header") {
  CommandResult r = run_cli(
      "fit-predict --model vmf --n-labeled 4 --n-unlabeled 12 --method naiveknn "
      "--seed 3 --out cli_pred.csv");
  REQUIRE(r.status == 0);
  CHECK(r.output.find("accuracy") != std::string::npos);
  std::ifstream in("cli_pred.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,predicted");
  int rows = 0;
  while (std::getline(in, line)) rows += !line.empty();
  CHECK(rows == 12);
  std::remove("cli_pred.csv");
}

TEST_CASE("cli bench writes the aggregate table") {
  CommandResult r = run_cli(
      "bench --model vmf --methods fdwknn,naiveknn --n-labeled 4 --n-unlabeled 12 "
      "--reps 2 --seed 3 --alpha 2 --d 2 --out cli_bench.csv");
  REQUIRE(r.status == 0);
  const std::string body = slurp("cli_bench.csv");
  CHECK(body.rfind("method,", 0) == 0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 3);
  std::remove("cli_bench.csv");
}

TEST_CASE("cli failures are loud and nonzero") {
  CHECK(run_cli("no-such-command").status != 0);
  CHECK(run_cli("gen --model sphere_i --n 40").status != 0);  // missing --out
  CommandResult missing = run_cli("dim --points definitely_absent.csv");
  CHECK(missing.status == 1);
  CHECK(missing.output.find("error:") != std::string::npos);
  CommandResult badflag = run_cli("gen --model sphere_i --frobnicate 3 --out x.csv");
  CHECK(badflag.status != 0);
}

#endif  // FERMATSC_CLI_PATH

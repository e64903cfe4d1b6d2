#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fermat/datagen.hpp"
#include "fermat/fermat.hpp"
#include "fermat/mds.hpp"
#include "fermat/rng.hpp"
#include "fermat/svm.hpp"

using namespace fermat;

namespace {

PointCloud random_cloud(int n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) pts(i, j) = rng.uniform01() * 2.0 - 1.0;
  }
  return PointCloud(std::move(pts));
}

Eigen::MatrixXd euclidean_matrix(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = (pts.row(i) - pts.row(j)).norm();
  }
  return out;
}

FermatMatrix moon_fermat(int n_per_class, std::uint64_t seed) {
  TwoMoonModel model{TwoMoonVariant::SphereI, n_per_class, n_per_class, seed};
  LabeledDataset data = generate_two_moon(model);
  FermatParams params;
  params.alpha = 4.0;
  params.intrinsic_dim = 2;
  params.graph_kind = GraphKind::KnnMstUnion;
  params.knn_k = default_graph_k(data.cloud.size());
  return fermat_matrix(data.cloud, params);
}

double training_accuracy(const LinearSvmModel& model, const Eigen::MatrixXd& X,
                         const std::vector<int>& y) {
  int correct = 0;
  for (int i = 0; i < X.rows(); ++i) {
    correct += (svm_predict(model, X.row(i).transpose()) == y[i]);
  }
  return static_cast<double>(correct) / static_cast<double>(X.rows());
}

// Two blobs separated along the first axis.
void separable_toy(Eigen::MatrixXd& X, std::vector<int>& y, int per_class,
                   std::uint64_t seed) {
  Rng rng(seed);
  X.resize(2 * per_class, 2);
  y.assign(2 * per_class, 0);
  for (int i = 0; i < per_class; ++i) {
    X(i, 0) = -2.0 + 0.5 * (rng.uniform01() - 0.5);
    X(i, 1) = rng.uniform01() - 0.5;
    X(per_class + i, 0) = 2.0 + 0.5 * (rng.uniform01() - 0.5);
    X(per_class + i, 1) = rng.uniform01() - 0.5;
    y[per_class + i] = 1;
  }
}

}  // namespace

TEST_CASE("two points embed at plus and minus half") {
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 1.0, 1.0, 0.0;
  Embedding e = classical_mds(d, 1);
  REQUIRE(e.coords.rows() == 2);
  REQUIRE(e.coords.cols() == 1);
  CHECK(e.coords(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.coords(1, 0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(e.eigvals(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.distortion <= 1e-12);
}

TEST_CASE("equilateral triangle reproduces unit side lengths") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  Embedding e = classical_mds(d, 2);
  // Centered spectrum is {1/2, 1/2, 0}.
  CHECK(e.eigvals(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(e.eigvals(1) == doctest::Approx(0.5).epsilon(1e-9));
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double dist = (e.coords.row(i) - e.coords.row(j)).norm();
      CHECK(dist == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("euclidean input distances are reproduced at matching dimension") {
  PointCloud cloud = random_cloud(5, 3, 404);
  Eigen::MatrixXd d = euclidean_matrix(cloud.points());
  Embedding e = classical_mds(d, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      const double emb = (e.coords.row(i) - e.coords.row(j)).norm();
      CHECK(emb == doctest::Approx(d(i, j)).epsilon(1e-8));
    }
  }
  CHECK(e.distortion <= 1e-8);
}

TEST_CASE("embedding columns are centered and signed deterministically") {
  FermatMatrix m = moon_fermat(15, 8);
  Embedding e = classical_mds(m, 6);
  for (int c = 0; c < e.coords.cols(); ++c) {
    CHECK(std::abs(e.coords.col(c).mean()) <= 1e-9);
    int arg = 0;
    e.coords.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(e.coords(arg, c) >= 0.0);
  }
  for (int t = 1; t < e.eigvals.size(); ++t) {
    CHECK(e.eigvals(t) <= e.eigvals(t - 1));
    CHECK(e.eigvals(t) >= 0.0);
  }
}

TEST_CASE("clamped spectra still give finite distortion") {
  FermatMatrix m = moon_fermat(12, 3);
  Embedding e = classical_mds(m, 10);
  CHECK(e.coords.allFinite());
  CHECK(std::isfinite(e.distortion));
}

TEST_CASE("distortion does not grow from half to full dimension") {
  FermatMatrix m = moon_fermat(15, 21);  // n = 30
  Embedding half = classical_mds(m, 15);
  Embedding full = classical_mds(m, 28);
  CHECK(full.distortion <= half.distortion);
}

TEST_CASE("target dimension rule counts the significant spectrum") {
  SUBCASE("planar cloud in a 10-dimensional ambient space") {
    Rng rng(33);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(40, 10);
    for (int i = 0; i < 40; ++i) {
      pts(i, 2) = rng.uniform01();
      pts(i, 7) = rng.uniform01();
    }
    CHECK(choose_target_dim(euclidean_matrix(pts), 1e-6) == 2);
  }
  SUBCASE("two points give one dimension") {
    Eigen::MatrixXd d(2, 2);
    d << 0.0, 3.0, 3.0, 0.0;
    CHECK(choose_target_dim(d, 1e-6) == 1);
  }
  SUBCASE("curved metric needs more than the intrinsic two dimensions") {
    FermatMatrix m = moon_fermat(20, 5);
    CHECK(choose_target_dim(m) >= 3);
  }
  SUBCASE("tolerance must sit inside (0, 1)") {
    Eigen::MatrixXd d(2, 2);
    d << 0.0, 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(choose_target_dim(d, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(choose_target_dim(d, 1.0), std::invalid_argument);
  }
}

TEST_CASE("mds input validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(classical_mds(bad, 1), std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 0.0, -1.0, -1.0, 0.0;
  CHECK_THROWS_AS(classical_mds(neg, 1), std::invalid_argument);
  Eigen::MatrixXd ok(3, 3);
  ok << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  CHECK_THROWS_AS(classical_mds(ok, 0), std::invalid_argument);
  CHECK_THROWS_AS(classical_mds(ok, 3), std::invalid_argument);
}

TEST_CASE("held-out placement reproduces embeddable geometry") {
  PointCloud cloud = random_cloud(10, 3, 17);
  Eigen::MatrixXd d = euclidean_matrix(cloud.points());
  Embedding e = classical_mds(d, 3);
  Rng rng(71);
  Eigen::VectorXd x(3);
  x << rng.uniform01(), rng.uniform01(), rng.uniform01();
  Eigen::VectorXd dists(10);
  for (int j = 0; j < 10; ++j) {
    dists(j) = (cloud.points().row(j).transpose() - x).norm();
  }
  Eigen::VectorXd z = place_out_of_sample(e, dists);
  REQUIRE(z.size() == 3);
  for (int j = 0; j < 10; ++j) {
    const double emb = (e.coords.row(j).transpose() - z).norm();
    CHECK(emb == doctest::Approx(dists(j)).epsilon(1e-8));
  }
}

TEST_CASE("embedding csv export writes n rows of p columns") {
  FermatMatrix m = moon_fermat(6, 2);
  Embedding e = classical_mds(m, 3);
  const std::string path = "embedding_export.csv";
  write_embedding_csv(e, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    ++rows;
  }
  CHECK(rows == 12);
  std::remove(path.c_str());
}

TEST_CASE("separable clusters train to full accuracy") {
  Eigen::MatrixXd X;
  std::vector<int> y;
  separable_toy(X, y, 12, 9);
  LinearSvmModel model = train_linear_svm(X, y, 1.0);
  CHECK(training_accuracy(model, X, y) == 1.0);
  for (const BinarySvmResult& r : model.diagnostics) {
    CHECK(r.monotone);
    CHECK(r.w.allFinite());
  }
}

TEST_CASE("small-cost separable problem converges to a tiny subgradient") {
  Eigen::MatrixXd X;
  std::vector<int> y;
  separable_toy(X, y, 10, 4);
  std::vector<int> targets(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) targets[i] = y[i] == 1 ? 1 : -1;
  BinarySvmResult r = train_binary_hinge(X, targets, 0.01);
  CHECK(r.converged);
  CHECK(r.subgrad_norm <= 1e-5);
  CHECK(r.monotone);
}

TEST_CASE("xor layout cannot beat three of four") {
  Eigen::MatrixXd X(4, 2);
  X << 1, 1, -1, -1, 1, -1, -1, 1;
  std::vector<int> y = {0, 0, 1, 1};
  for (double cost : {0.1, 1.0, 10.0}) {
    LinearSvmModel model = train_linear_svm(X, y, cost);
    CHECK(training_accuracy(model, X, y) <= 0.75);
  }
}

TEST_CASE("scaling coordinates by c and cost by 1/c^2 fixes predictions") {
  Eigen::MatrixXd X;
  std::vector<int> y;
  separable_toy(X, y, 10, 13);
  LinearSvmModel base = train_linear_svm(X, y, 1.0);
  LinearSvmModel scaled = train_linear_svm(2.0 * X, y, 0.25);
  for (int i = 0; i < X.rows(); ++i) {
    CHECK(svm_predict(base, X.row(i).transpose()) ==
          svm_predict(scaled, 2.0 * X.row(i).transpose()));
  }
}

TEST_CASE("one-vs-rest with two classes equals a single binary machine") {
  Rng rng(6);
  Eigen::MatrixXd X(30, 3);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = rng.uniform01() * 2.0 - 1.0;
    y[i] = X(i, 0) + 0.3 * X(i, 1) > 0.1 ? 1 : 0;
  }
  LinearSvmModel ovr = train_linear_svm(X, y, 10.0);
  std::vector<int> targets(30);
  for (int i = 0; i < 30; ++i) targets[i] = y[i] == 1 ? 1 : -1;
  BinarySvmResult binary = train_binary_hinge(X, targets, 10.0);
  for (int i = 0; i < 30; ++i) {
    const double score = binary.w.dot(X.row(i).transpose()) + binary.b;
    const int binary_pred = score > 0.0 ? 1 : 0;
    CHECK(svm_predict(ovr, X.row(i).transpose()) == binary_pred);
  }
}

TEST_CASE("single-class training degenerates to a constant") {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 1, 0, 0, 1, 1, 1;
  std::vector<int> y = {2, 2, 2, 2};
  LinearSvmModel model = train_linear_svm(X, y, 1.0);
  CHECK(model.num_classes == 3);
  for (int i = 0; i < 4; ++i) {
    CHECK(svm_predict(model, X.row(i).transpose()) == 2);
  }
}

TEST_CASE("prediction rejects mismatched dimensions") {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 1, 0, 0, 1, 1, 1;
  std::vector<int> y = {0, 0, 1, 1};
  LinearSvmModel model = train_linear_svm(X, y, 1.0);
  Eigen::VectorXd wrong(3);
  wrong << 0, 0, 0;
  CHECK_THROWS_AS(svm_predict(model, wrong), std::invalid_argument);
}

TEST_CASE("cost selection is deterministic and breaks ties downward") {
  Eigen::MatrixXd X;
  std::vector<int> y;
  separable_toy(X, y, 10, 77);
  std::vector<double> grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  const double cost = select_cost_cv(X, y, grid, 5, 42);
  CHECK(cost == select_cost_cv(X, y, grid, 5, 42));
  // Clean separation: every cost scores 1.0, so the tie rule picks the
  // smallest.
  CHECK(cost == 0.01);
}

TEST_CASE("model csv export carries one row per class") {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 1, 0, 0, 1, 1, 1;
  std::vector<int> y = {0, 1, 2, 2};
  LinearSvmModel model = train_linear_svm(X, y, 1.0);
  const std::string path = "svm_model_export.csv";
  write_svm_model_csv(model, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  REQUIRE(rows.size() == 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(rows[c].rfind(std::to_string(c) + ",", 0) == 0);
    CHECK(std::count(rows[c].begin(), rows[c].end(), ',') == 3);  // id,b,w0,w1
  }
  std::remove(path.c_str());
}

TEST_CASE("metric-embedding pipeline classifies the easy sphere clusters") {
  VmfClusterModel model;
  model.n_per_class = 40;
  model.seed = 31;
  LabeledDataset full = generate_vmf_clusters(model);
  std::vector<int> labeled_idx;
  for (int i = 0; i < 10; ++i) {
    labeled_idx.push_back(i);
    labeled_idx.push_back(40 + i);
  }
  LabeledDataset data = restrict_labels(full, labeled_idx);
  FermatParams params;
  params.alpha = 4.0;
  params.intrinsic_dim = 2;
  params.graph_kind = GraphKind::KnnMstUnion;
  params.knn_k = default_graph_k(80);
  FdSvmConfig cfg;
  cfg.seed = 7;
  std::vector<int> pred = fd_svm_pipeline(data, params, cfg);
  REQUIRE(pred.size() == 60);  // the unlabeled points, ascending
  int correct = 0, at = 0;
  for (int i = 0; i < 80; ++i) {
    const bool labeled = (i < 10) || (i >= 40 && i < 50);
    if (labeled) continue;
    correct += (pred[at++] == (i < 40 ? 0 : 1));
  }
  CHECK(static_cast<double>(correct) / 60.0 >= 0.9);
}

TEST_CASE("pipeline with no unlabeled points returns nothing") {
  VmfClusterModel model;
  model.n_per_class = 10;
  model.seed = 3;
  LabeledDataset full = generate_vmf_clusters(model);
  FermatParams params;
  params.alpha = 2.0;
  params.intrinsic_dim = 2;
  params.graph_kind = GraphKind::Complete;
  FdSvmConfig cfg;
  CHECK(fd_svm_pipeline(full, params, cfg).empty());
}

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fermat/mds.hpp"
#include "fermat/point_cloud.hpp"

namespace fermat {

// One binary L2-regularized hinge-loss problem
//   min_{w,b} 0.5 |w|^2 + cost * sum_i max(0, 1 - y_i (w.x_i + b)),
// solved by deterministic full-batch subgradient descent with a fixed
// diagonal preconditioner and backtracking line search. The line search
// only accepts decreasing steps, so the recorded objective is nonincreasing
// by construction (`monotone` reports the monitored check). Stops when the
// subgradient norm falls to 1e-6 relative to the loss scale max(1, cost*n),
// the step stalls at a kink, or the 1e5 iteration cap is hit.
struct BinarySvmResult {
  Eigen::VectorXd w;
  double b = 0.0;
  double objective = 0.0;
  double subgrad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
};

BinarySvmResult train_binary_hinge(const Eigen::MatrixXd& X,
                                   std::span<const int> targets, double cost);

// One-vs-rest multiclass wrapper. Row c of W / entry c of b score class c;
// prediction is the argmax score with ties to the smaller class id. A
// single-class input degenerates to a constant model (with a warning).
struct LinearSvmModel {
  Eigen::MatrixXd W;  // num_classes x p
  Eigen::VectorXd b;  // num_classes
  double cost = 1.0;
  int num_classes = 0;
  std::vector<BinarySvmResult> diagnostics;
};

LinearSvmModel train_linear_svm(const Eigen::MatrixXd& X,
                                std::span<const int> labels, double cost);

int svm_predict(const LinearSvmModel& model, const Eigen::VectorXd& x);
std::vector<int> svm_predict_batch(const LinearSvmModel& model,
                                   const Eigen::MatrixXd& X);

// Stratified cross-validated cost selection; accuracy ties resolve to the
// smaller cost (stronger regularization).
double select_cost_cv(const Eigen::MatrixXd& X, std::span<const int> labels,
                      std::span<const double> grid, int folds,
                      std::uint64_t seed);

// CSV rows of (class id, b, w components).
void write_svm_model_csv(const LinearSvmModel& model, const std::string& path);

// Embedding target dimension rule: a fixed p, or the eigenvalue-count rule.
struct TargetDimRule {
  bool automatic = true;
  int fixed_p = 0;
  double tol = 1e-10;
};

struct FdSvmConfig {
  TargetDimRule dim_rule;
  std::vector<double> cost_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  int folds = 5;
  std::uint64_t seed = 0;
};

// Metric + embedding + linear classifier pipeline on a partially labeled
// dataset: all points embed jointly through the distance matrix, the SVM
// trains on the embedded labeled rows (cost by cross-validated accuracy),
// and predictions are returned for the unlabeled points in ascending index
// order. With no unlabeled points the result is empty.
std::vector<int> fd_svm_predict(const FermatMatrix& matrix,
                                std::span<const int> labeled_idx,
                                std::span<const int> labels,
                                const FdSvmConfig& cfg);

std::vector<int> fd_svm_pipeline(const LabeledDataset& data,
                                 const FermatParams& params,
                                 const FdSvmConfig& cfg, int workers = 1);

}  // namespace fermat

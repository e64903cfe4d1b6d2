#include "fermat/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fermat/csv.hpp"
#include "fermat/rng.hpp"

namespace fermat {

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kRelativeTol = 1e-6;

double hinge_objective(double w_sq, double cost,
                       const Eigen::VectorXd& margins) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    loss += std::max(0.0, 1.0 - margins(i));
  }
  return 0.5 * w_sq + cost * loss;
}

}  // namespace

BinarySvmResult train_binary_hinge(const Eigen::MatrixXd& X,
                                   std::span<const int> targets, double cost) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (static_cast<int>(targets.size()) != n) {
    throw std::invalid_argument("train_binary_hinge: targets length mismatch");
  }
  if (!(cost > 0.0)) {
    throw std::invalid_argument("train_binary_hinge: cost must be > 0");
  }
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (targets[i] != 1 && targets[i] != -1) {
      throw std::invalid_argument("train_binary_hinge: targets must be +1/-1");
    }
    y(i) = targets[i];
  }

  // Fixed diagonal preconditioner ~ the per-axis curvature upper bound
  // 1 + cost * sum_i x_ij^2 (1 alone for the unregularized intercept's
  // regularizer-free axis would be 0; cost*n bounds its loss curvature).
  Eigen::VectorXd precond = (X.array().square().colwise().sum() * cost + 1.0)
                                .matrix()
                                .transpose();
  const double precond_b = 1.0 + cost * n;

  BinarySvmResult result;
  result.w = Eigen::VectorXd::Zero(p);
  result.b = 0.0;

  Eigen::VectorXd margins = Eigen::VectorXd::Zero(n);  // y .* (Xw + b), w = 0
  double w_sq = 0.0;
  double objective = hinge_objective(w_sq, cost, margins);
  const double grad_tol = kRelativeTol * std::max(1.0, cost * n);

  Eigen::VectorXd grad_w(p), direction(p), dir_margins(n), active_scale(n);
  double step = 1.0;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    // Subgradient: w - cost * sum_{margin<1} y_i x_i (strict inequality
    // leaves on-margin points inactive).
    for (int i = 0; i < n; ++i) {
      active_scale(i) = margins(i) < 1.0 ? y(i) : 0.0;
    }
    grad_w = result.w - cost * (X.transpose() * active_scale);
    double grad_b = -cost * active_scale.sum();
    double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    result.subgrad_norm = grad_norm;
    if (grad_norm <= grad_tol) {
      result.converged = true;
      break;
    }

    direction = -(grad_w.array() / precond.array()).matrix();
    double direction_b = -grad_b / precond_b;
    dir_margins = y.array() * (X * direction).array() + y.array() * direction_b;
    double descent = grad_w.dot(direction) + grad_b * direction_b;  // < 0
    double d_sq = direction.squaredNorm();
    double wd = result.w.dot(direction);

    // Backtracking from twice the last accepted step (Armijo condition).
    double eta = 2.0 * step;
    bool accepted = false;
    for (int halvings = 0; halvings < 80; ++halvings) {
      double trial_w_sq = w_sq + 2.0 * eta * wd + eta * eta * d_sq;
      double trial_loss = 0.0;
      for (int i = 0; i < n; ++i) {
        trial_loss += std::max(0.0, 1.0 - margins(i) - eta * dir_margins(i));
      }
      double trial_objective = 0.5 * trial_w_sq + cost * trial_loss;
      if (trial_objective <= objective + 1e-4 * eta * descent) {
        result.w += eta * direction;
        result.b += eta * direction_b;
        margins += eta * dir_margins;
        w_sq = result.w.squaredNorm();  // refresh; avoids drift of the recurrence
        if (trial_objective > objective) result.monotone = false;
        objective = trial_objective;
        step = eta;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // stalled at a kink; subgradient is not a descent direction
  }
  result.iterations = iter;
  result.objective = hinge_objective(w_sq, cost, margins);
  return result;
}

LinearSvmModel train_linear_svm(const Eigen::MatrixXd& X,
                                std::span<const int> labels, double cost) {
  const int n = static_cast<int>(X.rows());
  if (static_cast<int>(labels.size()) != n || n < 1) {
    throw std::invalid_argument("train_linear_svm: labels length mismatch");
  }
  int num_classes = 0;
  for (int label : labels) {
    if (label < 0) throw std::invalid_argument("train_linear_svm: negative label");
    num_classes = std::max(num_classes, label + 1);
  }

  LinearSvmModel model;
  model.cost = cost;
  model.num_classes = num_classes;
  model.W = Eigen::MatrixXd::Zero(num_classes, X.cols());
  model.b = Eigen::VectorXd::Zero(num_classes);

  int distinct = 0;
  std::vector<char> present(num_classes, 0);
  for (int label : labels) {
    if (!present[label]) {
      present[label] = 1;
      ++distinct;
    }
  }
  if (distinct < 2) {
    // Degenerate input: every training point shares one class.
    std::fprintf(stderr,
                 "warning: single-class training set; constant model for class %d\n",
                 labels[0]);
    model.b(labels[0]) = 1.0;
    return model;
  }

  std::vector<int> targets(n);
  for (int c = 0; c < num_classes; ++c) {
    for (int i = 0; i < n; ++i) targets[i] = labels[i] == c ? 1 : -1;
    BinarySvmResult binary = train_binary_hinge(X, targets, cost);
    model.W.row(c) = binary.w.transpose();
    model.b(c) = binary.b;
    model.diagnostics.push_back(std::move(binary));
  }
  return model;
}

int svm_predict(const LinearSvmModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.W.cols()) {
    throw std::invalid_argument("svm_predict: feature dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(model.W.cols()) + ")");
  }
  Eigen::VectorXd scores = model.W * x + model.b;
  int best = 0;
  for (int c = 1; c < model.num_classes; ++c) {
    if (scores(c) > scores(best)) best = c;  // ties keep the smaller id
  }
  return best;
}

std::vector<int> svm_predict_batch(const LinearSvmModel& model,
                                   const Eigen::MatrixXd& X) {
  std::vector<int> out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out[i] = svm_predict(model, X.row(i).transpose());
  }
  return out;
}

double select_cost_cv(const Eigen::MatrixXd& X, std::span<const int> labels,
                      std::span<const double> grid, int folds,
                      std::uint64_t seed) {
  const int n = static_cast<int>(X.rows());
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("select_cost_cv: labels length mismatch");
  }
  if (grid.empty()) throw std::invalid_argument("select_cost_cv: empty grid");
  if (folds < 2) throw std::invalid_argument("select_cost_cv: need >= 2 folds");

  int num_classes = 0;
  for (int label : labels) num_classes = std::max(num_classes, label + 1);
  std::vector<int> fold_of(n, 0);
  Rng rng(seed);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    shuffle(members, rng);
    for (std::size_t t = 0; t < members.size(); ++t) {
      fold_of[members[t]] = static_cast<int>(t % folds);
    }
  }

  double best_cost = grid[0];
  double best_accuracy = -1.0;
  for (double cost : grid) {
    double accuracy_sum = 0.0;
    int folds_used = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<int> train_rows, eval_rows;
      for (int i = 0; i < n; ++i) {
        (fold_of[i] == f ? eval_rows : train_rows).push_back(i);
      }
      if (eval_rows.empty()) {
        std::fprintf(stderr, "warning: cross-validation fold %d is empty; skipped\n", f);
        continue;
      }
      if (train_rows.empty()) continue;
      Eigen::MatrixXd Xtrain(train_rows.size(), X.cols());
      std::vector<int> ytrain(train_rows.size());
      for (std::size_t t = 0; t < train_rows.size(); ++t) {
        Xtrain.row(t) = X.row(train_rows[t]);
        ytrain[t] = labels[train_rows[t]];
      }
      LinearSvmModel model = train_linear_svm(Xtrain, ytrain, cost);
      int correct = 0;
      for (int i : eval_rows) {
        correct += (svm_predict(model, X.row(i).transpose()) == labels[i]);
      }
      accuracy_sum += static_cast<double>(correct) / eval_rows.size();
      ++folds_used;
    }
    double accuracy = folds_used > 0 ? accuracy_sum / folds_used : 0.0;
    // Ties take the smaller cost (stronger regularization).
    if (accuracy > best_accuracy ||
        (accuracy == best_accuracy && cost < best_cost)) {
      best_accuracy = accuracy;
      best_cost = cost;
    }
  }
  return best_cost;
}

void write_svm_model_csv(const LinearSvmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int c = 0; c < model.num_classes; ++c) {
    out << c << ',' << format_double(model.b(c));
    for (Eigen::Index j = 0; j < model.W.cols(); ++j) {
      out << ',' << format_double(model.W(c, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<int> fd_svm_predict(const FermatMatrix& matrix,
                                std::span<const int> labeled_idx,
                                std::span<const int> labels,
                                const FdSvmConfig& cfg) {
  const int n = matrix.size();
  if (labeled_idx.size() != labels.size() || labeled_idx.empty()) {
    throw std::invalid_argument("fd_svm_predict: labeled sample is empty or misaligned");
  }
  std::vector<char> is_labeled(n, 0);
  for (int idx : labeled_idx) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("fd_svm_predict: labeled index out of range");
    }
    is_labeled[idx] = 1;
  }

  int p = cfg.dim_rule.automatic ? choose_target_dim(matrix, cfg.dim_rule.tol)
                                 : cfg.dim_rule.fixed_p;
  Embedding embedding = classical_mds(matrix, p);

  Eigen::MatrixXd X(labeled_idx.size(), embedding.coords.cols());
  for (std::size_t t = 0; t < labeled_idx.size(); ++t) {
    X.row(t) = embedding.coords.row(labeled_idx[t]);
  }
  std::vector<int> y(labels.begin(), labels.end());
  double cost = select_cost_cv(X, y, cfg.cost_grid, cfg.folds, cfg.seed);
  LinearSvmModel model = train_linear_svm(X, y, cost);

  std::vector<int> predictions;
  for (int i = 0; i < n; ++i) {
    if (is_labeled[i]) continue;
    predictions.push_back(svm_predict(model, embedding.coords.row(i).transpose()));
  }
  return predictions;
}

std::vector<int> fd_svm_pipeline(const LabeledDataset& data,
                                 const FermatParams& params,
                                 const FdSvmConfig& cfg, int workers) {
  validate_dataset(data);
  FermatMatrix matrix = fermat_matrix(data.cloud, params, workers);
  return fd_svm_predict(matrix, data.labeled_idx, data.labels, cfg);
}

}  // namespace fermat

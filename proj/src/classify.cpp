#include "fermat/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "fermat/rng.hpp"

namespace fermat {

namespace {

// Indices of the k smallest distances, equidistant entries by smaller index.
std::vector<int> nearest_k(std::span<const double> dist, int k) {
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int x, int y) {
                      return dist[x] != dist[y] ? dist[x] < dist[y] : x < y;
                    });
  order.resize(k);
  return order;
}

int argmax_class(const std::vector<double>& mass) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(mass.size()); ++c) {
    if (mass[c] > mass[best]) best = c;  // ties keep the smaller class id
  }
  return best;
}

}  // namespace

WknnVote weighted_knn_vote(std::span<const double> dist_to_labeled,
                           std::span<const int> labels, const WknnConfig& cfg) {
  const int n_labeled = static_cast<int>(dist_to_labeled.size());
  if (labels.size() != dist_to_labeled.size()) {
    throw std::invalid_argument("weighted_knn_vote: distances and labels differ in length");
  }
  if (n_labeled == 0) {
    throw std::invalid_argument("weighted_knn_vote: empty labeled sample");
  }
  if (cfg.k < 1 || cfg.k > n_labeled) {
    throw std::invalid_argument("weighted_knn_vote: k must be in [1, n_labeled]");
  }
  if (!(cfg.sigma > 0.0)) {
    throw std::invalid_argument("weighted_knn_vote: sigma must be > 0");
  }
  for (double d : dist_to_labeled) {
    if (!(d >= 0.0)) {
      throw std::invalid_argument("weighted_knn_vote: distances must be >= 0");
    }
  }

  int num_classes = 0;
  for (int label : labels) num_classes = std::max(num_classes, label + 1);

  WknnVote vote;
  vote.neighbors = nearest_k(dist_to_labeled, cfg.k);
  vote.class_mass.assign(num_classes, 0.0);

  const int nearest = vote.neighbors.front();
  if (dist_to_labeled[nearest] == 0.0) {
    // Exact hit: full weight on the coinciding point.
    vote.weights.assign(vote.neighbors.size(), 0.0);
    vote.weights.front() = 1.0;
    vote.class_mass[labels[nearest]] = 1.0;
    vote.predicted = labels[nearest];
    return vote;
  }

  // Softmin weights, stabilized by the minimum distance: subtracting d_min
  // inside the exponential cancels in the normalization, so the weights
  // equal exp(-d/sigma)/sum without underflowing to 0/0.
  const double d_min = dist_to_labeled[nearest];
  vote.weights.resize(vote.neighbors.size());
  double total = 0.0;
  for (std::size_t t = 0; t < vote.neighbors.size(); ++t) {
    double w = std::exp(-(dist_to_labeled[vote.neighbors[t]] - d_min) / cfg.sigma);
    vote.weights[t] = w;
    total += w;
  }
  for (std::size_t t = 0; t < vote.neighbors.size(); ++t) {
    vote.weights[t] /= total;
    vote.class_mass[labels[vote.neighbors[t]]] += vote.weights[t];
  }
  vote.predicted = argmax_class(vote.class_mass);
  return vote;
}

int weighted_knn_predict(std::span<const double> dist_to_labeled,
                         std::span<const int> labels, const WknnConfig& cfg) {
  return weighted_knn_vote(dist_to_labeled, labels, cfg).predicted;
}

int default_k(int n_labeled, int num_classes) {
  if (n_labeled < 1 || num_classes < 1) {
    throw std::invalid_argument("default_k: n_labeled and num_classes must be >= 1");
  }
  long k = std::lround(n_labeled / (1.5 * num_classes));
  return static_cast<int>(std::clamp<long>(k, 1, n_labeled));
}

int theoretical_k(int n_labeled) {
  if (n_labeled < 1) {
    throw std::invalid_argument("theoretical_k: n_labeled must be >= 1");
  }
  if (n_labeled < 2) return 1;
  long k = static_cast<long>(n_labeled / std::log(static_cast<double>(n_labeled)));
  return static_cast<int>(std::clamp<long>(k, 1, n_labeled));
}

std::vector<double> sigma_grid(const Eigen::MatrixXd& labeled_dists, int k) {
  const int n = static_cast<int>(labeled_dists.rows());
  if (labeled_dists.cols() != n || n < 2) {
    throw std::invalid_argument("sigma_grid: need a square matrix with n >= 2");
  }
  const int kth = std::clamp(k, 1, n - 1);
  std::vector<double> kth_dist(n);
  std::vector<double> row(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row[m++] = labeled_dists(i, j);
    }
    std::nth_element(row.begin(), row.begin() + (kth - 1), row.end());
    kth_dist[i] = row[kth - 1];
  }
  std::sort(kth_dist.begin(), kth_dist.end());
  double median = (n % 2 == 1)
                      ? kth_dist[n / 2]
                      : 0.5 * (kth_dist[n / 2 - 1] + kth_dist[n / 2]);
  if (!(median > 0.0)) {
    // Degenerate sample (duplicates dominate); fall back to the smallest
    // positive distance, or 1 if there is none.
    median = 1.0;
    for (double d : kth_dist) {
      if (d > 0.0) {
        median = d;
        break;
      }
    }
  }
  std::vector<double> grid(8);
  for (int t = 0; t < 8; ++t) {
    // log-spaced over [0.1 m, 10 m]
    grid[t] = median * std::pow(10.0, -1.0 + 2.0 * t / 7.0);
  }
  return grid;
}

double select_sigma_cv(const Eigen::MatrixXd& labeled_dists,
                       std::span<const int> labels, int k,
                       std::span<const double> grid, int folds,
                       std::uint64_t seed) {
  const int n = static_cast<int>(labeled_dists.rows());
  if (labeled_dists.cols() != n) {
    throw std::invalid_argument("select_sigma_cv: distance matrix must be square");
  }
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("select_sigma_cv: labels length mismatch");
  }
  if (grid.empty()) {
    throw std::invalid_argument("select_sigma_cv: empty sigma grid");
  }
  if (folds < 2) {
    throw std::invalid_argument("select_sigma_cv: need at least 2 folds");
  }

  // Stratified fold assignment: per class, deal a seeded shuffle round-robin.
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

  double best_sigma = grid[0];
  double best_accuracy = -1.0;
  std::vector<double> dist_to_train;
  std::vector<int> train_labels;
  for (double sigma : grid) {
    double accuracy_sum = 0.0;
    int folds_used = 0;
    for (int f = 0; f < folds; ++f) {
      int correct = 0, total = 0;
      for (int i = 0; i < n; ++i) {
        if (fold_of[i] != f) continue;
        dist_to_train.clear();
        train_labels.clear();
        for (int j = 0; j < n; ++j) {
          if (fold_of[j] == f) continue;
          dist_to_train.push_back(labeled_dists(i, j));
          train_labels.push_back(labels[j]);
        }
        if (train_labels.empty()) continue;
        WknnConfig cfg{std::min<int>(k, static_cast<int>(train_labels.size())), sigma};
        int predicted = weighted_knn_predict(dist_to_train, train_labels, cfg);
        correct += (predicted == labels[i]);
        ++total;
      }
      if (total == 0) {
        std::fprintf(stderr, "warning: cross-validation fold %d is empty; skipped\n", f);
        continue;
      }
      accuracy_sum += static_cast<double>(correct) / total;
      ++folds_used;
    }
    double accuracy = folds_used > 0 ? accuracy_sum / folds_used : 0.0;
    // Ties take the larger sigma (closer to the unweighted vote).
    if (accuracy > best_accuracy ||
        (accuracy == best_accuracy && sigma > best_sigma)) {
      best_accuracy = accuracy;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

int naive_knn_predict(const Eigen::VectorXd& query,
                      const Eigen::MatrixXd& labeled_points,
                      std::span<const int> labels, int k) {
  const int n = static_cast<int>(labeled_points.rows());
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("naive_knn_predict: labels length mismatch");
  }
  if (query.size() != labeled_points.cols()) {
    throw std::invalid_argument("naive_knn_predict: query dimension mismatch");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("naive_knn_predict: k must be in [1, n_labeled]");
  }
  Eigen::VectorXd sq =
      (labeled_points.rowwise() - query.transpose()).rowwise().squaredNorm();
  std::vector<double> dist(sq.data(), sq.data() + n);
  std::vector<int> nearest = nearest_k(dist, k);
  int num_classes = 0;
  for (int label : labels) num_classes = std::max(num_classes, label + 1);
  std::vector<double> mass(num_classes, 0.0);
  for (int idx : nearest) mass[labels[idx]] += 1.0;
  return argmax_class(mass);
}

}  // namespace fermat

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace fermat {

struct WknnConfig {
  int k = 1;
  double sigma = 1.0;
};

// One softmin-weighted vote. Neighbors are the k labeled points nearest to
// the query (ties by smaller index); weights are exp(-d/sigma) normalized
// over the k neighbors; the predicted class maximizes the summed weight,
// ties resolving to the smaller class id. A neighbor at distance exactly 0
// short-circuits: its label is returned with full weight (the sigma -> 0
// limit), which avoids degenerate ratios when sigma is far below the
// remaining distances.
struct WknnVote {
  int predicted = 0;
  std::vector<int> neighbors;      // indices into the labeled sample
  std::vector<double> weights;     // aligned with neighbors, sums to 1
  std::vector<double> class_mass;  // per-class summed weight
};

WknnVote weighted_knn_vote(std::span<const double> dist_to_labeled,
                           std::span<const int> labels, const WknnConfig& cfg);

int weighted_knn_predict(std::span<const double> dist_to_labeled,
                         std::span<const int> labels, const WknnConfig& cfg);

// Default neighborhood size round(n_labeled / (1.5 K)), clamped to
// [1, n_labeled].
int default_k(int n_labeled, int num_classes);

// Rate-motivated alternative floor(n_labeled / ln(n_labeled)), clamped to
// [1, n_labeled]; exposed as an option, not the default.
int theoretical_k(int n_labeled);

// Default sigma grid: 8 log-spaced values spanning [0.1 m, 10 m] where m is
// the median k-th-neighbor distance over the labeled sample.
std::vector<double> sigma_grid(const Eigen::MatrixXd& labeled_dists, int k);

// Stratified cross-validated sigma selection on the labeled sample.
// labeled_dists is the n_l x n_l matrix of pairwise distances. Accuracy ties
// resolve to the larger sigma (closer to the unweighted vote). Folds are
// dealt per class from a seeded shuffle; empty evaluation folds are skipped
// with a warning.
double select_sigma_cv(const Eigen::MatrixXd& labeled_dists,
                       std::span<const int> labels, int k,
                       std::span<const double> grid, int folds,
                       std::uint64_t seed);

// Unweighted majority vote over the k Euclidean-nearest labeled points.
int naive_knn_predict(const Eigen::VectorXd& query,
                      const Eigen::MatrixXd& labeled_points,
                      std::span<const int> labels, int k);

}  // namespace fermat

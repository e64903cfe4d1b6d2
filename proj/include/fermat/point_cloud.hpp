#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace fermat {

// Finite point set in R^D, one point per row. Pairwise structure downstream
// (graphs, metrics) needs at least two points; duplicates are legal.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
    if (points_.rows() < 2) {
      throw std::invalid_argument("PointCloud: need at least 2 points, got " +
                                  std::to_string(points_.rows()));
    }
    if (points_.cols() < 1) {
      throw std::invalid_argument("PointCloud: ambient dimension must be >= 1");
    }
    if (!points_.allFinite()) {
      throw std::invalid_argument("PointCloud: coordinates must be finite");
    }
  }

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::RowVectorXd point(int i) const { return points_.row(i); }

 private:
  Eigen::MatrixXd points_;
};

// Point cloud plus class information for the labeled subset.
// labels[t] is the class of point labeled_idx[t]; num_classes = K and every
// label lies in {0, ..., K-1}. Generators return fully labeled datasets
// (labeled_idx = all indices); harness code restricts the labeled view.
struct LabeledDataset {
  PointCloud cloud;
  std::vector<int> labels;
  std::vector<int> labeled_idx;
  int num_classes = 0;
};

void validate_dataset(const LabeledDataset& data);

// Semi-supervised view: keep only the given positions of labeled_idx labeled.
LabeledDataset restrict_labels(const LabeledDataset& full,
                               const std::vector<int>& keep_idx);

}  // namespace fermat

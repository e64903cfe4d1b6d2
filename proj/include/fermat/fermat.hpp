#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fermat/graph.hpp"
#include "fermat/point_cloud.hpp"

namespace fermat {

// Parameters of the density-sensitive metric estimator. alpha >= 1 is the
// path-length exponent; intrinsic_dim enters only through the global scale
// factor n^((alpha-1)/(alpha*d)).
struct FermatParams {
  double alpha = 4.0;
  int intrinsic_dim = 2;
  GraphKind graph_kind = GraphKind::KnnMstUnion;  // Complete or KnnMstUnion
  int knn_k = 1;                                  // only for KnnMstUnion
};

void validate_params(const FermatParams& params, int n);

// Single-source power-weighted shortest paths: entry j is
// min over graph paths from source to j of (sum of segment^alpha)^(1/alpha),
// +infinity when j is unreachable. No global scale factor is applied.
std::vector<double> power_path_distances(const AdjacencyGraph& graph,
                                         const PointCloud& cloud, double alpha,
                                         int source);

// Scaled all-pairs distance matrix over a point cloud.
struct FermatMatrix {
  Eigen::MatrixXd dist;  // n x n, symmetric, zero diagonal
  FermatParams params;
  double scale = 1.0;    // n^((alpha-1)/(alpha*d))

  int size() const { return static_cast<int>(dist.rows()); }
};

// Builds the requested graph (complete, or k-NN united with the Euclidean
// MST) and runs one power-weighted Dijkstra per source. `workers` bounds the
// number of threads used to spread sources; results do not depend on it.
FermatMatrix fermat_matrix(const PointCloud& cloud, const FermatParams& params,
                           int workers = 1);

// Distances from one held-out point to every cloud point: the new point is
// attached to its k0 Euclidean-nearest cloud points (ties to the smaller
// index), paths run through the otherwise unchanged graph, and the matrix
// scale for the original n is applied. The input graph is not mutated.
std::vector<double> extend_out_of_sample(const AdjacencyGraph& graph,
                                         const PointCloud& cloud,
                                         const Eigen::VectorXd& x_new, int k0,
                                         const FermatParams& params);

// Default attachment degree: the average degree of the graph, rounded,
// at least 1.
int default_attachment_k(const AdjacencyGraph& graph);

// Serialization. CSV: n rows of n comma-separated decimals (shortest
// round-trip formatting; reloading reproduces every double bit-for-bit).
// Binary: little-endian fixed header (uint64 n, double alpha, uint64 d,
// double scale) followed by n*n row-major doubles.
void write_fermat_csv(const FermatMatrix& matrix, const std::string& path);
FermatMatrix read_fermat_csv(const std::string& path);
void write_fermat_binary(const FermatMatrix& matrix, const std::string& path);
FermatMatrix read_fermat_binary(const std::string& path);

// Metric spot checks used by tests and the verification harness.
struct MetricCheckReport {
  double max_asymmetry = 0.0;
  double max_diagonal = 0.0;
  double min_entry = 0.0;
  double max_triangle_violation = 0.0;  // max over sampled triples of d(i,k)-d(i,j)-d(j,k)
};
MetricCheckReport check_metric_axioms(const FermatMatrix& matrix, int triples,
                                      std::uint64_t seed);

}  // namespace fermat

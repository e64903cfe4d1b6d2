#include "fermat/mds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fermat/csv.hpp"

namespace fermat {

namespace {

void validate_distance_matrix(const Eigen::MatrixXd& dist) {
  const Eigen::Index n = dist.rows();
  if (dist.cols() != n || n < 2) {
    throw std::invalid_argument("mds: need a square distance matrix with n >= 2");
  }
  if (!dist.allFinite()) {
    throw std::invalid_argument("mds: distance matrix has non-finite entries");
  }
  if (dist.minCoeff() < 0.0) {
    throw std::invalid_argument("mds: distance matrix has negative entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) {
        throw std::invalid_argument("mds: distance matrix is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

// -(1/2) H D^2 H with H = I - (1/n) 11^T.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& dist) {
  const Eigen::Index n = dist.rows();
  Eigen::MatrixXd sq = dist.array().square();
  Eigen::VectorXd row_mean = sq.rowwise().mean();
  double grand_mean = row_mean.mean();
  Eigen::MatrixXd centered(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      centered(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand_mean);
    }
  }
  return centered;
}

}  // namespace

Embedding classical_mds(const Eigen::MatrixXd& dist, int p) {
  validate_distance_matrix(dist);
  const int n = static_cast<int>(dist.rows());
  if (p < 1 || p > n - 1) {
    throw std::invalid_argument("classical_mds: p must be in [1, n-1], got " +
                                std::to_string(p));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(double_center(dist));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("classical_mds: eigendecomposition failed");
  }
  // Eigen returns eigenvalues ascending; take the top p, clamped at zero.
  Embedding embedding;
  embedding.p = p;
  embedding.eigvals.resize(p);
  embedding.coords.resize(n, p);
  for (int a = 0; a < p; ++a) {
    double lambda = std::max(0.0, solver.eigenvalues()(n - 1 - a));
    embedding.eigvals(a) = lambda;
    embedding.coords.col(a) = solver.eigenvectors().col(n - 1 - a) * std::sqrt(lambda);
  }

  // Exact re-centering: the zero-eigenvalue subspace contains the constant
  // vector, so numerically retained near-zero axes can carry a tiny mean.
  for (int a = 0; a < p; ++a) {
    embedding.coords.col(a).array() -= embedding.coords.col(a).mean();
    // Sign fix: first entry of largest magnitude becomes nonnegative.
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      double mag = std::abs(embedding.coords(i, a));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (embedding.coords(arg, a) < 0.0) embedding.coords.col(a) = -embedding.coords.col(a);
  }

  double distortion = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dist(i, j) <= 0.0) continue;
      double emb = (embedding.coords.row(i) - embedding.coords.row(j)).norm();
      distortion = std::max(distortion, std::abs(emb - dist(i, j)) / dist(i, j));
    }
  }
  embedding.distortion = distortion;
  return embedding;
}

Embedding classical_mds(const FermatMatrix& dist, int p) {
  return classical_mds(dist.dist, p);
}

int choose_target_dim(const Eigen::MatrixXd& dist, double tol) {
  validate_distance_matrix(dist);
  if (!(tol > 0.0) || !(tol < 1.0)) {
    throw std::invalid_argument("choose_target_dim: tol must be in (0, 1)");
  }
  const int n = static_cast<int>(dist.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(double_center(dist));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("choose_target_dim: eigendecomposition failed");
  }
  double largest = solver.eigenvalues()(n - 1);
  int count = 0;
  if (largest > 0.0) {
    for (int i = 0; i < n; ++i) {
      if (solver.eigenvalues()(i) > tol * largest) ++count;
    }
  }
  return std::clamp(count, 1, std::max(1, n - 2));
}

int choose_target_dim(const FermatMatrix& dist, double tol) {
  return choose_target_dim(dist.dist, tol);
}

Eigen::VectorXd place_out_of_sample(const Embedding& embedding,
                                    const Eigen::VectorXd& dists) {
  const Eigen::Index n = embedding.coords.rows();
  if (dists.size() != n) {
    throw std::invalid_argument("place_out_of_sample: need one distance per anchor");
  }
  if (dists.minCoeff() < 0.0) {
    throw std::invalid_argument("place_out_of_sample: distances must be >= 0");
  }
  // b_i = (|c_i|^2 - mean|c|^2 - d_i^2 + mean d^2) / 2; solve diag(l) z = C^T b.
  Eigen::VectorXd csq = embedding.coords.rowwise().squaredNorm();
  Eigen::VectorXd dsq = dists.array().square();
  double cmean = csq.mean(), dmean = dsq.mean();
  Eigen::VectorXd b = 0.5 * ((csq.array() - cmean) - (dsq.array() - dmean));
  Eigen::VectorXd rhs = embedding.coords.transpose() * b;
  Eigen::VectorXd z(embedding.p);
  const double floor_val = embedding.eigvals.size() > 0
                               ? 1e-12 * std::max(1.0, embedding.eigvals(0))
                               : 1.0;
  for (int a = 0; a < embedding.p; ++a) {
    z(a) = embedding.eigvals(a) > floor_val ? rhs(a) / embedding.eigvals(a) : 0.0;
  }
  return z;
}

void write_embedding_csv(const Embedding& embedding, const std::string& path) {
  write_csv_matrix(embedding.coords, path);
}

}  // namespace fermat

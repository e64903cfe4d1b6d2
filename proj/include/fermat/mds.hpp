#pragma once

#include <Eigen/Dense>
#include <string>

#include "fermat/fermat.hpp"

namespace fermat {

// Classical (Torgerson) multidimensional scaling result.
// coords columns are centered (means ~ 0) and sign-fixed: the entry of
// largest magnitude in each axis (first such entry on ties) is nonnegative.
struct Embedding {
  Eigen::MatrixXd coords;   // n x p
  int p = 0;
  Eigen::VectorXd eigvals;  // p retained eigenvalues, descending, clamped >= 0
  double distortion = 0.0;  // max relative error of embedded vs input distances
};

// Double-centers -(1/2) D^2 with H = I - (1/n) 11^T, eigendecomposes the
// symmetric result, clamps negative eigenvalues to zero and scales the top-p
// eigenvectors by sqrt(eigenvalue). p must lie in [1, n-1]. Input must be
// symmetric with nonnegative entries. Distortion is the max of
// |d_emb - d_in| / d_in over pairs with d_in > 0 (zero-distance pairs embed
// at distance ~0 and are excluded from the ratio).
Embedding classical_mds(const Eigen::MatrixXd& dist, int p);
Embedding classical_mds(const FermatMatrix& dist, int p);

// Number of centered-matrix eigenvalues exceeding tol * largest, clamped to
// [1, max(1, n-2)]. tol must lie in (0, 1).
int choose_target_dim(const Eigen::MatrixXd& dist, double tol = 1e-10);
int choose_target_dim(const FermatMatrix& dist, double tol = 1e-10);

// Least-squares placement of a held-out point from its distances to all n
// embedded anchors: solves the linearized system C z = b (Gower's formula;
// diag(eigvals) is the normal matrix). Axes with eigenvalue ~0 contribute 0.
Eigen::VectorXd place_out_of_sample(const Embedding& embedding,
                                    const Eigen::VectorXd& dists);

// CSV export: n rows of p comma-separated coordinates.
void write_embedding_csv(const Embedding& embedding, const std::string& path);

}  // namespace fermat

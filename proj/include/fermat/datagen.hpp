#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fermat/point_cloud.hpp"

namespace fermat {

// Two-class "moon" angle model. Per point, U and V are independent
// N(0.5, 0.2^2) draws (fresh for every point, untruncated) and
//   class 0:  phi = pi U,          theta =  (pi - 1) sin(phi) + V
//   class 1:  phi = pi U + pi/2,   theta = -(pi - 1) sin(phi - pi/2) + 0.8 pi - V.
// The variant selects the ambient lift of (phi, theta):
//   SphereI       (sin t cos p, sin t sin p, cos t) in R^3
//   NonlinearLiftII  X_j = phi t_j^2 + theta sin(t_j), 500 equispaced t_j in [0,1]
//   NoisyPadIII   (phi + Z_1, theta + Z_2, Z_3, ..., Z_500), Z iid N(0, 0.01^2)
enum class TwoMoonVariant { SphereI, NonlinearLiftII, NoisyPadIII };

struct TwoMoonModel {
  TwoMoonVariant variant = TwoMoonVariant::SphereI;
  int n0 = 0;
  int n1 = 0;
  std::uint64_t seed = 0;
};

// Deterministic given the seed; returns a fully labeled two-class dataset
// (class-0 points first).
LabeledDataset generate_two_moon(const TwoMoonModel& model);

// The angle map alone, exposed so degenerate inputs (e.g. U = V = 0.5) can
// be pinned in tests. Returns (phi, theta).
std::pair<double, double> two_moon_angles(int cls, double u, double v);

// Two von Mises-Fisher clusters on the unit sphere S^2. concentration = 0
// degenerates to the uniform sphere distribution. Mean directions must be
// unit vectors (1e-12). Class 0 points come first.
struct VmfClusterModel {
  Eigen::Vector3d mu0 = Eigen::Vector3d(0, 0, 1);
  Eigen::Vector3d mu1 = Eigen::Vector3d(0, 0, -1);
  double concentration = 5.0;
  int n_per_class = 0;
  std::uint64_t seed = 0;
};

LabeledDataset generate_vmf_clusters(const VmfClusterModel& model);

// Intrinsic dimension from the two-nearest-neighbor ratio estimator:
// mu_i = r2(i)/r1(i) follows a Pareto law with exponent d, so d is fit by a
// least-squares line through the origin of -log(1 - F_emp) against log mu,
// using the smallest 90% of ratios. Points with r1 = 0 (duplicates) are
// excluded; if more than half the cloud is degenerate that way, this throws.
// Requires n >= 10. Exactly invariant to rigid motions and uniform scaling.
double estimate_intrinsic_dim(const PointCloud& cloud);

// Uniform per-class subsample of labeled indices (without replacement),
// deterministic given the seed; result is sorted ascending. Throws when a
// class has fewer than per_class members.
std::vector<int> sample_labeled_indices(std::span<const int> labels,
                                        int per_class, std::uint64_t seed);

}  // namespace fermat

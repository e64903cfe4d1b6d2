#include "fermat/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fermat/rng.hpp"

namespace fermat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kLiftDim = 500;

Eigen::RowVectorXd lift_point(TwoMoonVariant variant, double phi, double theta,
                              Rng& rng) {
  switch (variant) {
    case TwoMoonVariant::SphereI: {
      Eigen::RowVectorXd x(3);
      x << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta);
      return x;
    }
    case TwoMoonVariant::NonlinearLiftII: {
      Eigen::RowVectorXd x(kLiftDim);
      for (int j = 0; j < kLiftDim; ++j) {
        double t = static_cast<double>(j) / (kLiftDim - 1);  // equispaced on [0,1]
        x(j) = phi * t * t + theta * std::sin(t);
      }
      return x;
    }
    case TwoMoonVariant::NoisyPadIII: {
      Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(kLiftDim);
      for (int j = 0; j < kLiftDim; ++j) x(j) = rng.normal(0.0, 0.01);
      x(0) += phi;
      x(1) += theta;
      return x;
    }
  }
  throw std::invalid_argument("lift_point: unknown variant");
}

}  // namespace

std::pair<double, double> two_moon_angles(int cls, double u, double v) {
  if (cls == 0) {
    double phi = kPi * u;
    return {phi, (kPi - 1.0) * std::sin(phi) + v};
  }
  if (cls == 1) {
    double phi = kPi * u + kPi / 2.0;
    return {phi, -(kPi - 1.0) * std::sin(phi - kPi / 2.0) + 0.8 * kPi - v};
  }
  throw std::invalid_argument("two_moon_angles: class must be 0 or 1");
}

LabeledDataset generate_two_moon(const TwoMoonModel& model) {
  if (model.n0 < 1 || model.n1 < 1) {
    throw std::invalid_argument("generate_two_moon: need n0 >= 1 and n1 >= 1");
  }
  const int n = model.n0 + model.n1;
  const int dim = model.variant == TwoMoonVariant::SphereI ? 3 : kLiftDim;
  Eigen::MatrixXd points(n, dim);
  std::vector<int> labels(n);
  Rng rng(model.seed);
  int row = 0;
  for (int cls = 0; cls <= 1; ++cls) {
    const int count = cls == 0 ? model.n0 : model.n1;
    for (int t = 0; t < count; ++t, ++row) {
      double u = rng.normal(0.5, 0.2);
      double v = rng.normal(0.5, 0.2);
      auto [phi, theta] = two_moon_angles(cls, u, v);
      points.row(row) = lift_point(model.variant, phi, theta, rng);
      labels[row] = cls;
    }
  }
  std::vector<int> labeled_idx(n);
  std::iota(labeled_idx.begin(), labeled_idx.end(), 0);
  LabeledDataset data{PointCloud(std::move(points)), std::move(labels),
                      std::move(labeled_idx), 2};
  validate_dataset(data);
  return data;
}

LabeledDataset generate_vmf_clusters(const VmfClusterModel& model) {
  if (model.n_per_class < 1) {
    throw std::invalid_argument("generate_vmf_clusters: n_per_class must be >= 1");
  }
  if (!(model.concentration >= 0.0)) {
    throw std::invalid_argument("generate_vmf_clusters: concentration must be >= 0");
  }
  for (const Eigen::Vector3d& mu : {model.mu0, model.mu1}) {
    if (std::abs(mu.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "generate_vmf_clusters: mean directions must be unit vectors");
    }
  }

  const int n = 2 * model.n_per_class;
  Eigen::MatrixXd points(n, 3);
  std::vector<int> labels(n);
  Rng rng(model.seed);
  const double kappa = model.concentration;
  int row = 0;
  for (int cls = 0; cls <= 1; ++cls) {
    const Eigen::Vector3d mu = cls == 0 ? model.mu0 : model.mu1;
    // Orthonormal frame for the tangent plane: start from the coordinate
    // axis least aligned with mu.
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(mu(a)) < std::abs(mu(axis))) axis = a;
    }
    Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis);
    e1 = (e1 - e1.dot(mu) * mu).normalized();
    Eigen::Vector3d e2 = mu.cross(e1);

    for (int t = 0; t < model.n_per_class; ++t, ++row) {
      // Polar component by exact CDF inversion on S^2: density prop. to
      // exp(kappa w) on [-1, 1].
      double u1 = rng.uniform01();
      double w;
      if (kappa == 0.0) {
        w = 2.0 * u1 - 1.0;
      } else {
        w = 1.0 + std::log(u1 + (1.0 - u1) * std::exp(-2.0 * kappa)) / kappa;
      }
      double psi = 2.0 * kPi * rng.uniform01();
      double radial = std::sqrt(std::max(0.0, 1.0 - w * w));
      Eigen::Vector3d x =
          w * mu + radial * (std::cos(psi) * e1 + std::sin(psi) * e2);
      points.row(row) = x.transpose();
      labels[row] = cls;
    }
  }
  std::vector<int> labeled_idx(n);
  std::iota(labeled_idx.begin(), labeled_idx.end(), 0);
  LabeledDataset data{PointCloud(std::move(points)), std::move(labels),
                      std::move(labeled_idx), 2};
  validate_dataset(data);
  return data;
}

double estimate_intrinsic_dim(const PointCloud& cloud) {
  const int n = cloud.size();
  if (n < 10) {
    throw std::invalid_argument("estimate_intrinsic_dim: need at least 10 points");
  }
  const Eigen::MatrixXd& pts = cloud.points();
  std::vector<double> ratios;
  ratios.reserve(n);
  int degenerate = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd sq = (pts.rowwise() - pts.row(i)).rowwise().squaredNorm();
    // Two smallest distances excluding the point itself.
    double r1_sq = std::numeric_limits<double>::infinity();
    double r2_sq = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = sq(j);
      if (d < r1_sq) {
        r2_sq = r1_sq;
        r1_sq = d;
      } else if (d < r2_sq) {
        r2_sq = d;
      }
    }
    if (r1_sq == 0.0) {
      ++degenerate;  // duplicate point: ratio undefined
      continue;
    }
    ratios.push_back(std::sqrt(r2_sq) / std::sqrt(r1_sq));
  }
  if (degenerate > n / 2) {
    throw std::invalid_argument(
        "estimate_intrinsic_dim: more than half the points are duplicates (" +
        std::to_string(degenerate) + " of " + std::to_string(n) + ")");
  }
  // The ratio mu is Pareto with survival mu^-d, so -log(1 - F(mu)) = d log mu.
  // Fit that line through the origin on the empirical CDF, using only the
  // smallest 90% of ratios (the tail is noisy at two-neighbor scale). A
  // truncated plain average of log mu would overestimate d by ~34%, so the
  // regression form is the one that actually recovers the dimension.
  std::sort(ratios.begin(), ratios.end());
  const std::size_t total = ratios.size();
  // The largest ratio sits at empirical CDF 1 where -log(1 - F) blows up, so
  // the trim must drop at least that one point even on tiny pools.
  const std::size_t kept = std::min(
      total - static_cast<std::size_t>(0.1 * total), total - 1);
  double xy = 0.0, xx = 0.0;
  for (std::size_t t = 0; t < kept; ++t) {
    const double x = std::log(ratios[t]);
    const double y = -std::log1p(-static_cast<double>(t + 1) /
                                 static_cast<double>(total));
    xy += x * y;
    xx += x * x;
  }
  if (!(xx > 0.0)) {
    throw std::invalid_argument(
        "estimate_intrinsic_dim: degenerate ratio distribution (all first and "
        "second neighbor distances equal)");
  }
  return xy / xx;
}

std::vector<int> sample_labeled_indices(std::span<const int> labels,
                                        int per_class, std::uint64_t seed) {
  if (per_class < 1) {
    throw std::invalid_argument("sample_labeled_indices: per_class must be >= 1");
  }
  int num_classes = 0;
  for (int label : labels) {
    if (label < 0) {
      throw std::invalid_argument("sample_labeled_indices: negative label");
    }
    num_classes = std::max(num_classes, label + 1);
  }
  std::vector<int> chosen;
  Rng rng(seed);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(members.size()) < per_class) {
      throw std::invalid_argument("sample_labeled_indices: class " +
                                  std::to_string(c) + " has " +
                                  std::to_string(members.size()) +
                                  " members, need " + std::to_string(per_class));
    }
    shuffle(members, rng);
    chosen.insert(chosen.end(), members.begin(), members.begin() + per_class);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace fermat

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/classify.hpp"
#include "fermat/datagen.hpp"
#include "fermat/fermat.hpp"
#include "fermat/graph.hpp"
#include "fermat/mds.hpp"
#include "fermat/point_cloud.hpp"
#include "fermat/svm.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;

namespace {

fermat::GraphKind graph_from_name(const std::string& name) {
  if (name == "complete") {
    return fermat::GraphKind::Complete;
  }
  if (name == "knm") {
    return fermat::GraphKind::KnnMstUnion;
  }
  throw std::invalid_argument("graph must be 'complete' or 'knm', got '" +
                              name + "'");
}

fermat::TwoMoonVariant variant_from_name(const std::string& name) {
  if (name == "sphere_i") {
    return fermat::TwoMoonVariant::SphereI;
  }
  if (name == "lift_ii") {
    return fermat::TwoMoonVariant::NonlinearLiftII;
  }
  if (name == "noise_iii") {
    return fermat::TwoMoonVariant::NoisyPadIII;
  }
  throw std::invalid_argument(
      "variant must be 'sphere_i', 'lift_ii' or 'noise_iii', got '" + name +
      "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Density-sensitive shortest-path metrics over point clouds, with "
      "classifiers and synthetic data generators built on top of them.";

  py::class_<fermat::FermatMatrix>(m, "FermatMatrix",
                                   "Scaled all-pairs distance matrix.")
      .def_property_readonly(
          "dist", [](const fermat::FermatMatrix& f) { return f.dist; },
          "n x n symmetric distance matrix (numpy copy).")
      .def_property_readonly(
          "alpha",
          [](const fermat::FermatMatrix& f) { return f.params.alpha; })
      .def_property_readonly(
          "intrinsic_dim",
          [](const fermat::FermatMatrix& f) { return f.params.intrinsic_dim; })
      .def_property_readonly(
          "scale", [](const fermat::FermatMatrix& f) { return f.scale; },
          "Global factor n^((alpha-1)/(alpha*d)) already applied to dist.")
      .def("__len__", &fermat::FermatMatrix::size)
      .def("__repr__", [](const fermat::FermatMatrix& f) {
        return "FermatMatrix(n=" + std::to_string(f.size()) +
               ", alpha=" + std::to_string(f.params.alpha) + ")";
      });

  py::class_<fermat::Embedding>(m, "Embedding",
                                "Classical MDS embedding result.")
      .def_readonly("coords", &fermat::Embedding::coords,
                    "n x p coordinate matrix, columns centered and "
                    "sign-fixed.")
      .def_readonly("p", &fermat::Embedding::p)
      .def_readonly("eigvals", &fermat::Embedding::eigvals,
                    "Retained eigenvalues, descending, clamped >= 0.")
      .def_readonly("distortion", &fermat::Embedding::distortion,
                    "Max relative error of embedded vs input distances.")
      .def("__repr__", [](const fermat::Embedding& e) {
        return "Embedding(n=" + std::to_string(e.coords.rows()) +
               ", p=" + std::to_string(e.p) + ")";
      });

  m.def(
      "two_moon",
      [](const std::string& variant, int n0, int n1, std::uint64_t seed) {
        fermat::TwoMoonModel model;
        model.variant = variant_from_name(variant);
        model.n0 = n0;
        model.n1 = n1;
        model.seed = seed;
        fermat::LabeledDataset data = fermat::generate_two_moon(model);
        return py::make_tuple(data.cloud.points(), data.labels);
      },
      py::arg("variant"), py::arg("n0"), py::arg("n1"), py::arg("seed"),
      "Two-class moon dataset; variant is 'sphere_i', 'lift_ii' or "
      "'noise_iii'. Returns (points, labels) with class-0 rows first.");

  m.def(
      "vmf_clusters",
      [](int n_per_class, std::uint64_t seed, double concentration) {
        fermat::VmfClusterModel model;
        model.n_per_class = n_per_class;
        model.seed = seed;
        model.concentration = concentration;
        fermat::LabeledDataset data = fermat::generate_vmf_clusters(model);
        return py::make_tuple(data.cloud.points(), data.labels);
      },
      py::arg("n_per_class"), py::arg("seed"),
      py::arg("concentration") = 5.0,
      "Two antipodal von Mises-Fisher clusters on the unit sphere. Returns "
      "(points, labels).");

  m.def(
      "estimate_intrinsic_dim",
      [](const Eigen::MatrixXd& points) {
        return fermat::estimate_intrinsic_dim(fermat::PointCloud(points));
      },
      py::arg("points"),
      "Two-nearest-neighbor ratio estimate of the intrinsic dimension.");

  m.def(
      "sample_labeled_indices",
      [](const std::vector<int>& labels, int per_class, std::uint64_t seed) {
        return fermat::sample_labeled_indices(labels, per_class, seed);
      },
      py::arg("labels"), py::arg("per_class"), py::arg("seed"),
      "Seeded per-class subsample of indices, sorted ascending.");

  m.def("default_graph_k", &fermat::default_graph_k, py::arg("n"),
        "Default k-NN degree round(sqrt(n)/2), at least 1.");

  m.def(
      "fermat_matrix",
      [](const Eigen::MatrixXd& points, double alpha, int d,
         const std::string& graph, int knn_k, int workers) {
        fermat::PointCloud cloud(points);
        fermat::FermatParams params;
        params.alpha = alpha;
        params.intrinsic_dim = d;
        params.graph_kind = graph_from_name(graph);
        params.knn_k = knn_k > 0 ? knn_k : fermat::default_graph_k(cloud.size());
        return fermat::fermat_matrix(cloud, params, workers);
      },
      py::arg("points"), py::arg("alpha") = 4.0, py::arg("d") = 2,
      py::arg("graph") = "knm", py::arg("knn_k") = 0, py::arg("workers") = 1,
      "All-pairs power-weighted shortest-path distances, scaled by "
      "n^((alpha-1)/(alpha*d)). graph is 'knm' (k-NN united with the "
      "Euclidean MST) or 'complete'; knn_k <= 0 picks the default degree.");

  m.def(
      "classical_mds",
      [](const Eigen::MatrixXd& dist, int p) {
        return fermat::classical_mds(dist, p);
      },
      py::arg("dist"), py::arg("p"),
      "Classical (Torgerson) MDS of a symmetric distance matrix into R^p.");

  m.def(
      "choose_target_dim",
      [](const Eigen::MatrixXd& dist, double tol) {
        return fermat::choose_target_dim(dist, tol);
      },
      py::arg("dist"), py::arg("tol") = 1e-10,
      "Eigenvalue-count rule for the embedding dimension.");

  m.def(
      "weighted_knn_predict",
      [](const std::vector<double>& dist_to_labeled,
         const std::vector<int>& labels, int k, double sigma) {
        fermat::WknnConfig cfg;
        cfg.k = k;
        cfg.sigma = sigma;
        return fermat::weighted_knn_predict(dist_to_labeled, labels, cfg);
      },
      py::arg("dist_to_labeled"), py::arg("labels"), py::arg("k"),
      py::arg("sigma"),
      "Softmin-weighted k-NN vote over precomputed distances to the labeled "
      "sample.");

  m.def(
      "select_sigma_cv",
      [](const Eigen::MatrixXd& labeled_dists, const std::vector<int>& labels,
         int k, const std::vector<double>& grid, int folds,
         std::uint64_t seed) {
        return fermat::select_sigma_cv(labeled_dists, labels, k, grid, folds,
                                       seed);
      },
      py::arg("labeled_dists"), py::arg("labels"), py::arg("k"),
      py::arg("grid"), py::arg("folds") = 5, py::arg("seed") = 0,
      "Stratified cross-validated bandwidth selection on the labeled "
      "sample.");

  m.def(
      "sigma_grid",
      [](const Eigen::MatrixXd& labeled_dists, int k) {
        return fermat::sigma_grid(labeled_dists, k);
      },
      py::arg("labeled_dists"), py::arg("k"),
      "Default log-spaced bandwidth grid from the median k-th-neighbor "
      "distance.");

  m.def("default_k", &fermat::default_k, py::arg("n_labeled"),
        py::arg("num_classes"),
        "Default vote size round(n_labeled / (1.5 K)), clamped to "
        "[1, n_labeled].");

  m.def(
      "fd_svm_predict",
      [](const fermat::FermatMatrix& matrix,
         const std::vector<int>& labeled_idx, const std::vector<int>& labels,
         std::uint64_t seed) {
        fermat::FdSvmConfig cfg;
        cfg.seed = seed;
        return fermat::fd_svm_predict(matrix, labeled_idx, labels, cfg);
      },
      py::arg("matrix"), py::arg("labeled_idx"), py::arg("labels"),
      py::arg("seed") = 0,
      "Embed the full distance matrix by classical MDS and classify the "
      "unlabeled points with a cross-validated linear SVM; returns "
      "predictions for unlabeled indices in ascending order.");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}

#include "fermat/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fermat/classify.hpp"
#include "fermat/csv.hpp"
#include "fermat/rng.hpp"
#include "fermat/svm.hpp"

namespace fermat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Sub-stream tags for the per-repetition seed.
enum : std::uint64_t { kDataStream = 1, kLabelStream = 2, kFoldStream = 3 };

LabeledDataset make_dataset(const ExperimentConfig& config, int n_labeled,
                            std::uint64_t data_seed) {
  const int total = n_labeled + config.n_unlabeled;
  switch (config.dataset.kind) {
    case DatasetKind::TwoMoon: {
      if (total % 2 != 0) {
        throw std::invalid_argument(
            "experiment: n_labeled + n_unlabeled must be even for two-class "
            "generators, got " + std::to_string(total));
      }
      TwoMoonModel model{config.dataset.moon_variant, total / 2, total / 2,
                         data_seed};
      return generate_two_moon(model);
    }
    case DatasetKind::Vmf: {
      if (total % 2 != 0) {
        throw std::invalid_argument(
            "experiment: n_labeled + n_unlabeled must be even for two-class "
            "generators, got " + std::to_string(total));
      }
      VmfClusterModel model = config.dataset.vmf;
      model.n_per_class = total / 2;
      model.seed = data_seed;
      return generate_vmf_clusters(model);
    }
    case DatasetKind::Csv:
      return load_csv_dataset(config.dataset.points_path,
                              config.dataset.labels_path);
  }
  throw std::invalid_argument("experiment: unknown dataset kind");
}

FermatParams make_params(const ExperimentConfig& config,
                         const PointCloud& cloud) {
  FermatParams params;
  params.alpha = config.alpha;
  params.graph_kind = config.graph_kind;
  params.knn_k =
      config.knn_k > 0 ? config.knn_k : default_graph_k(cloud.size());
  if (config.dim_mode == DimMode::Fixed) {
    params.intrinsic_dim = config.fixed_dim;
  } else {
    // Callers round the real-valued estimate for the scale exponent.
    params.intrinsic_dim = std::max(
        1, static_cast<int>(std::lround(estimate_intrinsic_dim(cloud))));
  }
  return params;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::FdWknn: return "fdwknn";
    case Method::FdSvm: return "fdsvm";
    case Method::NaiveKnn: return "naiveknn";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "fdwknn") return Method::FdWknn;
  if (name == "fdsvm") return Method::FdSvm;
  if (name == "naiveknn") return Method::NaiveKnn;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected fdwknn, fdsvm or naiveknn)");
}

int worker_threads_from_env() {
  const char* raw = std::getenv("FERMATSC_THREADS");
  if (!raw) return 1;
  char* end = nullptr;
  long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1 || value > 1024) {
    std::fprintf(stderr, "warning: ignoring invalid FERMATSC_THREADS='%s'\n", raw);
    return 1;
  }
  return static_cast<int>(value);
}

TrialResult run_trial(const ExperimentConfig& config, Method method,
                      int n_labeled, int rep_index) {
  if (rep_index < 0) throw std::invalid_argument("run_trial: rep_index must be >= 0");
  const std::uint64_t trial_seed =
      config.seed ^ split_mix64(static_cast<std::uint64_t>(rep_index));
  const auto start = Clock::now();

  LabeledDataset full =
      make_dataset(config, n_labeled, mix_seed(trial_seed, kDataStream));
  const int n = full.cloud.size();
  if (n_labeled % full.num_classes != 0) {
    throw std::invalid_argument("run_trial: n_labeled (" +
                                std::to_string(n_labeled) +
                                ") must divide evenly across " +
                                std::to_string(full.num_classes) + " classes");
  }
  std::vector<int> truth(n, -1);
  for (std::size_t t = 0; t < full.labeled_idx.size(); ++t) {
    truth[full.labeled_idx[t]] = full.labels[t];
  }
  std::vector<int> labeled_idx = sample_labeled_indices(
      truth, n_labeled / full.num_classes, mix_seed(trial_seed, kLabelStream));
  LabeledDataset data = restrict_labels(full, labeled_idx);

  TrialResult result;
  for (int i = 0; i < n; ++i) {
    if (truth[i] >= 0 &&
        !std::binary_search(labeled_idx.begin(), labeled_idx.end(), i)) {
      result.unlabeled_idx.push_back(i);
    }
  }

  if (method == Method::NaiveKnn) {
    const int k = default_k(n_labeled, full.num_classes);
    Eigen::MatrixXd labeled_points(labeled_idx.size(), full.cloud.dim());
    for (std::size_t t = 0; t < labeled_idx.size(); ++t) {
      labeled_points.row(t) = full.cloud.points().row(labeled_idx[t]);
    }
    for (int i : result.unlabeled_idx) {
      result.predictions.push_back(
          naive_knn_predict(full.cloud.points().row(i).transpose(),
                            labeled_points, data.labels, k));
    }
  } else {
    const auto distance_start = Clock::now();
    FermatParams params = make_params(config, full.cloud);
    FermatMatrix matrix = fermat_matrix(full.cloud, params, config.workers);
    result.distance_seconds = seconds_since(distance_start);

    if (method == Method::FdWknn) {
      const int n_l = static_cast<int>(labeled_idx.size());
      Eigen::MatrixXd labeled_dists(n_l, n_l);
      for (int a = 0; a < n_l; ++a) {
        for (int b = 0; b < n_l; ++b) {
          labeled_dists(a, b) = matrix.dist(labeled_idx[a], labeled_idx[b]);
        }
      }
      const int k = default_k(n_labeled, full.num_classes);
      std::vector<double> grid = sigma_grid(labeled_dists, k);
      double sigma = select_sigma_cv(labeled_dists, data.labels, k, grid, 5,
                                     mix_seed(trial_seed, kFoldStream));
      WknnConfig cfg{k, sigma};
      std::vector<double> dist_to_labeled(labeled_idx.size());
      for (int i : result.unlabeled_idx) {
        for (std::size_t t = 0; t < labeled_idx.size(); ++t) {
          dist_to_labeled[t] = matrix.dist(i, labeled_idx[t]);
        }
        result.predictions.push_back(
            weighted_knn_predict(dist_to_labeled, data.labels, cfg));
      }
    } else {  // Method::FdSvm
      FdSvmConfig cfg;
      cfg.seed = mix_seed(trial_seed, kFoldStream);
      result.predictions =
          fd_svm_predict(matrix, data.labeled_idx, data.labels, cfg);
    }
  }

  if (!result.unlabeled_idx.empty()) {
    int correct = 0;
    for (std::size_t t = 0; t < result.unlabeled_idx.size(); ++t) {
      correct += (result.predictions[t] == truth[result.unlabeled_idx[t]]);
    }
    result.accuracy =
        static_cast<double>(correct) / result.unlabeled_idx.size();
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  if (config.repetitions < 1) {
    throw std::invalid_argument("run_experiment: repetitions must be >= 1");
  }
  if (config.methods.empty() || config.n_labeled.empty()) {
    throw std::invalid_argument("run_experiment: methods and n_labeled must be nonempty");
  }
  ResultTable table;
  for (Method method : config.methods) {
    for (int n_l : config.n_labeled) {
      double acc_sum = 0.0, acc_sq_sum = 0.0;
      int evaluated = 0;
      double wall_sum = 0.0, dist_sum = 0.0;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        TrialResult trial;
        try {
          trial = run_trial(config, method, n_l, rep);
        } catch (const std::exception& e) {
          throw std::runtime_error("experiment failed at method=" +
                                   to_string(method) + " n_labeled=" +
                                   std::to_string(n_l) + " repetition=" +
                                   std::to_string(rep) + ": " + e.what());
        }
        if (trial.accuracy) {
          acc_sum += *trial.accuracy;
          acc_sq_sum += *trial.accuracy * *trial.accuracy;
          ++evaluated;
        }
        wall_sum += trial.wall_seconds;
        dist_sum += trial.distance_seconds;
      }
      ResultRow row;
      row.method = method;
      row.n_labeled = n_l;
      row.alpha = config.alpha;
      row.graph_kind = config.graph_kind;
      if (evaluated > 0) {
        row.mean_accuracy = acc_sum / evaluated;
        // Sample standard deviation (n-1 divisor); a single evaluated
        // repetition reports 0 by definition.
        row.std_accuracy =
            evaluated > 1
                ? std::sqrt(std::max(0.0, (acc_sq_sum - acc_sum * acc_sum /
                                                            evaluated) /
                                              (evaluated - 1)))
                : 0.0;
      } else {
        row.mean_accuracy = std::numeric_limits<double>::quiet_NaN();
        row.std_accuracy = std::numeric_limits<double>::quiet_NaN();
      }
      row.mean_wall_seconds = wall_sum / config.repetitions;
      row.mean_distance_seconds = dist_sum / config.repetitions;
      table.rows.push_back(row);
    }
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.method != b.method) {
                return to_string(a.method) < to_string(b.method);
              }
              return a.n_labeled < b.n_labeled;
            });
  if (!config.out_path.empty()) write_result_csv(table, config.out_path);
  return table;
}

void write_result_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "method,n_labeled,alpha,graph,mean_accuracy,std_accuracy,"
         "mean_wall_seconds,mean_distance_seconds\n";
  for (const ResultRow& row : table.rows) {
    out << to_string(row.method) << ',' << row.n_labeled << ','
        << format_double(row.alpha) << ',' << to_string(row.graph_kind) << ',';
    if (std::isnan(row.mean_accuracy)) {
      out << "NA,NA,";  // nothing was evaluated (no unlabeled points)
    } else {
      out << format_double(row.mean_accuracy) << ','
          << format_double(row.std_accuracy) << ',';
    }
    out << format_double(row.mean_wall_seconds) << ','
        << format_double(row.mean_distance_seconds) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace fermat

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermat/datagen.hpp"
#include "fermat/fermat.hpp"

namespace fermat {

enum class Method { FdWknn, FdSvm, NaiveKnn };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

// Data source for an experiment: a synthetic model or a CSV pair.
enum class DatasetKind { TwoMoon, Vmf, Csv };

struct DatasetSource {
  DatasetKind kind = DatasetKind::TwoMoon;
  TwoMoonVariant moon_variant = TwoMoonVariant::SphereI;
  VmfClusterModel vmf;                   // n_per_class/seed filled per trial
  std::string points_path, labels_path;  // for DatasetKind::Csv
};

// How the scale exponent's intrinsic dimension is chosen per trial.
enum class DimMode { Fixed, Estimated };

struct ExperimentConfig {
  DatasetSource dataset;
  std::vector<Method> methods = {Method::FdWknn};
  double alpha = 4.0;
  GraphKind graph_kind = GraphKind::KnnMstUnion;  // Complete or KnnMstUnion
  int knn_k = 0;                                  // 0: default round(sqrt(n)/2)
  DimMode dim_mode = DimMode::Estimated;
  int fixed_dim = 2;
  std::vector<int> n_labeled = {50};  // totals, split evenly across classes
  int n_unlabeled = 300;
  int repetitions = 20;
  std::uint64_t seed = 1;
  std::string out_path;  // empty: do not write
  int workers = 1;
};

// One seeded repetition. The per-repetition seed is seed ^ splitmix64(rep);
// data generation, labeled-index sampling and fold assignment draw from
// separate sub-streams, so methods sharing (config, rep) see identical
// splits (paired comparisons). accuracy is empty when there is nothing to
// evaluate (n_unlabeled = 0).
struct TrialResult {
  std::optional<double> accuracy;
  double wall_seconds = 0.0;
  double distance_seconds = 0.0;  // graph + matrix construction share
  std::vector<int> predictions;   // unlabeled points in ascending index order
  std::vector<int> unlabeled_idx;
};

TrialResult run_trial(const ExperimentConfig& config, Method method,
                      int n_labeled, int rep_index);

// Aggregated results, one row per (method, n_labeled), sorted that way.
struct ResultRow {
  Method method;
  int n_labeled = 0;
  double alpha = 0.0;
  GraphKind graph_kind = GraphKind::KnnMstUnion;
  double mean_accuracy = 0.0;  // NaN when no trial produced an evaluation
  double std_accuracy = 0.0;   // n-1 divisor; 0 for a single repetition
  double mean_wall_seconds = 0.0;
  double mean_distance_seconds = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

// Runs repetitions x methods x n_labeled trials and (optionally) writes the
// table as CSV with a header row. A failing trial aborts with context.
ResultTable run_experiment(const ExperimentConfig& config);

void write_result_csv(const ResultTable& table, const std::string& path);

// Worker threads for the distance phase: FERMATSC_THREADS, default 1.
int worker_threads_from_env();

}  // namespace fermat

#include "fermat/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fermat/bench.hpp"
#include "fermat/csv.hpp"
#include "fermat/datagen.hpp"
#include "fermat/fermat.hpp"
#include "fermat/mds.hpp"

namespace fermat::cli {

namespace {

GraphKind graph_from_string(const std::string& name) {
  if (name == "complete") return GraphKind::Complete;
  if (name == "knm") return GraphKind::KnnMstUnion;
  throw std::invalid_argument("unknown graph '" + name +
                              "' (expected complete or knm)");
}

TwoMoonVariant moon_variant_from_string(const std::string& name) {
  if (name == "sphere_i") return TwoMoonVariant::SphereI;
  if (name == "lift_ii") return TwoMoonVariant::NonlinearLiftII;
  if (name == "noise_iii") return TwoMoonVariant::NoisyPadIII;
  throw std::invalid_argument(
      "unknown model '" + name +
      "' (expected sphere_i, lift_ii, noise_iii or vmf)");
}

// Shared dataset flags for fit-predict and bench.
struct DatasetArgs {
  std::string model;
  std::string points_path;
  std::string labels_path;
  double kappa = 5.0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--model", model,
                    "synthetic generator: sphere_i, lift_ii, noise_iii, vmf");
    cmd->add_option("--points", points_path, "points CSV (one row per point)");
    cmd->add_option("--labels", labels_path, "labels CSV (one integer per row)");
    cmd->add_option("--kappa", kappa, "vmf concentration")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }

  void apply(ExperimentConfig& config) const {
    if (!model.empty() && !points_path.empty()) {
      throw std::invalid_argument("give either --model or --points, not both");
    }
    if (model.empty() && points_path.empty()) {
      throw std::invalid_argument("one of --model or --points is required");
    }
    if (!model.empty()) {
      if (model == "vmf") {
        config.dataset.kind = DatasetKind::Vmf;
        config.dataset.vmf.concentration = kappa;
      } else {
        config.dataset.kind = DatasetKind::TwoMoon;
        config.dataset.moon_variant = moon_variant_from_string(model);
      }
    } else {
      if (labels_path.empty()) {
        throw std::invalid_argument("--labels is required with --points");
      }
      config.dataset.kind = DatasetKind::Csv;
      config.dataset.points_path = points_path;
      config.dataset.labels_path = labels_path;
    }
  }
};

struct GenArgs {
  std::string model;
  int n = 330;
  std::uint64_t seed = 1;
  double kappa = 5.0;
  std::string out;
  std::string labels_out;
};

int run_gen(const GenArgs& args) {
  LabeledDataset data = [&] {
    if (args.model == "vmf") {
      if (args.n % 2 != 0) {
        throw std::invalid_argument("--n must be even for vmf");
      }
      VmfClusterModel model;
      model.concentration = args.kappa;
      model.n_per_class = args.n / 2;
      model.seed = args.seed;
      return generate_vmf_clusters(model);
    }
    TwoMoonModel model{moon_variant_from_string(args.model),
                       (args.n + 1) / 2, args.n / 2, args.seed};
    return generate_two_moon(model);
  }();
  write_csv_points(data.cloud, args.out);
  if (!args.labels_out.empty()) {
    write_csv_labels(data.labels, args.labels_out);
  }
  std::printf("wrote %d points in %d dimensions to %s\n", data.cloud.size(),
              data.cloud.dim(), args.out.c_str());
  return 0;
}

struct MetricArgs {
  std::string points_path;
  double alpha = 4.0;
  std::string graph = "knm";
  int knn_k = 0;  // 0 selects the size-based default
  int fixed_dim = 0;  // 0 means estimate from the data
  std::string out;
  std::string format = "csv";
};

int run_fermat(const MetricArgs& args) {
  PointCloud cloud = load_csv_points(args.points_path);
  FermatParams params;
  params.alpha = args.alpha;
  params.graph_kind = graph_from_string(args.graph);
  params.knn_k = args.knn_k > 0 ? args.knn_k : default_graph_k(cloud.size());
  params.intrinsic_dim =
      args.fixed_dim > 0
          ? args.fixed_dim
          : std::max(1,
                     static_cast<int>(std::lround(estimate_intrinsic_dim(cloud))));
  FermatMatrix matrix = fermat_matrix(cloud, params, worker_threads_from_env());
  if (args.format == "binary") {
    write_fermat_binary(matrix, args.out);
  } else {
    write_fermat_csv(matrix, args.out);
  }
  std::printf("wrote %dx%d distance matrix (alpha=%s, graph=%s, d=%d, scale=%s) to %s\n",
              matrix.size(), matrix.size(), format_double(params.alpha).c_str(),
              to_string(params.graph_kind).c_str(), params.intrinsic_dim,
              format_double(matrix.scale).c_str(), args.out.c_str());
  return 0;
}

struct MdsArgs {
  std::string matrix_path;
  std::string format = "csv";
  int p = 0;  // 0 selects the spectrum-based dimension
  double tol = 1e-10;
  std::string out;
};

int run_mds(const MdsArgs& args) {
  FermatMatrix matrix = args.format == "binary"
                            ? read_fermat_binary(args.matrix_path)
                            : read_fermat_csv(args.matrix_path);
  const int p = args.p > 0 ? args.p : choose_target_dim(matrix.dist, args.tol);
  Embedding embedding = classical_mds(matrix, p);
  write_embedding_csv(embedding, args.out);
  std::printf("embedded %d points into %d dimensions (distortion=%s) to %s\n",
              matrix.size(), embedding.p,
              format_double(embedding.distortion).c_str(), args.out.c_str());
  return 0;
}

struct FitPredictArgs {
  DatasetArgs dataset;
  std::string method = "fdwknn";
  int n_labeled = 50;
  int n_unlabeled = 300;
  int rep = 0;
  std::uint64_t seed = 1;
  double alpha = 4.0;
  std::string graph = "knm";
  int knn_k = 0;
  int fixed_dim = 0;
  std::string out;
};

int run_fit_predict(const FitPredictArgs& args) {
  ExperimentConfig config;
  args.dataset.apply(config);
  config.alpha = args.alpha;
  config.graph_kind = graph_from_string(args.graph);
  config.knn_k = args.knn_k;
  if (args.fixed_dim > 0) {
    config.dim_mode = DimMode::Fixed;
    config.fixed_dim = args.fixed_dim;
  }
  config.n_unlabeled = args.n_unlabeled;
  config.seed = args.seed;
  config.workers = worker_threads_from_env();

  TrialResult trial = run_trial(config, method_from_string(args.method),
                                args.n_labeled, args.rep);
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) {
      throw std::runtime_error("cannot open " + args.out + " for writing");
    }
    out << "index,predicted\n";
    for (std::size_t t = 0; t < trial.predictions.size(); ++t) {
      out << trial.unlabeled_idx[t] << ',' << trial.predictions[t] << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + args.out);
  }
  std::printf("accuracy %s\n",
              trial.accuracy ? format_double(*trial.accuracy).c_str() : "NA");
  return 0;
}

struct BenchArgs {
  DatasetArgs dataset;
  std::vector<std::string> methods{"fdwknn"};
  std::vector<int> n_labeled{50};
  double alpha = 4.0;
  std::string graph = "knm";
  int knn_k = 0;
  int fixed_dim = 0;
  int n_unlabeled = 300;
  int reps = 20;
  std::uint64_t seed = 1;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  ExperimentConfig config;
  args.dataset.apply(config);
  config.methods.clear();
  for (const std::string& name : args.methods) {
    config.methods.push_back(method_from_string(name));
  }
  config.alpha = args.alpha;
  config.graph_kind = graph_from_string(args.graph);
  config.knn_k = args.knn_k;
  if (args.fixed_dim > 0) {
    config.dim_mode = DimMode::Fixed;
    config.fixed_dim = args.fixed_dim;
  }
  config.n_labeled = args.n_labeled;
  config.n_unlabeled = args.n_unlabeled;
  config.repetitions = args.reps;
  config.seed = args.seed;
  config.out_path = args.out;
  config.workers = worker_threads_from_env();

  ResultTable table = run_experiment(config);
  std::printf("wrote %zu result rows to %s\n", table.rows.size(),
              args.out.c_str());
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Fermat-distance semi-supervised classification toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset to CSV");
  gen->add_option("--model", gen_args.model,
                  "generator: sphere_i, lift_ii, noise_iii, vmf")
      ->required();
  gen->add_option("--n", gen_args.n, "total point count")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "generator seed")
      ->capture_default_str();
  gen->add_option("--kappa", gen_args.kappa, "vmf concentration")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen->add_option("--out", gen_args.out, "points CSV output path")->required();
  gen->add_option("--labels-out", gen_args.labels_out,
                  "labels CSV output path");

  std::string dim_points;
  CLI::App* dim = app.add_subcommand(
      "dim", "estimate intrinsic dimension from two-nearest-neighbor ratios");
  dim->add_option("--points", dim_points, "points CSV path")->required();

  MetricArgs metric_args;
  CLI::App* fermat_cmd = app.add_subcommand(
      "fermat", "compute a Fermat distance matrix and write it to a file");
  fermat_cmd->add_option("--points", metric_args.points_path, "points CSV path")
      ->required();
  fermat_cmd->add_option("--alpha", metric_args.alpha, "path power parameter")
      ->check(CLI::Range(1.0, 1e6))
      ->capture_default_str();
  fermat_cmd->add_option("--graph", metric_args.graph, "complete or knm")
      ->check(CLI::IsMember({"complete", "knm"}))
      ->capture_default_str();
  fermat_cmd
      ->add_option("--knn-k", metric_args.knn_k,
                   "neighbors per point in the knm graph (0 = default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fermat_cmd
      ->add_option("--d", metric_args.fixed_dim,
                   "intrinsic dimension for the scale factor (0 = estimate)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fermat_cmd->add_option("--out", metric_args.out, "output path")->required();
  fermat_cmd->add_option("--format", metric_args.format, "csv or binary")
      ->check(CLI::IsMember({"csv", "binary"}))
      ->capture_default_str();

  MdsArgs mds_args;
  CLI::App* mds = app.add_subcommand(
      "mds", "embed a saved distance matrix into Euclidean coordinates");
  mds->add_option("--matrix", mds_args.matrix_path, "distance matrix path")
      ->required();
  mds->add_option("--format", mds_args.format, "csv or binary")
      ->check(CLI::IsMember({"csv", "binary"}))
      ->capture_default_str();
  mds->add_option("--p", mds_args.p,
                  "embedding dimension (0 = pick from the eigenvalue spectrum)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  mds->add_option("--tol", mds_args.tol,
                  "relative eigenvalue cutoff for automatic dimension")
      ->capture_default_str();
  mds->add_option("--out", mds_args.out, "embedding CSV output path")
      ->required();

  FitPredictArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit-predict", "run one semi-supervised trial and write predictions");
  fit_args.dataset.add_flags(fit);
  fit->add_option("--method", fit_args.method, "fdwknn, fdsvm or naiveknn")
      ->check(CLI::IsMember({"fdwknn", "fdsvm", "naiveknn"}))
      ->capture_default_str();
  fit->add_option("--n-labeled", fit_args.n_labeled,
                  "labeled point count (split evenly across classes)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--n-unlabeled", fit_args.n_unlabeled,
                  "unlabeled point count for synthetic models")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--rep", fit_args.rep, "repetition index for the trial seed")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--seed", fit_args.seed, "experiment seed")
      ->capture_default_str();
  fit->add_option("--alpha", fit_args.alpha, "path power parameter")
      ->check(CLI::Range(1.0, 1e6))
      ->capture_default_str();
  fit->add_option("--graph", fit_args.graph, "complete or knm")
      ->check(CLI::IsMember({"complete", "knm"}))
      ->capture_default_str();
  fit->add_option("--knn-k", fit_args.knn_k, "knm neighbor count (0 = default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--d", fit_args.fixed_dim,
                  "intrinsic dimension (0 = estimate)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit->add_option("--out", fit_args.out, "predictions CSV output path");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "repeated randomized trials with accuracy statistics");
  bench_args.dataset.add_flags(bench);
  bench
      ->add_option("--methods", bench_args.methods,
                   "comma-separated: fdwknn,fdsvm,naiveknn")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--n-labeled", bench_args.n_labeled,
                    "comma-separated labeled-set sizes")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--alpha", bench_args.alpha, "path power parameter")
      ->check(CLI::Range(1.0, 1e6))
      ->capture_default_str();
  bench->add_option("--graph", bench_args.graph, "complete or knm")
      ->check(CLI::IsMember({"complete", "knm"}))
      ->capture_default_str();
  bench->add_option("--knn-k", bench_args.knn_k, "knm neighbor count (0 = default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--d", bench_args.fixed_dim,
                    "intrinsic dimension (0 = estimate)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--n-unlabeled", bench_args.n_unlabeled,
                    "unlabeled point count for synthetic models")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench->add_option("--reps", bench_args.reps, "repetition count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "experiment seed")
      ->capture_default_str();
  bench->add_option("--out", bench_args.out, "result CSV output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (dim->parsed()) {
      PointCloud cloud = load_csv_points(dim_points);
      std::printf("%s\n", format_double(estimate_intrinsic_dim(cloud)).c_str());
      return 0;
    }
    if (fermat_cmd->parsed()) return run_fermat(metric_args);
    if (mds->parsed()) return run_mds(mds_args);
    if (fit->parsed()) return run_fit_predict(fit_args);
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "error: no subcommand selected\n");
  return 1;
}

}  // namespace fermat::cli

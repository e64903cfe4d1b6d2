#include "fermat/fermat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

#include "fermat/csv.hpp"
#include "fermat/rng.hpp"

namespace fermat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Edge weights for the power metric. Weights are len^alpha accumulated in
// the power domain; the 1/alpha root is taken once per target. When
// alpha*|ln(max_len)| approaches the double exponent range the lengths are
// pre-divided by the maximum edge length and the factor is restored on
// output; otherwise weights stay raw so that identical paths cost the same
// bits in any graph over the same cloud.
struct PowerWeighting {
  double alpha;
  double factor;  // 1.0 when no normalization is needed

  static PowerWeighting make(double alpha, double max_len) {
    double factor = 1.0;
    if (max_len > 0.0 && alpha * std::abs(std::log(max_len)) > 600.0) {
      factor = max_len;
    }
    return {alpha, factor};
  }
  double weight(double len) const {
    if (alpha == 1.0) return len / factor;
    return std::pow(len / factor, alpha);
  }
  double finish(double cost) const {
    if (cost == kInf) return kInf;
    if (alpha == 1.0) return factor * cost;
    return factor * std::pow(cost, 1.0 / alpha);
  }
};

// Flattened adjacency with power-transformed weights, shared by all sources.
struct CsrWeights {
  int n;
  std::vector<std::size_t> offset;  // offset[v]..offset[v+1) indexes target/weight
  std::vector<int> target;
  std::vector<double> weight;

  CsrWeights(const AdjacencyGraph& g, const PowerWeighting& pw)
      : n(g.vertex_count()), offset(g.vertex_count() + 1, 0) {
    target.reserve(2 * g.edge_count());
    weight.reserve(2 * g.edge_count());
    for (int v = 0; v < n; ++v) {
      for (const GraphNeighbor& nb : g.neighbors(v)) {
        target.push_back(nb.target);
        weight.push_back(pw.weight(nb.length));
      }
      offset[v + 1] = target.size();
    }
  }
};

// Binary-heap Dijkstra with lazy deletion; writes power-domain costs.
void dijkstra_power(const CsrWeights& cw, int source, std::vector<double>& cost) {
  cost.assign(cw.n, kInf);
  cost[source] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > cost[u]) continue;
    for (std::size_t t = cw.offset[u]; t < cw.offset[u + 1]; ++t) {
      double cand = d + cw.weight[t];
      int v = cw.target[t];
      if (cand < cost[v]) {
        cost[v] = cand;
        heap.push({cand, v});
      }
    }
  }
}

AdjacencyGraph build_metric_graph(const PointCloud& cloud,
                                  const FermatParams& params) {
  if (params.graph_kind == GraphKind::Complete) {
    return build_complete_graph(cloud);
  }
  return union_graphs(build_knn_graph(cloud, params.knn_k), build_mst(cloud));
}

}  // namespace

void validate_params(const FermatParams& params, int n) {
  if (!(params.alpha >= 1.0) || !std::isfinite(params.alpha)) {
    throw std::invalid_argument("FermatParams: alpha must be finite and >= 1");
  }
  if (params.intrinsic_dim < 1) {
    throw std::invalid_argument("FermatParams: intrinsic_dim must be >= 1");
  }
  if (params.graph_kind == GraphKind::KnnMstUnion) {
    if (params.knn_k < 1 || params.knn_k > n - 1) {
      throw std::invalid_argument("FermatParams: knn_k must be in [1, n-1], got " +
                                  std::to_string(params.knn_k));
    }
  } else if (params.graph_kind != GraphKind::Complete) {
    throw std::invalid_argument(
        "FermatParams: graph_kind must be complete or knm");
  }
}

std::vector<double> power_path_distances(const AdjacencyGraph& graph,
                                         const PointCloud& cloud, double alpha,
                                         int source) {
  if (graph.vertex_count() != cloud.size()) {
    throw std::invalid_argument(
        "power_path_distances: graph and cloud sizes differ");
  }
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("power_path_distances: alpha must be >= 1");
  }
  if (source < 0 || source >= graph.vertex_count()) {
    throw std::invalid_argument("power_path_distances: source out of range");
  }
  PowerWeighting pw = PowerWeighting::make(alpha, graph.max_edge_length());
  CsrWeights cw(graph, pw);
  std::vector<double> cost;
  dijkstra_power(cw, source, cost);
  std::vector<double> out(cost.size());
  for (std::size_t j = 0; j < cost.size(); ++j) out[j] = pw.finish(cost[j]);
  return out;
}

FermatMatrix fermat_matrix(const PointCloud& cloud, const FermatParams& params,
                           int workers) {
  const int n = cloud.size();
  validate_params(params, n);
  AdjacencyGraph graph = build_metric_graph(cloud, params);
  PowerWeighting pw = PowerWeighting::make(params.alpha, graph.max_edge_length());
  CsrWeights cw(graph, pw);

  Eigen::MatrixXd dist(n, n);
  workers = std::max(1, workers);
  auto run_sources = [&](int begin, int end) {
    std::vector<double> cost;
    for (int i = begin; i < end; ++i) {
      dijkstra_power(cw, i, cost);
      for (int j = 0; j < n; ++j) dist(i, j) = pw.finish(cost[j]);
    }
  };
  if (workers == 1) {
    run_sources(0, n);
  } else {
    std::vector<std::thread> pool;
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int begin = w * chunk, end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run_sources, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }

  const double scale =
      std::pow(static_cast<double>(n),
               (params.alpha - 1.0) / (params.alpha * params.intrinsic_dim));
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      double d = std::min(dist(i, j), dist(j, i));  // same path set; keep the
      if (d == kInf) {                              // tighter rounding
        throw std::runtime_error(
            "fermat_matrix: graph is disconnected (infinite distance between " +
            std::to_string(i) + " and " + std::to_string(j) + ")");
      }
      d *= scale;
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return {std::move(dist), params, scale};
}

int default_attachment_k(const AdjacencyGraph& graph) {
  return std::max(1, static_cast<int>(std::lround(graph.average_degree())));
}

std::vector<double> extend_out_of_sample(const AdjacencyGraph& graph,
                                         const PointCloud& cloud,
                                         const Eigen::VectorXd& x_new, int k0,
                                         const FermatParams& params) {
  const int n = cloud.size();
  if (graph.vertex_count() != n) {
    throw std::invalid_argument("extend_out_of_sample: graph/cloud size mismatch");
  }
  if (x_new.size() != cloud.dim()) {
    throw std::invalid_argument("extend_out_of_sample: x_new has dimension " +
                                std::to_string(x_new.size()) + ", cloud has " +
                                std::to_string(cloud.dim()));
  }
  if (k0 < 1 || k0 > n) {
    throw std::invalid_argument("extend_out_of_sample: k0 must be in [1, n]");
  }
  if (!(params.alpha >= 1.0) || params.intrinsic_dim < 1) {
    throw std::invalid_argument("extend_out_of_sample: invalid params");
  }

  // Attach the new vertex (index n) to its k0 nearest cloud points.
  Eigen::VectorXd sq =
      (cloud.points().rowwise() - x_new.transpose()).rowwise().squaredNorm();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k0, order.end(),
                    [&](int x, int y) {
                      return sq[x] != sq[y] ? sq[x] < sq[y] : x < y;
                    });
  std::vector<GraphEdge> edges = graph.edges();
  edges.reserve(edges.size() + k0);
  for (int t = 0; t < k0; ++t) {
    int j = order[t];
    edges.push_back({j, n, (cloud.points().row(j) - x_new.transpose()).norm()});
  }
  AdjacencyGraph augmented(n + 1, graph.kind(), std::move(edges));

  PowerWeighting pw =
      PowerWeighting::make(params.alpha, augmented.max_edge_length());
  CsrWeights cw(augmented, pw);
  std::vector<double> cost;
  dijkstra_power(cw, n, cost);

  const double scale =
      std::pow(static_cast<double>(n),
               (params.alpha - 1.0) / (params.alpha * params.intrinsic_dim));
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = scale * pw.finish(cost[j]);
  return out;
}

void write_fermat_csv(const FermatMatrix& matrix, const std::string& path) {
  write_csv_matrix(matrix.dist, path);
}

FermatMatrix read_fermat_csv(const std::string& path) {
  Eigen::MatrixXd dist = load_csv_matrix(path);
  if (dist.rows() != dist.cols()) {
    throw std::runtime_error(path + ": distance matrix must be square, got " +
                             std::to_string(dist.rows()) + "x" +
                             std::to_string(dist.cols()));
  }
  // CSV carries no metadata; record neutral parameters (scale 1 at alpha 1).
  FermatParams params;
  params.alpha = 1.0;
  params.intrinsic_dim = 1;
  params.graph_kind = GraphKind::Complete;
  return {std::move(dist), params, 1.0};
}

void write_fermat_binary(const FermatMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::uint64_t n = static_cast<std::uint64_t>(matrix.size());
  const std::uint64_t d = static_cast<std::uint64_t>(matrix.params.intrinsic_dim);
  auto put = [&](const void* p, std::size_t bytes) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
  };
  put(&n, 8);
  put(&matrix.params.alpha, 8);
  put(&d, 8);
  put(&matrix.scale, 8);
  // Row-major payload, independent of Eigen's storage order.
  std::vector<double> row(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < n; ++j) row[j] = matrix.dist(i, j);
    put(row.data(), 8 * n);
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

FermatMatrix read_fermat_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t n = 0, d = 0;
  double alpha = 0.0, scale = 0.0;
  auto get = [&](void* p, std::size_t bytes) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error(path + ": truncated binary matrix file");
  };
  get(&n, 8);
  get(&alpha, 8);
  get(&d, 8);
  get(&scale, 8);
  if (n < 2 || n > (1ULL << 20)) {
    throw std::runtime_error(path + ": implausible matrix size in header");
  }
  FermatParams params;
  params.alpha = alpha;
  params.intrinsic_dim = static_cast<int>(d);
  Eigen::MatrixXd dist(n, n);
  std::vector<double> row(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    get(row.data(), 8 * n);
    for (std::uint64_t j = 0; j < n; ++j) dist(i, j) = row[j];
  }
  return {std::move(dist), params, scale};
}

MetricCheckReport check_metric_axioms(const FermatMatrix& matrix, int triples,
                                      std::uint64_t seed) {
  const int n = matrix.size();
  MetricCheckReport report;
  report.min_entry = matrix.dist.minCoeff();
  for (int i = 0; i < n; ++i) {
    report.max_diagonal = std::max(report.max_diagonal, std::abs(matrix.dist(i, i)));
    for (int j = i + 1; j < n; ++j) {
      report.max_asymmetry = std::max(
          report.max_asymmetry, std::abs(matrix.dist(i, j) - matrix.dist(j, i)));
    }
  }
  Rng rng(seed);
  for (int t = 0; t < triples; ++t) {
    int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n));
    int k = static_cast<int>(rng.below(n));
    double violation =
        matrix.dist(i, k) - (matrix.dist(i, j) + matrix.dist(j, k));
    report.max_triangle_violation =
        std::max(report.max_triangle_violation, violation);
  }
  return report;
}

}  // namespace fermat

#include "fermat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fermat {

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Knn: return "knn";
    case GraphKind::Mst: return "mst";
    case GraphKind::KnnMstUnion: return "knm";
  }
  return "unknown";
}

void validate_dataset(const LabeledDataset& data) {
  const int n = data.cloud.size();
  if (data.num_classes < 2) {
    throw std::invalid_argument("LabeledDataset: need at least 2 classes");
  }
  if (data.labels.size() != data.labeled_idx.size()) {
    throw std::invalid_argument(
        "LabeledDataset: labels and labeled_idx must have equal length");
  }
  std::vector<char> seen(n, 0);
  for (int idx : data.labeled_idx) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("LabeledDataset: labeled index " +
                                  std::to_string(idx) + " out of range");
    }
    if (seen[idx]) {
      throw std::invalid_argument("LabeledDataset: duplicate labeled index " +
                                  std::to_string(idx));
    }
    seen[idx] = 1;
  }
  for (int label : data.labels) {
    if (label < 0 || label >= data.num_classes) {
      throw std::invalid_argument("LabeledDataset: label " +
                                  std::to_string(label) +
                                  " outside [0, num_classes)");
    }
  }
  if (static_cast<int>(data.labeled_idx.size()) < data.num_classes) {
    std::fprintf(stderr,
                 "warning: fewer labeled points (%zu) than classes (%d)\n",
                 data.labeled_idx.size(), data.num_classes);
  }
}

LabeledDataset restrict_labels(const LabeledDataset& full,
                               const std::vector<int>& keep_idx) {
  // keep_idx addresses points of the cloud; each must be labeled in `full`.
  LabeledDataset out{full.cloud, {}, {}, full.num_classes};
  std::vector<int> label_of(full.cloud.size(), -1);
  for (std::size_t t = 0; t < full.labeled_idx.size(); ++t) {
    label_of[full.labeled_idx[t]] = full.labels[t];
  }
  for (int idx : keep_idx) {
    if (idx < 0 || idx >= full.cloud.size() || label_of[idx] < 0) {
      throw std::invalid_argument("restrict_labels: index " +
                                  std::to_string(idx) + " is not labeled");
    }
    out.labeled_idx.push_back(idx);
    out.labels.push_back(label_of[idx]);
  }
  validate_dataset(out);
  return out;
}

AdjacencyGraph::AdjacencyGraph(int vertex_count, GraphKind kind,
                               std::vector<GraphEdge> edges)
    : n_(vertex_count), kind_(kind), edges_(std::move(edges)) {
  if (n_ < 2) {
    throw std::invalid_argument("AdjacencyGraph: need at least 2 vertices");
  }
  for (GraphEdge& e : edges_) {
    if (e.a == e.b) {
      throw std::invalid_argument("AdjacencyGraph: self loop at vertex " +
                                  std::to_string(e.a));
    }
    if (e.a < 0 || e.b < 0 || e.a >= n_ || e.b >= n_) {
      throw std::invalid_argument("AdjacencyGraph: edge endpoint out of range");
    }
    if (!(e.length >= 0.0) || !std::isfinite(e.length)) {
      throw std::invalid_argument("AdjacencyGraph: edge length must be finite and >= 0");
    }
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const GraphEdge& x, const GraphEdge& y) {
                     return x.a != y.a ? x.a < y.a : x.b < y.b;
                   });
  edges_.erase(std::unique(edges_.begin(), edges_.end(),
                           [](const GraphEdge& x, const GraphEdge& y) {
                             return x.a == y.a && x.b == y.b;
                           }),
               edges_.end());

  offsets_.assign(n_ + 1, 0);
  for (const GraphEdge& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
    max_edge_length_ = std::max(max_edge_length_, e.length);
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(offsets_[n_]);
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const GraphEdge& e : edges_) {
    adj_[cursor[e.a]++] = {e.b, e.length};
    adj_[cursor[e.b]++] = {e.a, e.length};
  }
}

std::span<const GraphNeighbor> AdjacencyGraph::neighbors(int v) const {
  if (v < 0 || v >= n_) {
    throw std::invalid_argument("AdjacencyGraph: vertex out of range");
  }
  return {adj_.data() + offsets_[v],
          static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
}

int AdjacencyGraph::component_count() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n_;
  for (const GraphEdge& e : edges_) {
    int ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

AdjacencyGraph build_complete_graph(const PointCloud& cloud) {
  const int n = cloud.size();
  const Eigen::MatrixXd& pts = cloud.points();
  std::vector<GraphEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.push_back({i, j, (pts.row(i) - pts.row(j)).norm()});
    }
  }
  return {n, GraphKind::Complete, std::move(edges)};
}

namespace {

// Squared-distance rows for a block of sources, via
//   sq(i, j) = |p_i|^2 + |p_j|^2 - 2 p_i . p_j.
// The inner products come from one matrix product per block, so the point
// matrix is streamed once per block instead of once per source; that keeps
// the O(n^2 D) distance work compute-bound in high ambient dimension.
// Rounding can leave near-zero entries slightly off (even negative); only
// the ordering of the values is consumed, and candidate ties still resolve
// by index, so selections are unaffected.
constexpr int kDistanceBlock = 256;

}  // namespace

AdjacencyGraph build_knn_graph(const PointCloud& cloud, int k) {
  const int n = cloud.size();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("build_knn_graph: k must be in [1, n-1], got " +
                                std::to_string(k));
  }
  const Eigen::MatrixXd& pts = cloud.points();
  const Eigen::VectorXd sqnorm = pts.rowwise().squaredNorm();
  std::vector<GraphEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k);
  std::vector<int> order(n);
  Eigen::MatrixXd prod;
  Eigen::VectorXd sq(n);
  for (int r0 = 0; r0 < n; r0 += kDistanceBlock) {
    const int rows = std::min(kDistanceBlock, n - r0);
    prod.noalias() = pts.middleRows(r0, rows) * pts.transpose();
    for (int t = 0; t < rows; ++t) {
      const int i = r0 + t;
      sq = sqnorm.array() + sqnorm(i) - 2.0 * prod.row(t).transpose().array();
      std::iota(order.begin(), order.end(), 0);
      // Equidistant candidates rank by smaller point index.
      std::partial_sort(order.begin(), order.begin() + k + 1, order.end(),
                        [&](int x, int y) {
                          return sq[x] != sq[y] ? sq[x] < sq[y] : x < y;
                        });
      int taken = 0;
      for (int pos = 0; pos < n && taken < k; ++pos) {
        int j = order[pos];
        if (j == i) continue;
        // Lengths are recomputed pairwise so edge weights do not inherit
        // the product form's rounding.
        edges.push_back({std::min(i, j), std::max(i, j),
                         (pts.row(i) - pts.row(j)).norm()});
        ++taken;
      }
    }
  }
  return {n, GraphKind::Knn, std::move(edges)};
}

AdjacencyGraph build_mst(const PointCloud& cloud) {
  const int n = cloud.size();
  const Eigen::MatrixXd& pts = cloud.points();
  // Dense Prim: key[j] = squared distance from j to the current tree
  // (squared keys select the same tree as lengths; sqrt is monotone).
  // Prim consumes distance rows in data-dependent order, so the whole
  // squared-distance table is materialized up front with blocked products;
  // the O(n^2) doubles are well within scope for a few thousand points.
  const Eigen::VectorXd sqnorm = pts.rowwise().squaredNorm();
  Eigen::MatrixXd table(n, n);
  {
    Eigen::MatrixXd prod;
    for (int r0 = 0; r0 < n; r0 += kDistanceBlock) {
      const int rows = std::min(kDistanceBlock, n - r0);
      prod.noalias() = pts.middleRows(r0, rows) * pts.transpose();
      for (int t = 0; t < rows; ++t) {
        table.row(r0 + t) = (sqnorm.array() + sqnorm(r0 + t) -
                             2.0 * prod.row(t).transpose().array())
                                .transpose();
      }
    }
  }
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<char> in_tree(n, 0);
  std::vector<GraphEdge> edges;
  edges.reserve(n - 1);
  int current = 0;
  in_tree[0] = 1;
  for (int step = 1; step < n; ++step) {
    const auto sq = table.row(current);
    for (int j = 0; j < n; ++j) {
      if (!in_tree[j] && sq[j] < key[j]) {
        key[j] = sq[j];
        parent[j] = current;
      }
    }
    int best = -1;
    for (int j = 0; j < n; ++j) {
      // Ties resolve to the smaller vertex index (first hit wins).
      if (!in_tree[j] && (best < 0 || key[j] < key[best])) best = j;
    }
    edges.push_back({std::min(parent[best], best), std::max(parent[best], best),
                     (pts.row(parent[best]) - pts.row(best)).norm()});
    in_tree[best] = 1;
    current = best;
  }
  return {n, GraphKind::Mst, std::move(edges)};
}

AdjacencyGraph union_graphs(const AdjacencyGraph& a, const AdjacencyGraph& b) {
  if (a.vertex_count() != b.vertex_count()) {
    throw std::invalid_argument("union_graphs: vertex counts differ (" +
                                std::to_string(a.vertex_count()) + " vs " +
                                std::to_string(b.vertex_count()) + ")");
  }
  std::vector<GraphEdge> edges = a.edges();
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());

  GraphKind kind = GraphKind::KnnMstUnion;
  if ((a.kind() == GraphKind::Knn && b.kind() == GraphKind::Mst) ||
      (a.kind() == GraphKind::Mst && b.kind() == GraphKind::Knn)) {
    kind = GraphKind::KnnMstUnion;
  } else if (a.kind() == b.kind()) {
    // Keep the shared tag only for identical edge sets; a union of two
    // different trees is not a tree, so anything else gets the union tag.
    const auto& ea = a.edges();
    const auto& eb = b.edges();
    bool identical = ea.size() == eb.size();
    for (std::size_t i = 0; identical && i < ea.size(); ++i) {
      identical = ea[i].a == eb[i].a && ea[i].b == eb[i].b;
    }
    if (identical) kind = a.kind();
  } else if (a.kind() == GraphKind::Complete || b.kind() == GraphKind::Complete) {
    kind = GraphKind::Complete;  // union with the complete edge set is complete
  }
  return {a.vertex_count(), kind, std::move(edges)};
}

int default_graph_k(int n) {
  return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)) / 2.0)));
}

}  // namespace fermat

#pragma once

#include <span>
#include <string>
#include <vector>

#include "fermat/point_cloud.hpp"

namespace fermat {

enum class GraphKind { Complete, Knn, Mst, KnnMstUnion };

std::string to_string(GraphKind kind);

// Undirected edge stored with a < b; length is the Euclidean distance
// between the endpoint coordinates of the cloud the graph was built from.
struct GraphEdge {
  int a;
  int b;
  double length;
};

struct GraphNeighbor {
  int target;
  double length;
};

// Undirected weighted graph over point indices 0..n-1 with a provenance tag.
// Construction normalizes edges (a < b), sorts them, collapses duplicates
// (first occurrence wins) and builds an adjacency index.
class AdjacencyGraph {
 public:
  AdjacencyGraph(int vertex_count, GraphKind kind, std::vector<GraphEdge> edges);

  int vertex_count() const { return n_; }
  GraphKind kind() const { return kind_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const GraphNeighbor> neighbors(int v) const;
  double max_edge_length() const { return max_edge_length_; }
  double average_degree() const {
    return 2.0 * static_cast<double>(edges_.size()) / n_;
  }
  int component_count() const;
  bool is_connected() const { return component_count() == 1; }

 private:
  int n_;
  GraphKind kind_;
  std::vector<GraphEdge> edges_;
  double max_edge_length_ = 0.0;
  // CSR adjacency: neighbors of v live in adj_[offsets_[v] .. offsets_[v+1]).
  std::vector<int> offsets_;
  std::vector<GraphNeighbor> adj_;
};

// All n(n-1)/2 edges.
AdjacencyGraph build_complete_graph(const PointCloud& cloud);

// Union-symmetrized k-nearest-neighbor graph, k in [1, n-1]. Equidistant
// candidates are ordered by smaller point index.
AdjacencyGraph build_knn_graph(const PointCloud& cloud, int k);

// Exact Euclidean minimum spanning tree (dense Prim over a blocked
// squared-distance table: O(n^2) memory, O(n^2 D) compute-bound flops).
AdjacencyGraph build_mst(const PointCloud& cloud);

// Edge-set union; vertex counts must match. (Knn, Mst) unions are tagged
// KnnMstUnion; identical kinds with identical edge sets keep their tag.
AdjacencyGraph union_graphs(const AdjacencyGraph& a, const AdjacencyGraph& b);

// Default adjacency size: round(sqrt(n)/2), at least 1.
int default_graph_k(int n);

}  // namespace fermat

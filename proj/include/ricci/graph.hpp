#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ricci {

using Vertex = int;

// Undirected edge, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;
};

struct Incidence {
  Vertex to = 0;
  std::size_t edge = 0;  // index into WeightedGraph::edges()
};

// Connected simple graph with strictly positive edge lengths.
//
// Vertex ids are slots: surgery tombstones vertices instead of renumbering, so
// an id means the same vertex for the lifetime of a run. Edges are kept sorted
// by (u, v); an edge's index is its position in that order.
//
// Instances are immutable once built. Every mutation returns a new graph.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // All `vertex_slots` vertices are live. Validates simplicity, positivity
  // and connectivity.
  WeightedGraph(int vertex_slots, std::vector<Edge> edges);

  // Live-set constructor used by surgery.
  WeightedGraph(std::vector<bool> alive, std::vector<Edge> edges);

  int vertex_slots() const { return static_cast<int>(alive_.size()); }
  bool alive(Vertex v) const { return v >= 0 && v < vertex_slots() && alive_[v]; }
  int vertex_count() const { return live_count_; }
  std::vector<Vertex> vertices() const;

  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  std::optional<std::size_t> find_edge(Vertex a, Vertex b) const;
  double weight(Vertex a, Vertex b) const;

  std::span<const Incidence> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  std::vector<double> weights() const;
  double total_weight() const;
  double max_weight() const;

  // Same topology, new lengths (aligned with edges()).
  WeightedGraph with_weights(std::span<const double> w) const;

  // Connectivity of the live vertex set, optionally ignoring one edge.
  bool connected(std::optional<std::size_t> skip_edge = std::nullopt) const;

 private:
  void build();

  std::vector<bool> alive_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  int live_count_ = 0;
};

// Dense shortest-path lengths between vertex slots. Dead slots read +inf.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int slots);

  int size() const { return n_; }
  double operator()(Vertex a, Vertex b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }
  double& at(Vertex a, Vertex b) { return d_[static_cast<std::size_t>(a) * n_ + b]; }
  std::span<double> row(Vertex a) { return {d_.data() + static_cast<std::size_t>(a) * n_, static_cast<std::size_t>(n_)}; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

// Dijkstra from one source; result indexed by vertex slot.
std::vector<double> shortest_paths_from(const WeightedGraph& g, Vertex source);

// One Dijkstra per source, sources distributed over OpenMP threads.
DistanceMatrix all_pairs_distances(const WeightedGraph& g);
// Single-threaded reference for the parallel kernel.
DistanceMatrix all_pairs_distances_serial(const WeightedGraph& g);

// Maps every original vertex to the live vertex it was contracted into.
class MergeMap {
 public:
  MergeMap() = default;
  explicit MergeMap(int slots);

  int size() const { return static_cast<int>(parent_.size()); }
  Vertex representative(Vertex v) const;
  // `absorbed` (and everything already merged into it) now resolves to `survivor`.
  void merge(Vertex survivor, Vertex absorbed);

 private:
  std::vector<Vertex> parent_;
};

struct Contraction {
  WeightedGraph graph;
  MergeMap merges;
};

// Removes the edge between a and b. Throws WouldDisconnect if it is a bridge.
WeightedGraph delete_edge(const WeightedGraph& g, Vertex a, Vertex b);

// Merges `absorbed` into `survivor` along their shared edge. Re-attached
// edges that collide keep the shorter length; the contracted edge vanishes.
Contraction contract_edge(const WeightedGraph& g, Vertex survivor, Vertex absorbed, MergeMap merges);

// Edge list: one "u v w" triple per line; blank lines and '#' comments skipped.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph parse_edge_list(const std::string& text);
// {"vertices": N, "edges": [{"u": int, "v": int, "w": float}, ...]}, plus an
// optional "alive" id list for minors with tombstoned slots.
WeightedGraph parse_graph_json(const std::string& text);
// Picks the format from content: a leading '{' means JSON.
WeightedGraph load_graph(const std::string& path);

std::string graph_to_json(const WeightedGraph& g);

}  // namespace ricci

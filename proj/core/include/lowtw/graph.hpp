#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lowtw {

using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;
// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simple undirected graph in compressed adjacency form. Neighbor lists are sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Vertex n);
  // Duplicate edges (in either orientation) are merged; self-loops and
  // out-of-range endpoints throw GraphError.
  Graph(Vertex n, std::span<const Edge> edges);

  Vertex num_vertices() const { return n_; }
  std::size_t num_edges() const { return targets_.size() / 2; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  Vertex degree(Vertex v) const { return static_cast<Vertex>(offsets_[v + 1] - offsets_[v]); }
  bool has_edge(Vertex u, Vertex v) const;
  // Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

 private:
  Vertex n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
};

// Simple directed graph with out- and in-adjacency, both sorted.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(Vertex n);
  DiGraph(Vertex n, std::span<const Edge> arcs);

  Vertex num_vertices() const { return n_; }
  std::size_t num_arcs() const { return out_.size(); }
  std::span<const Vertex> out_neighbors(Vertex v) const {
    return {out_.data() + out_off_[v], out_.data() + out_off_[v + 1]};
  }
  std::span<const Vertex> in_neighbors(Vertex v) const {
    return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]};
  }
  bool has_arc(Vertex u, Vertex v) const;
  std::vector<Edge> arcs() const;

 private:
  Vertex n_ = 0;
  std::vector<std::size_t> out_off_{0}, in_off_{0};
  std::vector<Vertex> out_, in_;
};

// Nonnegative integer vertex weights, positive somewhere.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::vector<std::uint64_t> weights);
  static Measure uniform(Vertex n);
  static Measure indicator(Vertex n, std::span<const Vertex> support);

  std::uint64_t operator[](Vertex v) const { return w_[v]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t of(std::span<const Vertex> vs) const;
  std::size_t size() const { return w_.size(); }
  const std::vector<std::uint64_t>& weights() const { return w_; }

 private:
  std::vector<std::uint64_t> w_;
  std::uint64_t total_ = 0;
};

// True iff a <= (num/den) * total, computed exactly.
inline bool at_most_fraction(std::uint64_t a, std::uint64_t total, std::uint64_t num,
                             std::uint64_t den) {
  return static_cast<unsigned __int128>(a) * den <= static_cast<unsigned __int128>(num) * total;
}

struct Subgraph {
  Graph graph;
  std::vector<Vertex> to_original;
};

struct Subdivision {
  Graph graph;
  // New vertex n + i subdivides edge_of[i] of the input.
  std::vector<Edge> edge_of;
};

std::vector<VertexSet> connected_components(const Graph& g);
// Components of g minus the vertices flagged in removed.
std::vector<VertexSet> connected_components(const Graph& g, std::span<const char> removed);
Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> vs);
bool is_tree(const Graph& g);
Subdivision one_subdivision(const Graph& tree);
// BFS tree of g[component] rooted at the smallest vertex; local indices follow component order.
Subgraph spanning_tree(const Graph& g, std::span<const Vertex> component);

DiGraph symmetric_digraph(const Graph& g);
Graph underlying_graph(const DiGraph& g);

VertexSet make_set(std::vector<Vertex> vs);
VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b);
VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b);
VertexSet set_intersection(std::span<const Vertex> a, std::span<const Vertex> b);
bool set_contains(std::span<const Vertex> a, Vertex v);
bool is_subset(std::span<const Vertex> a, std::span<const Vertex> b);

}  // namespace lowtw

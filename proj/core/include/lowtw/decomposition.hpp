#pragma once

#include <string>
#include <vector>

#include "lowtw/graph.hpp"

namespace lowtw {

struct TreeDecomposition {
  Graph tree;
  std::vector<VertexSet> bags;
  // -1 when unrooted.
  Vertex root = -1;
  // Ordered child lists; empty when no order was fixed.
  std::vector<std::vector<Vertex>> children;

  Vertex num_nodes() const { return static_cast<Vertex>(bags.size()); }
  std::size_t max_bag() const;
  int width() const { return static_cast<int>(max_bag()) - 1; }
};

struct PathDecomposition {
  std::vector<VertexSet> bags;

  std::size_t max_bag() const;
  int width() const { return static_cast<int>(max_bag()) - 1; }
};

struct TreePartitionDecomposition {
  Graph tree;
  std::vector<VertexSet> bags;

  Vertex num_nodes() const { return static_cast<Vertex>(bags.size()); }
  std::size_t width() const;
};

struct Validation {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
  static Validation fail(std::string why) { return {false, std::move(why)}; }
};

class DecompositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Validation validate(const TreeDecomposition& td, const Graph& g);
Validation validate(const PathDecomposition& pd, const Graph& g);
Validation validate(const TreePartitionDecomposition& tpd, const Graph& g);

TreeDecomposition trivial_decomposition(Vertex n);
TreeDecomposition to_tree_decomposition(const PathDecomposition& pd);

// Contracts tree edges whose bags are nested; nodes keep their relative index order.
TreeDecomposition clean(const TreeDecomposition& td);
bool is_clean(const TreeDecomposition& td);

struct RootedTree {
  Vertex root = -1;
  std::vector<Vertex> parent;
  std::vector<std::vector<Vertex>> children;
  std::vector<Vertex> preorder;
  std::vector<int> depth;
};

// Roots the tree at td.root (node 0 if unset). Uses td.children when present,
// otherwise orders children by (smallest vertex in bag, node index).
RootedTree root_decomposition(const TreeDecomposition& td);
RootedTree root_tree(const Graph& tree, Vertex root);

// For every graph vertex, the node of minimum depth whose bag contains it (-1 if none).
std::vector<Vertex> top_nodes(const TreeDecomposition& td, const RootedTree& rt, Vertex n);
// Node of minimum depth whose bag contains both endpoints, per g.edges() order.
std::vector<Vertex> topmost_edge_nodes(const TreeDecomposition& td, const RootedTree& rt,
                                       const Graph& g);

// Rooted, ordered decomposition with at most two children per node, at most one
// vertex forgotten per node and an empty root reached by a shrinking path.
TreeDecomposition nice_form(const TreeDecomposition& td, const Graph& g);

// Smallest-index node x such that every component of tree - x has measure <= total/2.
Vertex balanced_tree_node(const Graph& tree, const Measure& mu);

// Vertex v of an n-vertex graph becomes row v and column n + v of its matrix graph.
TreeDecomposition bipartite_decomp_from_symmetric(const TreeDecomposition& td, Vertex n);

}  // namespace lowtw

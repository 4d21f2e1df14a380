#pragma once

#include <optional>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/elimination.hpp"
#include "lowtw/sparse_matrix.hpp"

namespace lowtw {

// Ordered rooted tree assigned to one row or column. Nodes are stored in
// pre-order; node 0 is the root.
struct SplitTree {
  std::vector<Vertex> label;  // decomposition node, or any id for hand-built splits
  std::vector<int> parent;    // -1 for the root

  int size() const { return static_cast<int>(label.size()); }
};

// Matrix-graph vertices are rows 0..rows-1 then columns rows..rows+cols-1.
struct TreeSplit {
  Index rows = 0;
  Index cols = 0;
  std::vector<SplitTree> trees;
  // Per nonzero of the matrix, in entries() order: (node in the row tree, node in the column tree).
  std::vector<std::pair<int, int>> entry_nodes;

  std::size_t norm() const;
};

class SplitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structural check: pre-ordered trees, entry nodes in range.
Validation validate(const TreeSplit& ts);

TreeSplit trivial_split(Index rows, Index cols, std::size_t nnz);

// Subtree of bags containing each vertex, rooted at its topmost bag; every
// nonzero sits at the topmost bag holding both its row and column.
template <class F>
TreeSplit tree_split_from_td(const SparseMatrix<F>& m, const TreeDecomposition& td);

template <class F>
struct SplitMatrix {
  SparseMatrix<F> matrix;
  std::size_t N = 0;
  // Original row/column of every split row/column.
  std::vector<Index> row_origin;
  std::vector<Index> col_origin;
  // Split row (for rows) or column (for columns) of each (vertex, tree node).
  std::vector<std::vector<Index>> node_index;
  // Split column (for rows) or row (for columns) of the tree edge above each non-root node.
  std::vector<std::vector<Index>> chain_index;
  // Rows below node_rows and columns below node_cols are (vertex, node) copies.
  Index node_rows = 0;
  Index node_cols = 0;
  // Tree-partition decomposition of the split matrix graph; present when the
  // split came from a decomposition (trees labeled by its nodes).
  std::optional<TreePartitionDecomposition> tpd;
};

template <class F>
SplitMatrix<F> split_matrix(const SparseMatrix<F>& m, const TreeSplit& ts);

// Same, and builds the tree-partition decomposition over the 1-subdivision of td's tree.
template <class F>
SplitMatrix<F> split_matrix(const SparseMatrix<F>& m, const TreeSplit& ts, const TreeDecomposition& td);

std::pair<std::vector<Index>, std::vector<Index>> lift_index_sets(std::span<const Index> I,
                                                                  std::span<const Index> J,
                                                                  const TreeSplit& ts);

enum class FactorKind { Permutation, RowEchelon, ColumnEchelon };

template <class F>
struct GeneralizedLU {
  std::vector<SparseMatrix<F>> factors;
  std::vector<FactorKind> kinds;

  SparseMatrix<F> product() const;
  // Every factor has the shape its kind claims.
  bool well_formed() const;
  // Substitution through the factors, free variables zero, checked by
  // multiplying back. Exact for factorizations built by tw_rank_det_solve.
  Solution<F> solve(std::span<const typename F::Element> r) const;
};

struct TwStats {
  std::size_t split_norm = 0;
  Index split_rows = 0;
  Index split_cols = 0;
  std::size_t split_nnz = 0;
  std::size_t max_row_nnz = 0;
  std::size_t tpd_width = 0;
  int ordering_width = 0;
  std::size_t field_ops = 0;
  std::size_t h_edges = 0;
};

template <class F>
struct TwResult {
  std::size_t rank = 0;
  std::optional<typename F::Element> det;
  GeneralizedLU<F> lu;
  std::optional<Solution<F>> solution;
  TwStats stats;
};

template <class F>
TwResult<F> tw_rank_det_solve(const SparseMatrix<F>& m, const TreeDecomposition& td,
                              std::optional<std::span<const typename F::Element>> r = std::nullopt,
                              EntryAccess access = EntryAccess::PArrays);

}  // namespace lowtw

#pragma once

#include <optional>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/sparse_matrix.hpp"

namespace lowtw {

// An ordering of the vertices of a completion h of the matrix graph (rows
// 0..rows-1, columns rows..rows+cols-1). Only same-side comparisons matter.
struct StrongOrdering {
  Index rows = 0;
  Index cols = 0;
  Graph h;
  // position[v] is the rank of vertex v in the ordering.
  std::vector<std::int64_t> position;
  int width = 0;
  int degeneracy = 0;

  bool before(Vertex a, Vertex b) const { return position[a] < position[b]; }
};

// Fills width and degeneracy from h and position.
void measure_ordering(StrongOrdering& so);

struct StrongnessViolation {
  Vertex i, j, k, l;
};

// Exhaustive check; returns a witness (i, j, k, l) with ij, ik in h, j before k,
// l a neighbor of j not before i, and l not adjacent to k.
std::optional<StrongnessViolation> check_strong_ordering(const StrongOrdering& so);

template <class F>
StrongOrdering ordering_from_path_decomp(const SparseMatrix<F>& m, const PathDecomposition& pd);
template <class F>
StrongOrdering ordering_from_tpd(const SparseMatrix<F>& m, const TreePartitionDecomposition& tpd);

class EliminationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EntryAccess { PArrays, HashMap };

template <class F>
struct EliminationResult {
  SparseMatrix<F> U;
  // Unit diagonal; L[k][j] is the multiplier used to clear row k with pivot row j.
  SparseMatrix<F> L;
  std::vector<Index> row_order;
  std::vector<Index> col_order;
  // (row, column) pivot pairs in removal order.
  std::vector<std::pair<Index, Index>> pivots;
  std::size_t field_ops = 0;
  std::size_t access_steps = 0;
  std::size_t h_edges = 0;
  std::size_t h_vertices = 0;
  int width = 0;
};

// Throws EliminationError when an update would create an entry outside so.h.
template <class F>
EliminationResult<F> guided_elimination(const SparseMatrix<F>& m, const StrongOrdering& so,
                                        EntryAccess access = EntryAccess::PArrays);

// m[row_order[a]][col_order[b]] == (L * U)[a][b]; L unit lower triangular,
// U in row echelon form with its first rank rows nonzero.
template <class F>
struct PluqFactorization {
  std::vector<Index> row_order;
  std::vector<Index> col_order;
  SparseMatrix<F> L;
  SparseMatrix<F> U;
  std::size_t rank = 0;
  // Position in col_order of the leading entry of each nonzero row of U.
  std::vector<Index> lead;

  SparseMatrix<F> P() const;  // m = P * L * U * Q
  SparseMatrix<F> Q() const;
  SparseMatrix<F> product() const;
};

template <class F>
PluqFactorization<F> pluq(const EliminationResult<F>& res);

template <class F>
struct RankDet {
  std::size_t rank = 0;
  std::optional<typename F::Element> det;  // square matrices only
  std::vector<Index> rows;                 // maximal nonsingular submatrix
  std::vector<Index> cols;
};

template <class F>
RankDet<F> rank_det_maxsubmatrix(const PluqFactorization<F>& f);

template <class F>
struct Solution {
  bool consistent = false;
  std::vector<typename F::Element> x;
};

template <class F>
Solution<F> solve(const PluqFactorization<F>& f, std::span<const typename F::Element> r);

// Leading entries strictly move right going down; zero rows last.
template <class F>
bool is_row_echelon(const SparseMatrix<F>& m);
template <class F>
bool is_column_echelon(const SparseMatrix<F>& m);
template <class F>
bool is_permutation_matrix(const SparseMatrix<F>& m);

// Sign of the permutation i -> perm[i].
int permutation_sign(std::span<const Index> perm);

}  // namespace lowtw

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "lowtw/field.hpp"
#include "lowtw/graph.hpp"

// Slow reference implementations for testing. Nothing here calls into the
// decomposition-based algorithms.
namespace lowtw::oracle {

class OracleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

template <class F>
using DenseMatrix = std::vector<std::vector<typename F::Element>>;

template <class F>
struct DenseRankDet {
  std::size_t rank = 0;
  std::optional<typename F::Element> det;
};

// Full-pivot elimination.
template <class F>
DenseRankDet<F> dense_rank_det(const F& f, DenseMatrix<F> a, std::size_t cols);

// Laplace expansion along the first row; n <= 8.
template <class F>
typename F::Element cofactor_det(const F& f, const DenseMatrix<F>& a);

// Solution of a x = r or nullopt when inconsistent.
template <class F>
std::optional<std::vector<typename F::Element>> dense_solve(const F& f, DenseMatrix<F> a, std::size_t cols,
                                                            std::vector<typename F::Element> r);

template <class F>
DenseMatrix<F> dense_multiply(const F& f, const DenseMatrix<F>& a, const DenseMatrix<F>& b, std::size_t inner,
                              std::size_t cols);

// Maximum matching by Edmonds' blossom algorithm.
std::vector<Edge> max_matching(const Graph& g);
// Maximum matching size by subset dynamic programming; n <= 20.
std::size_t max_matching_size_exhaustive(const Graph& g);
// Edges lying in at least one perfect matching; n <= 20.
std::set<Edge> allowed_edges(const Graph& g);
bool has_perfect_matching(const Graph& g);

struct FlowResult {
  std::size_t value = 0;
  std::vector<Vertex> cut;
};

// Maximum number of internally vertex-disjoint s-t paths by Edmonds-Karp on a
// split network; s and t are never cut.
FlowResult max_vertex_flow(const DiGraph& g, Vertex s, Vertex t);
// BFS reachability from s to t avoiding removed.
bool reachable(const DiGraph& g, Vertex s, Vertex t, const std::vector<Vertex>& removed);

// Exact treewidth by dynamic programming over vertex subsets; n <= 16.
int exact_treewidth(const Graph& g);

struct Quadruple {
  Vertex i, j, k, l;
};

// Enumerates all quadruples against an adjacency matrix; |V(h)| <= 60.
std::optional<Quadruple> brute_strongness(const Graph& h, const std::vector<std::int64_t>& position);

}  // namespace lowtw::oracle

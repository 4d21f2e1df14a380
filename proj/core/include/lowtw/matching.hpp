#pragma once

#include <optional>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/elimination.hpp"
#include "lowtw/field.hpp"
#include "lowtw/rng.hpp"
#include "lowtw/sparse_matrix.hpp"

namespace lowtw {

struct Matching {
  std::vector<Edge> edges;  // (u, v) with u < v, sorted

  std::size_t size() const { return edges.size(); }
};

class MatchingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Validation validate(const Matching& m, const Graph& g);
Matching make_matching(std::vector<Edge> edges);

// Smallest prime >= max(n^(c+5), 2^31), capped at kLargePrime.
std::uint64_t matching_prime(std::size_t n, int c);

struct TutteSample {
  SparseMatrix<PrimeField> a;
};

// a[i][j] = x_ij for i < j, -x_ij for i > j, x_ij uniform in F_p.
TutteSample tutte_sample(const Graph& g, std::uint64_t p, Rng rng);

// Tree-partition decomposition of the Tutte matrix graph: vertex v becomes row v
// and column n + v in the same bag.
TreePartitionDecomposition bipartite_tpd(const TreePartitionDecomposition& tpd, Vertex n);

// Random Tutte sample eliminated along a tree-partition decomposition.
class TutteSystem {
 public:
  TutteSystem(const Graph& g, const TreePartitionDecomposition& tpd, std::uint64_t p, Rng rng);

  std::size_t rank() const { return fac_.rank; }
  bool nonsingular() const { return fac_.rank == static_cast<std::size_t>(a_.a.rows()); }
  const TutteSample& sample() const { return a_; }
  const PluqFactorization<PrimeField>& factorization() const { return fac_; }
  std::size_t field_ops() const { return field_ops_; }

 private:
  TutteSample a_;
  PluqFactorization<PrimeField> fac_;
  std::size_t field_ops_ = 0;
};

// Solves A c = e_u and returns the edge u v with v the smallest neighbor where c[v] != 0.
// Throws MatchingError when the sample is singular.
Edge find_allowed_edge(const Graph& g, const TutteSystem& sys, Vertex u);

struct MatchingStats {
  std::size_t instances = 0;
  std::size_t max_depth = 0;
  std::size_t oustings = 0;
  std::size_t resamples = 0;
  std::size_t field_ops = 0;
};

inline constexpr int kResampleRetries = 3;

// nullopt reports failure.
std::optional<Matching> perfect_matching_tpd(const Graph& g, const TreePartitionDecomposition& tpd, int c,
                                             std::uint64_t seed, MatchingStats* stats = nullptr);

// Never overestimates.
std::size_t matching_size(const Graph& g, const TreeDecomposition& td, int c, std::uint64_t seed);

struct GraphSplit {
  Graph g_prime;
  TreePartitionDecomposition tpd;
  std::size_t lambda = 0;
  std::vector<Vertex> origin;     // vertex of G for every vertex of G'
  std::vector<char> edge_vertex;  // 1 for (u, tt') vertices
  std::vector<Vertex> node;       // tpd node holding each vertex of G'
  std::vector<std::vector<Vertex>> copies;  // vertices of G' per vertex of G
};

GraphSplit split_graph(const Graph& g, const TreeDecomposition& td);
Matching lift_matching(const GraphSplit& split, const Graph& g, const Matching& m);
Matching project_matching(const GraphSplit& split, const Graph& g, const Matching& m_prime);

std::optional<Matching> max_matching(const Graph& g, const TreeDecomposition& td, int c, std::uint64_t seed,
                                     MatchingStats* stats = nullptr);

}  // namespace lowtw

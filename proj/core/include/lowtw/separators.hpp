#pragma once

#include <cstdint>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/graph.hpp"

namespace lowtw {

// The rational num/den.
struct Threshold {
  std::uint64_t num;
  std::uint64_t den;
};

struct SteinerPiece {
  VertexSet R;
  Vertex u;
};

// Pieces with connected R, lambda <= mu(R - u) < 4 lambda, pairwise disjoint
// R - u, and uncovered measure below 2 lambda. Requires mu(v) < lambda everywhere.
std::vector<SteinerPiece> steiner_partition(const Graph& tree, const Measure& mu, Threshold lambda);

enum class SeparatorKind { LargeSep, SmallSep, TreewidthAtLeastK };

struct SeparatorOutcome {
  SeparatorKind kind = SeparatorKind::TreewidthAtLeastK;
  VertexSet separator;
};

// Every component of g - X has measure at most (num/den) * mu(V).
bool is_balanced_separator(const Graph& g, const Measure& mu, std::span<const Vertex> X,
                           Threshold alpha);

// Checks the size and balance promised by the outcome kind.
Validation check_separator_outcome(const Graph& g, const Measure& mu, int k,
                                   const SeparatorOutcome& out);

SeparatorOutcome find_balanced_separator(const Graph& g, const Measure& mu, int k);

}  // namespace lowtw

#pragma once

#include <cstdint>

#include "lowtw/decomposition.hpp"
#include "lowtw/graph.hpp"

namespace lowtw {

struct ApproxStats {
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
  std::size_t case_single_bag = 0;
  std::size_t case_outside_measure = 0;
  std::size_t case_inside_measure = 0;
};

struct ApproxResult {
  bool treewidth_at_least_k = false;
  // Rooted at node 0; valid when treewidth_at_least_k is false.
  TreeDecomposition decomposition;
  ApproxStats stats;
};

inline std::uint64_t approx_eta(int k) { return 100ULL * k * k; }

// Either a tree decomposition with bags of size at most 18 * 100k^2, or the
// verdict tw(g) >= k.
ApproxResult approximate_treewidth(const Graph& g, int k);

// Same, with s contained in the root bag. Requires |s| <= 17 * 100k^2 and s != V(h).
ApproxResult decompose_rec(const Graph& h, const VertexSet& s, int k);

}  // namespace lowtw

#pragma once

#include <optional>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/graph.hpp"

namespace lowtw {

// Internally vertex-disjoint paths; each starts in S, ends in T and has all
// inner vertices outside S and T.
struct VertexFlow {
  std::vector<std::vector<Vertex>> paths;
  std::size_t size() const { return paths.size(); }
};

struct VertexCut {
  VertexSet vertices;
  std::size_t size() const { return vertices.size(); }
};

struct MaxFlowCut {
  VertexFlow flow;
  VertexCut cut;
};

struct AugmentOutcome {
  bool augmented = false;
  // Valid when augmented.
  VertexFlow flow;
  // Valid when not augmented; |cut| equals the input flow size.
  VertexCut cut;
};

class FlowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Validation check_flow(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
                      const VertexFlow& f);
// True iff no vertex of T is reachable from S in g minus the cut.
bool separates(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
               const VertexCut& cut);

AugmentOutcome augment_once(const DiGraph& g, std::span<const Vertex> S, std::span<const Vertex> T,
                            const VertexFlow& f);

// Empty when the maximum flow exceeds k.
std::optional<MaxFlowCut> flow_up_to_k(const DiGraph& g, std::span<const Vertex> S,
                                       std::span<const Vertex> T, std::size_t k);

struct FlowTdStats {
  std::size_t subcalls = 0;
  std::size_t max_depth = 0;
  // Largest number of augmentations applied on top of the merged subcall flows.
  std::size_t max_repair_augmentations = 0;
};

// td must decompose the underlying undirected graph of g.
MaxFlowCut max_vertex_flow_td(const DiGraph& g, Vertex s, Vertex t, const TreeDecomposition& td,
                              FlowTdStats* stats = nullptr);

struct CollapsedInstance {
  DiGraph graph;
  Vertex s = -1;
  Vertex t = -1;
  // Original vertex of each non-terminal vertex of graph.
  std::vector<Vertex> original;
  // Position of each original vertex in graph; S maps to s, T to t.
  std::vector<Vertex> local;

  // Drops S and T from every bag and adds s and t to all of them.
  TreeDecomposition patch(const TreeDecomposition& td) const;
  VertexCut lift_cut(const VertexCut& cut) const;
};

CollapsedInstance collapse_terminals(const DiGraph& g, std::span<const Vertex> S,
                                     std::span<const Vertex> T);

}  // namespace lowtw

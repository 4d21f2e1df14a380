#include "lowtw/tw_approx.hpp"

#include <stdexcept>

#include "lowtw/separators.hpp"

namespace lowtw {

namespace {

struct Task {
  Subgraph h;
  VertexSet s;  // local to h
  Vertex parent;
  std::size_t depth;
};

}  // namespace

ApproxResult decompose_rec(const Graph& h0, const VertexSet& s0, int k) {
  if (k < 1) throw std::invalid_argument("decompose_rec: k must be positive");
  const std::uint64_t eta = approx_eta(k);
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  if (s0.size() > 17 * eta) throw std::logic_error("decompose_rec: |S| exceeds 17 eta");
  if (h0.num_vertices() > 0 && s0.size() == static_cast<std::size_t>(h0.num_vertices()))
    throw std::logic_error("decompose_rec: S equals V(H)");

  ApproxResult res;
  std::vector<VertexSet> bags;
  std::vector<Vertex> parent;

  Subgraph whole;
  whole.graph = h0;
  whole.to_original.resize(h0.num_vertices());
  for (Vertex v = 0; v < h0.num_vertices(); ++v) whole.to_original[v] = v;
  std::vector<Task> stack;
  stack.push_back({std::move(whole), s0, -1, 0});

  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    const Graph& h = task.h.graph;
    const Vertex n = h.num_vertices();
    res.stats.max_depth = std::max(res.stats.max_depth, task.depth);
    const Vertex node = static_cast<Vertex>(bags.size());
    const std::uint64_t outside = static_cast<std::uint64_t>(n) - task.s.size();
    if (outside > eta && h.num_edges() > kk * static_cast<std::uint64_t>(n)) {
      res.treewidth_at_least_k = true;
      return res;
    }
    auto to_orig = [&](const VertexSet& local) {
      VertexSet out;
      for (Vertex v : local) out.push_back(task.h.to_original[v]);
      return make_set(std::move(out));
    };

    if (outside <= eta) {
      ++res.stats.case_single_bag;
      VertexSet all(n);
      for (Vertex v = 0; v < n; ++v) all[v] = v;
      bags.push_back(to_orig(all));
      parent.push_back(task.parent);
      continue;
    }

    std::vector<std::uint64_t> w(n, 0);
    std::vector<char> in_s(n, 0);
    for (Vertex v : task.s) in_s[v] = 1;
    const bool inside = task.s.size() > 16 * eta;
    for (Vertex v = 0; v < n; ++v) w[v] = (in_s[v] != 0) == inside ? 1 : 0;
    if (inside)
      ++res.stats.case_inside_measure;
    else
      ++res.stats.case_outside_measure;
    SeparatorOutcome sep = find_balanced_separator(h, Measure(std::move(w)), k);
    if (sep.kind == SeparatorKind::TreewidthAtLeastK) {
      res.treewidth_at_least_k = true;
      return res;
    }
    VertexSet B = set_union(task.s, sep.separator);
    bags.push_back(to_orig(B));
    parent.push_back(task.parent);

    std::vector<char> removed(n, 0);
    for (Vertex v : B) removed[v] = 1;
    auto comps = connected_components(h, removed);
    std::vector<Task> children;
    std::vector<int> mark(n, -1);
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto& C = comps[ci];
      VertexSet nb;
      for (Vertex v : C)
        for (Vertex x : h.neighbors(v))
          if (removed[x] && mark[x] != static_cast<int>(ci)) {
            mark[x] = static_cast<int>(ci);
            nb.push_back(x);
          }
      nb = make_set(std::move(nb));
      VertexSet closed = set_union(C, nb);
      Subgraph sub = induced_subgraph(h, closed);
      VertexSet s_local;
      for (std::size_t i = 0; i < closed.size(); ++i)
        if (removed[closed[i]]) s_local.push_back(static_cast<Vertex>(i));
      const std::uint64_t h_child = C.size();
      if (!inside && h_child * 100 * kk > (100 * kk - 1) * outside)
        throw std::logic_error("decompose_rec: outside-measure shrinkage violated");
      if (inside && s_local.size() + kk > task.s.size())
        throw std::logic_error("decompose_rec: inside-measure shrinkage violated");
      for (auto& v : sub.to_original) v = task.h.to_original[v];
      children.push_back({std::move(sub), std::move(s_local), node, task.depth + 1});
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }

  const Vertex nodes = static_cast<Vertex>(bags.size());
  std::vector<Edge> edges;
  res.decomposition.children.assign(nodes, {});
  for (Vertex x = 0; x < nodes; ++x)
    if (parent[x] >= 0) {
      edges.emplace_back(parent[x], x);
      res.decomposition.children[parent[x]].push_back(x);
    }
  res.decomposition.tree = Graph(nodes, edges);
  res.decomposition.bags = std::move(bags);
  res.decomposition.root = 0;
  res.stats.nodes = static_cast<std::size_t>(nodes);
  return res;
}

ApproxResult approximate_treewidth(const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("approximate_treewidth: k must be positive");
  if (g.num_vertices() == 0) {
    ApproxResult res;
    res.decomposition = trivial_decomposition(0);
    res.decomposition.root = 0;
    res.stats.nodes = 1;
    return res;
  }
  if (g.num_edges() > static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(g.num_vertices())) {
    ApproxResult res;
    res.treewidth_at_least_k = true;
    return res;
  }
  return decompose_rec(g, {}, k);
}

}  // namespace lowtw

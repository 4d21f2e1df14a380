#include "lowtw/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lowtw {

namespace {

void build_csr(Vertex n, std::vector<Edge>& pairs, std::vector<std::size_t>& off,
               std::vector<Vertex>& tgt) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (auto& [u, v] : pairs) ++off[u + 1];
  for (Vertex i = 0; i < n; ++i) off[i + 1] += off[i];
  tgt.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) tgt[i] = pairs[i].second;
}

void check_endpoints(Vertex n, Vertex u, Vertex v) {
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw GraphError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
  if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
}

}  // namespace

Graph::Graph(Vertex n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw GraphError("negative vertex count");
}

Graph::Graph(Vertex n, std::span<const Edge> edges) : n_(n) {
  if (n < 0) throw GraphError("negative vertex count");
  std::vector<Edge> pairs;
  pairs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    check_endpoints(n, u, v);
    pairs.emplace_back(u, v);
    pairs.emplace_back(v, u);
  }
  build_csr(n, pairs, offsets_, targets_);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

DiGraph::DiGraph(Vertex n)
    : n_(n), out_off_(static_cast<std::size_t>(n) + 1, 0), in_off_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw GraphError("negative vertex count");
}

DiGraph::DiGraph(Vertex n, std::span<const Edge> arcs) : n_(n) {
  if (n < 0) throw GraphError("negative vertex count");
  std::vector<Edge> fwd, bwd;
  fwd.reserve(arcs.size());
  bwd.reserve(arcs.size());
  for (auto [u, v] : arcs) {
    check_endpoints(n, u, v);
    fwd.emplace_back(u, v);
    bwd.emplace_back(v, u);
  }
  build_csr(n, fwd, out_off_, out_);
  build_csr(n, bwd, in_off_, in_);
}

bool DiGraph::has_arc(Vertex u, Vertex v) const {
  auto nb = out_neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> DiGraph::arcs() const {
  std::vector<Edge> out;
  out.reserve(num_arcs());
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : out_neighbors(u)) out.emplace_back(u, v);
  return out;
}

Measure::Measure(std::vector<std::uint64_t> weights) : w_(std::move(weights)) {
  for (auto x : w_) total_ += x;
  if (total_ == 0) throw GraphError("measure must be positive on some vertex");
}

Measure Measure::uniform(Vertex n) { return Measure(std::vector<std::uint64_t>(n, 1)); }

Measure Measure::indicator(Vertex n, std::span<const Vertex> support) {
  std::vector<std::uint64_t> w(n, 0);
  for (Vertex v : support) w[v] = 1;
  return Measure(std::move(w));
}

std::uint64_t Measure::of(std::span<const Vertex> vs) const {
  std::uint64_t s = 0;
  for (Vertex v : vs) s += w_[v];
  return s;
}

std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<char> none(g.num_vertices(), 0);
  return connected_components(g, none);
}

std::vector<VertexSet> connected_components(const Graph& g, std::span<const char> removed) {
  const Vertex n = g.num_vertices();
  std::vector<char> seen(removed.begin(), removed.end());
  std::vector<VertexSet> comps;
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (Vertex w : g.neighbors(queue[h]))
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    std::sort(queue.begin(), queue.end());
    comps.push_back(queue);
  }
  return comps;
}

Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> vs) {
  const Vertex n = g.num_vertices();
  std::vector<Vertex> local(n, -1);
  Subgraph out;
  out.to_original.assign(vs.begin(), vs.end());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Vertex v = vs[i];
    if (v < 0 || v >= n) throw GraphError("vertex out of range: " + std::to_string(v));
    if (local[v] != -1) throw GraphError("repeated vertex: " + std::to_string(v));
    local[v] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (Vertex w : g.neighbors(vs[i]))
      if (local[w] > static_cast<Vertex>(i)) edges.emplace_back(static_cast<Vertex>(i), local[w]);
  out.graph = Graph(static_cast<Vertex>(vs.size()), edges);
  return out;
}

bool is_tree(const Graph& g) {
  const Vertex n = g.num_vertices();
  if (n == 0) return false;
  if (g.num_edges() != static_cast<std::size_t>(n - 1)) return false;
  return connected_components(g).size() == 1;
}

Subdivision one_subdivision(const Graph& tree) {
  if (!is_tree(tree)) throw GraphError("one_subdivision: input is not a tree");
  Subdivision out;
  out.edge_of = tree.edges();
  const Vertex n = tree.num_vertices();
  std::vector<Edge> edges;
  edges.reserve(out.edge_of.size() * 2);
  for (std::size_t i = 0; i < out.edge_of.size(); ++i) {
    Vertex w = n + static_cast<Vertex>(i);
    edges.emplace_back(out.edge_of[i].first, w);
    edges.emplace_back(w, out.edge_of[i].second);
  }
  out.graph = Graph(n + static_cast<Vertex>(out.edge_of.size()), edges);
  return out;
}

Subgraph spanning_tree(const Graph& g, std::span<const Vertex> component) {
  Subgraph out;
  out.to_original.assign(component.begin(), component.end());
  if (component.empty()) throw GraphError("spanning_tree: empty vertex set");
  std::vector<Vertex> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < component.size(); ++i) local[component[i]] = static_cast<Vertex>(i);
  auto root_it = std::min_element(component.begin(), component.end());
  Vertex root = local[*root_it];
  std::vector<char> seen(component.size(), 0);
  std::vector<Vertex> queue{root};
  seen[root] = 1;
  std::vector<Edge> edges;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    Vertex v = component[queue[h]];
    for (Vertex w : g.neighbors(v)) {
      Vertex lw = local[w];
      if (lw >= 0 && !seen[lw]) {
        seen[lw] = 1;
        queue.push_back(lw);
        edges.emplace_back(queue[h], lw);
      }
    }
  }
  if (queue.size() != component.size()) throw GraphError("spanning_tree: set is not connected");
  out.graph = Graph(static_cast<Vertex>(component.size()), edges);
  return out;
}

DiGraph symmetric_digraph(const Graph& g) {
  std::vector<Edge> arcs;
  arcs.reserve(g.num_edges() * 2);
  for (auto [u, v] : g.edges()) {
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  return DiGraph(g.num_vertices(), arcs);
}

Graph underlying_graph(const DiGraph& g) {
  auto arcs = g.arcs();
  return Graph(g.num_vertices(), arcs);
}

VertexSet make_set(std::vector<Vertex> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(std::span<const Vertex> a, Vertex v) {
  return std::binary_search(a.begin(), a.end(), v);
}

bool is_subset(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace lowtw

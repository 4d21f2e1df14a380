#include "lowtw/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace lowtw {

namespace {

std::string vs(Vertex v) { return std::to_string(v); }

Validation check_bags(const std::vector<VertexSet>& bags, Vertex n) {
  for (std::size_t i = 0; i < bags.size(); ++i) {
    const auto& b = bags[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] < 0 || b[j] >= n)
        return Validation::fail("bag " + std::to_string(i) + " has out-of-range vertex " + vs(b[j]));
      if (j > 0 && b[j - 1] >= b[j])
        return Validation::fail("bag " + std::to_string(i) + " is not sorted and duplicate-free");
    }
  }
  return {};
}

std::vector<std::vector<Vertex>> occurrences(const std::vector<VertexSet>& bags, Vertex n) {
  std::vector<std::vector<Vertex>> occ(n);
  for (std::size_t i = 0; i < bags.size(); ++i)
    for (Vertex v : bags[i]) occ[v].push_back(static_cast<Vertex>(i));
  return occ;
}

bool bag_pair_covers(const std::vector<VertexSet>& bags, const std::vector<std::vector<Vertex>>& occ,
                     Vertex u, Vertex v) {
  const auto& a = occ[u].size() <= occ[v].size() ? occ[u] : occ[v];
  Vertex other = occ[u].size() <= occ[v].size() ? v : u;
  for (Vertex x : a)
    if (set_contains(bags[x], other)) return true;
  return false;
}

std::pair<Vertex, Vertex> child_key(const std::vector<VertexSet>& bags, Vertex x) {
  Vertex m = bags[x].empty() ? std::numeric_limits<Vertex>::max() : bags[x].front();
  return {m, x};
}

}  // namespace

std::size_t TreeDecomposition::max_bag() const {
  std::size_t m = 0;
  for (const auto& b : bags) m = std::max(m, b.size());
  return m;
}

std::size_t PathDecomposition::max_bag() const {
  std::size_t m = 0;
  for (const auto& b : bags) m = std::max(m, b.size());
  return m;
}

std::size_t TreePartitionDecomposition::width() const {
  std::size_t m = 0;
  for (const auto& b : bags) m = std::max(m, b.size());
  return m;
}

Validation validate(const TreeDecomposition& td, const Graph& g) {
  const Vertex n = g.num_vertices();
  const Vertex nodes = td.num_nodes();
  if (nodes == 0) return Validation::fail("decomposition has no nodes");
  if (td.tree.num_vertices() != nodes) return Validation::fail("tree size differs from bag count");
  if (!is_tree(td.tree)) return Validation::fail("underlying graph is not a tree");
  if (auto r = check_bags(td.bags, n); !r) return r;
  auto occ = occurrences(td.bags, n);
  for (Vertex v = 0; v < n; ++v)
    if (occ[v].empty()) return Validation::fail("vertex " + vs(v) + " is in no bag");
  for (auto [u, v] : g.edges())
    if (!bag_pair_covers(td.bags, occ, u, v))
      return Validation::fail("edge not covered: " + vs(u) + " " + vs(v));
  std::vector<std::size_t> inner(n, 0);
  for (auto [x, y] : td.tree.edges()) {
    for (Vertex v : set_intersection(td.bags[x], td.bags[y])) ++inner[v];
  }
  for (Vertex v = 0; v < n; ++v)
    if (inner[v] + 1 != occ[v].size())
      return Validation::fail("subtree disconnected for vertex " + vs(v));
  if (td.root >= nodes) return Validation::fail("root out of range");
  return {};
}

Validation validate(const PathDecomposition& pd, const Graph& g) {
  const Vertex n = g.num_vertices();
  if (pd.bags.empty()) return Validation::fail("decomposition has no nodes");
  if (auto r = check_bags(pd.bags, n); !r) return r;
  auto occ = occurrences(pd.bags, n);
  for (Vertex v = 0; v < n; ++v) {
    if (occ[v].empty()) return Validation::fail("vertex " + vs(v) + " is in no bag");
    if (occ[v].back() - occ[v].front() + 1 != static_cast<Vertex>(occ[v].size()))
      return Validation::fail("bags of vertex " + vs(v) + " are not contiguous");
  }
  for (auto [u, v] : g.edges())
    if (!bag_pair_covers(pd.bags, occ, u, v))
      return Validation::fail("edge not covered: " + vs(u) + " " + vs(v));
  return {};
}

Validation validate(const TreePartitionDecomposition& tpd, const Graph& g) {
  const Vertex n = g.num_vertices();
  const Vertex nodes = tpd.num_nodes();
  if (nodes == 0) return Validation::fail("decomposition has no nodes");
  if (tpd.tree.num_vertices() != nodes) return Validation::fail("tree size differs from bag count");
  if (!is_tree(tpd.tree)) return Validation::fail("underlying graph is not a tree");
  if (auto r = check_bags(tpd.bags, n); !r) return r;
  std::vector<Vertex> where(n, -1);
  for (Vertex x = 0; x < nodes; ++x)
    for (Vertex v : tpd.bags[x]) {
      if (where[v] != -1) return Validation::fail("vertex " + vs(v) + " is in two bags");
      where[v] = x;
    }
  for (Vertex v = 0; v < n; ++v)
    if (where[v] == -1) return Validation::fail("vertex " + vs(v) + " is in no bag");
  for (auto [u, v] : g.edges()) {
    Vertex a = where[u], b = where[v];
    if (a != b && !tpd.tree.has_edge(a, b))
      return Validation::fail("edge " + vs(u) + " " + vs(v) + " joins non-adjacent bags");
  }
  return {};
}

TreeDecomposition trivial_decomposition(Vertex n) {
  TreeDecomposition td;
  td.tree = Graph(1);
  VertexSet all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  td.bags.push_back(std::move(all));
  return td;
}

TreeDecomposition to_tree_decomposition(const PathDecomposition& pd) {
  TreeDecomposition td;
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < pd.bags.size(); ++i)
    edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
  td.tree = Graph(static_cast<Vertex>(pd.bags.size()), edges);
  td.bags = pd.bags;
  return td;
}

TreeDecomposition clean(const TreeDecomposition& td) {
  const Vertex nodes = td.num_nodes();
  if (nodes == 0) throw DecompositionError("clean: empty decomposition");
  if (td.tree.num_vertices() != nodes || !is_tree(td.tree))
    throw DecompositionError("clean: underlying graph is not a tree");
  std::vector<std::set<Vertex>> adj(nodes);
  std::deque<Edge> work;
  for (auto [x, y] : td.tree.edges()) {
    adj[x].insert(y);
    adj[y].insert(x);
    work.emplace_back(x, y);
  }
  std::vector<char> alive(nodes, 1);
  auto contract = [&](Vertex gone, Vertex keep) {
    alive[gone] = 0;
    adj[keep].erase(gone);
    for (Vertex z : adj[gone]) {
      if (z == keep) continue;
      adj[z].erase(gone);
      adj[z].insert(keep);
      adj[keep].insert(z);
      work.emplace_back(z, keep);
    }
    adj[gone].clear();
  };
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    if (!alive[x] || !alive[y] || !adj[x].count(y)) continue;
    if (is_subset(td.bags[x], td.bags[y]))
      contract(x, y);
    else if (is_subset(td.bags[y], td.bags[x]))
      contract(y, x);
  }
  std::vector<Vertex> id(nodes, -1);
  TreeDecomposition out;
  for (Vertex x = 0; x < nodes; ++x)
    if (alive[x]) {
      id[x] = static_cast<Vertex>(out.bags.size());
      out.bags.push_back(td.bags[x]);
    }
  std::vector<Edge> edges;
  for (Vertex x = 0; x < nodes; ++x)
    for (Vertex y : adj[x])
      if (x < y) edges.emplace_back(id[x], id[y]);
  out.tree = Graph(static_cast<Vertex>(out.bags.size()), edges);
  return out;
}

bool is_clean(const TreeDecomposition& td) {
  for (auto [x, y] : td.tree.edges())
    if (is_subset(td.bags[x], td.bags[y]) || is_subset(td.bags[y], td.bags[x])) return false;
  return true;
}

RootedTree root_tree(const Graph& tree, Vertex root) {
  RootedTree rt;
  const Vertex n = tree.num_vertices();
  rt.root = root;
  rt.parent.assign(n, -1);
  rt.children.assign(n, {});
  rt.depth.assign(n, 0);
  std::vector<Vertex> stack{root};
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    rt.preorder.push_back(x);
    for (Vertex y : tree.neighbors(x))
      if (!seen[y]) {
        seen[y] = 1;
        rt.parent[y] = x;
        rt.depth[y] = rt.depth[x] + 1;
        rt.children[x].push_back(y);
      }
    for (auto it = rt.children[x].rbegin(); it != rt.children[x].rend(); ++it) stack.push_back(*it);
  }
  return rt;
}

RootedTree root_decomposition(const TreeDecomposition& td) {
  const Vertex n = td.num_nodes();
  Vertex root = td.root >= 0 ? td.root : 0;
  RootedTree rt;
  rt.root = root;
  rt.parent.assign(n, -1);
  rt.depth.assign(n, 0);
  if (!td.children.empty()) {
    rt.children = td.children;
  } else {
    auto base = root_tree(td.tree, root);
    rt.children = std::move(base.children);
    for (auto& ch : rt.children)
      std::sort(ch.begin(), ch.end(),
                [&](Vertex a, Vertex b) { return child_key(td.bags, a) < child_key(td.bags, b); });
  }
  std::vector<Vertex> stack{root};
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    rt.preorder.push_back(x);
    for (auto it = rt.children[x].rbegin(); it != rt.children[x].rend(); ++it) {
      rt.parent[*it] = x;
      rt.depth[*it] = rt.depth[x] + 1;
      stack.push_back(*it);
    }
  }
  return rt;
}

std::vector<Vertex> top_nodes(const TreeDecomposition& td, const RootedTree& rt, Vertex n) {
  std::vector<Vertex> top(n, -1);
  for (Vertex x : rt.preorder)
    for (Vertex v : td.bags[x])
      if (top[v] == -1) top[v] = x;
  return top;
}

std::vector<Vertex> topmost_edge_nodes(const TreeDecomposition& td, const RootedTree& rt,
                                       const Graph& g) {
  auto top = top_nodes(td, rt, g.num_vertices());
  std::vector<Vertex> out;
  for (auto [u, v] : g.edges()) {
    Vertex a = top[u], b = top[v];
    out.push_back(rt.depth[a] >= rt.depth[b] ? a : b);
  }
  return out;
}

TreeDecomposition nice_form(const TreeDecomposition& td, const Graph& g) {
  if (auto r = validate(td, g); !r) throw DecompositionError("nice_form: " + r.violation);
  TreeDecomposition c = clean(td);
  RootedTree rt = root_tree(c.tree, 0);

  std::vector<VertexSet> bags;
  std::vector<Vertex> parent;
  auto add = [&](VertexSet b, Vertex p) {
    bags.push_back(std::move(b));
    parent.push_back(p);
    return static_cast<Vertex>(bags.size() - 1);
  };

  // Root shrinking path, topmost node first.
  const VertexSet& rbag = c.bags[rt.root];
  Vertex attach = -1;
  for (std::size_t keep = 0; keep < rbag.size(); ++keep)
    attach = add(VertexSet(rbag.begin(), rbag.begin() + static_cast<std::ptrdiff_t>(keep)), attach);

  std::vector<std::pair<Vertex, Vertex>> stack{{rt.root, attach}};
  while (!stack.empty()) {
    auto [x, above] = stack.back();
    stack.pop_back();
    const VertexSet& bx = c.bags[x];
    VertexSet forgotten = above >= 0 && rt.parent[x] >= 0
                              ? set_difference(bx, c.bags[rt.parent[x]])
                              : VertexSet{};
    Vertex cur = above;
    // Drop forgotten vertices one at a time, largest index removed last from the top.
    for (std::size_t i = forgotten.size(); i-- > 1;) {
      VertexSet b = set_difference(bx, VertexSet(forgotten.begin(), forgotten.begin() + static_cast<std::ptrdiff_t>(i)));
      cur = add(std::move(b), cur);
    }
    cur = add(bx, cur);
    const auto& ch = rt.children[x];
    // Binarize: each extra child hangs from another copy of bx.
    std::vector<std::pair<Vertex, Vertex>> pending;
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i > 0 && i + 1 < ch.size()) cur = add(bx, cur);
      pending.emplace_back(ch[i], cur);
    }
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) stack.push_back(*it);
  }

  TreeDecomposition out;
  const Vertex nodes = static_cast<Vertex>(bags.size());
  out.children.assign(nodes, {});
  std::vector<Edge> edges;
  for (Vertex x = 0; x < nodes; ++x)
    if (parent[x] >= 0) {
      edges.emplace_back(parent[x], x);
      out.children[parent[x]].push_back(x);
    }
  out.tree = Graph(nodes, edges);
  out.bags = std::move(bags);
  out.root = 0;
  for (auto& ch : out.children)
    std::sort(ch.begin(), ch.end(),
              [&](Vertex a, Vertex b) { return child_key(out.bags, a) < child_key(out.bags, b); });
  return out;
}

Vertex balanced_tree_node(const Graph& tree, const Measure& mu) {
  if (!is_tree(tree)) throw GraphError("balanced_tree_node: input is not a tree");
  const Vertex n = tree.num_vertices();
  if (static_cast<Vertex>(mu.size()) != n) throw GraphError("balanced_tree_node: measure size mismatch");
  RootedTree rt = root_tree(tree, 0);
  std::vector<std::uint64_t> sub(n, 0);
  for (auto it = rt.preorder.rbegin(); it != rt.preorder.rend(); ++it) {
    Vertex x = *it;
    sub[x] += mu[x];
    if (rt.parent[x] >= 0) sub[rt.parent[x]] += sub[x];
  }
  const std::uint64_t total = mu.total();
  for (Vertex x = 0; x < n; ++x) {
    std::uint64_t heaviest = total - sub[x];
    for (Vertex c : rt.children[x]) heaviest = std::max(heaviest, sub[c]);
    if (at_most_fraction(heaviest, total, 1, 2)) return x;
  }
  throw GraphError("balanced_tree_node: no balanced node");
}

TreeDecomposition bipartite_decomp_from_symmetric(const TreeDecomposition& td, Vertex n) {
  TreeDecomposition out = td;
  for (auto& b : out.bags) {
    VertexSet nb;
    nb.reserve(b.size() * 2);
    for (Vertex v : b) nb.push_back(v);
    for (Vertex v : b) nb.push_back(n + v);
    b = std::move(nb);
  }
  return out;
}

}  // namespace lowtw

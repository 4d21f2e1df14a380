#include "lowtw/matching.hpp"

#include <algorithm>
#include <string>

#include "lowtw/splitting.hpp"

namespace lowtw {

Matching make_matching(std::vector<Edge> edges) {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  return {std::move(edges)};
}

Validation validate(const Matching& m, const Graph& g) {
  std::vector<char> used(g.num_vertices(), 0);
  for (auto [u, v] : m.edges) {
    if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices())
      return Validation::fail("matching edge out of range");
    if (!g.has_edge(u, v))
      return Validation::fail("pair " + std::to_string(u) + " " + std::to_string(v) + " is not an edge");
    if (used[u] || used[v]) return Validation::fail("vertex matched twice");
    used[u] = used[v] = 1;
  }
  return {};
}

std::uint64_t matching_prime(std::size_t n, int c) {
  if (c < 0) throw MatchingError("matching_prime: negative error exponent");
  const std::uint64_t floor = 1ULL << 31;
  std::uint64_t r = 1;
  const std::uint64_t base = std::max<std::uint64_t>(n, 1);
  for (int i = 0; i < c + 5; ++i) {
    if (r > kLargePrime / base) return kLargePrime;
    r *= base;
  }
  std::uint64_t p = next_prime(std::max(r, floor));
  return p == 0 || p > kLargePrime ? kLargePrime : p;
}

TutteSample tutte_sample(const Graph& g, std::uint64_t p, Rng rng) {
  PrimeField f(p);
  std::vector<Entry<PrimeField>> es;
  for (auto [u, v] : g.edges()) {
    auto x = f.random(rng);
    if (f.is_zero(x)) continue;
    es.push_back({u, v, x});
    es.push_back({v, u, f.neg(x)});
  }
  return {SparseMatrix<PrimeField>(f, g.num_vertices(), g.num_vertices(), std::move(es))};
}

TreePartitionDecomposition bipartite_tpd(const TreePartitionDecomposition& tpd, Vertex n) {
  TreePartitionDecomposition out = tpd;
  for (auto& b : out.bags) {
    VertexSet nb(b.begin(), b.end());
    for (Vertex v : b) nb.push_back(n + v);
    b = std::move(nb);
  }
  return out;
}

TutteSystem::TutteSystem(const Graph& g, const TreePartitionDecomposition& tpd, std::uint64_t p, Rng rng)
    : a_(tutte_sample(g, p, rng)) {
  if (g.num_vertices() == 0) return;
  StrongOrdering so = ordering_from_tpd(a_.a, bipartite_tpd(tpd, g.num_vertices()));
  auto el = guided_elimination(a_.a, so);
  field_ops_ = el.field_ops;
  fac_ = pluq(el);
}

Edge find_allowed_edge(const Graph& g, const TutteSystem& sys, Vertex u) {
  if (!sys.nonsingular()) throw MatchingError("find_allowed_edge: singular Tutte sample");
  const PrimeField& f = sys.sample().a.field();
  std::vector<PrimeField::Element> e(g.num_vertices(), f.zero());
  e[u] = f.one();
  auto sol = solve(sys.factorization(), std::span<const PrimeField::Element>(e));
  if (!sol.consistent) throw MatchingError("find_allowed_edge: inconsistent system");
  for (Vertex v : g.neighbors(u))
    if (!f.is_zero(sol.x[v])) return {std::min(u, v), std::max(u, v)};
  throw MatchingError("find_allowed_edge: no allowed edge at vertex " + std::to_string(u));
}

namespace {

struct LocalInstance {
  Subgraph sub;
  TreePartitionDecomposition tpd;
};

// Induced subgraph on the alive vertices of the given tree nodes, with the
// decomposition restricted to those nodes. Empty bags stay.
LocalInstance restrict(const Graph& g, const TreePartitionDecomposition& tpd, const Subgraph& tree,
                       const std::vector<char>& alive) {
  LocalInstance li;
  VertexSet vs;
  for (Vertex t : tree.to_original)
    for (Vertex v : tpd.bags[t])
      if (alive[v]) vs.push_back(v);
  vs = make_set(std::move(vs));
  li.sub = induced_subgraph(g, vs);
  std::vector<Vertex> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) local[vs[i]] = static_cast<Vertex>(i);
  li.tpd.tree = tree.graph;
  li.tpd.bags.resize(tree.to_original.size());
  for (std::size_t i = 0; i < tree.to_original.size(); ++i)
    for (Vertex v : tpd.bags[tree.to_original[i]])
      if (alive[v]) li.tpd.bags[i].push_back(local[v]);
  return li;
}

struct Task {
  VertexSet nodes;
  Rng rng;
  std::size_t depth;
};

std::optional<Matching> perfect_matching_impl(const Graph& g, const TreePartitionDecomposition& tpd,
                                              std::uint64_t p, Rng rng, MatchingStats& st) {
  if (auto v = validate(tpd, g); !v) throw DecompositionError("perfect_matching_tpd: " + v.violation);
  const Vertex n = g.num_vertices();
  std::vector<char> alive(n, 1);
  std::vector<Edge> out;
  VertexSet all(tpd.num_nodes());
  for (Vertex t = 0; t < tpd.num_nodes(); ++t) all[t] = t;
  std::vector<Task> stack{{std::move(all), rng, 0}};
  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    Subgraph tree = induced_subgraph(tpd.tree, task.nodes);
    std::size_t count = 0;
    for (Vertex t : task.nodes)
      for (Vertex v : tpd.bags[t]) count += alive[v] ? 1 : 0;
    if (count == 0) continue;
    if (count % 2 == 1) return std::nullopt;
    ++st.instances;
    st.max_depth = std::max(st.max_depth, task.depth);
    const Vertex xl = balanced_tree_node(tree.graph, Measure::uniform(tree.graph.num_vertices()));
    const Vertex x = tree.to_original[xl];
    std::uint64_t oust = 0;
    for (Vertex u : tpd.bags[x]) {
      if (!alive[u]) continue;
      LocalInstance li = restrict(g, tpd, tree, alive);
      Vertex lu = static_cast<Vertex>(std::lower_bound(li.sub.to_original.begin(), li.sub.to_original.end(), u) -
                                      li.sub.to_original.begin());
      std::optional<TutteSystem> sys;
      for (int attempt = 0; attempt <= kResampleRetries; ++attempt) {
        sys.emplace(li.sub.graph, li.tpd, p, task.rng.split(0).split(oust).split(attempt));
        st.field_ops += sys->field_ops();
        if (sys->nonsingular()) break;
        ++st.resamples;
      }
      if (!sys->nonsingular()) return std::nullopt;
      Edge e = find_allowed_edge(li.sub.graph, *sys, lu);
      Vertex a = li.sub.to_original[e.first], b = li.sub.to_original[e.second];
      alive[a] = alive[b] = 0;
      out.emplace_back(a, b);
      ++st.oustings;
      ++oust;
    }
    std::vector<char> removed(tree.graph.num_vertices(), 0);
    removed[xl] = 1;
    auto comps = connected_components(tree.graph, removed);
    for (std::size_t ci = comps.size(); ci-- > 0;) {
      VertexSet nodes;
      for (Vertex l : comps[ci]) nodes.push_back(tree.to_original[l]);
      stack.push_back({make_set(std::move(nodes)), task.rng.split(1).split(ci), task.depth + 1});
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (alive[v]) return std::nullopt;
  return make_matching(std::move(out));
}

void tree_matching(const GraphSplit& split, Vertex w, std::vector<Edge>& out) {
  const Vertex u = split.origin[w];
  std::vector<std::pair<Vertex, Vertex>> visit{{w, -1}};
  while (!visit.empty()) {
    auto [x, par] = visit.back();
    visit.pop_back();
    for (Vertex y : split.g_prime.neighbors(x)) {
      if (y == par || split.origin[y] != u) continue;
      if (split.edge_vertex[x]) out.emplace_back(std::min(x, y), std::max(x, y));
      visit.emplace_back(y, x);
    }
  }
}

}  // namespace

std::optional<Matching> perfect_matching_tpd(const Graph& g, const TreePartitionDecomposition& tpd, int c,
                                             std::uint64_t seed, MatchingStats* stats) {
  MatchingStats st;
  auto r = perfect_matching_impl(g, tpd, matching_prime(static_cast<std::size_t>(g.num_vertices()), c), Rng(seed), st);
  if (stats) *stats = st;
  return r;
}

std::size_t matching_size(const Graph& g, const TreeDecomposition& td, int c, std::uint64_t seed) {
  if (auto v = validate(td, g); !v) throw DecompositionError("matching_size: " + v.violation);
  const Vertex n = g.num_vertices();
  if (n == 0) return 0;
  TutteSample s = tutte_sample(g, matching_prime(static_cast<std::size_t>(n), c), Rng(seed));
  auto res = tw_rank_det_solve(s.a, bipartite_decomp_from_symmetric(td, n));
  return res.rank / 2;
}

GraphSplit split_graph(const Graph& g, const TreeDecomposition& td) {
  if (auto v = validate(td, g); !v) throw DecompositionError("split_graph: " + v.violation);
  if (!is_clean(td)) throw DecompositionError("split_graph: decomposition is not clean");
  const Vertex n = g.num_vertices();
  const Vertex nodes = td.num_nodes();
  Subdivision sd = one_subdivision(td.tree);
  GraphSplit s;
  s.copies.resize(n);
  std::vector<std::vector<Vertex>> id(nodes);
  Vertex next = 0;
  auto add = [&](Vertex u, Vertex node, bool edge) {
    s.origin.push_back(u);
    s.edge_vertex.push_back(edge ? 1 : 0);
    s.node.push_back(node);
    s.copies[u].push_back(next);
    return next++;
  };
  for (Vertex t = 0; t < nodes; ++t)
    for (Vertex u : td.bags[t]) id[t].push_back(add(u, t, false));
  auto vid = [&](Vertex t, Vertex u) {
    auto it = std::lower_bound(td.bags[t].begin(), td.bags[t].end(), u);
    return id[t][it - td.bags[t].begin()];
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sd.edge_of.size(); ++i) {
    auto [a, b] = sd.edge_of[i];
    for (Vertex u : set_intersection(td.bags[a], td.bags[b])) {
      Vertex w = add(u, nodes + static_cast<Vertex>(i), true);
      edges.emplace_back(w, vid(a, u));
      edges.emplace_back(w, vid(b, u));
    }
  }
  std::vector<char> in(n, 0);
  for (Vertex t = 0; t < nodes; ++t) {
    for (Vertex u : td.bags[t]) in[u] = 1;
    for (Vertex u : td.bags[t])
      for (Vertex v : g.neighbors(u))
        if (v > u && in[v]) edges.emplace_back(vid(t, u), vid(t, v));
    for (Vertex u : td.bags[t]) in[u] = 0;
  }
  s.g_prime = Graph(next, edges);
  s.lambda = static_cast<std::size_t>(next - n);
  s.tpd.tree = sd.graph;
  s.tpd.bags.assign(sd.graph.num_vertices(), {});
  for (Vertex w = 0; w < next; ++w) s.tpd.bags[s.node[w]].push_back(w);
  for (auto& c : s.copies) std::sort(c.begin(), c.end());
  return s;
}

Matching lift_matching(const GraphSplit& split, const Graph& g, const Matching& m) {
  if (auto v = validate(m, g); !v) throw MatchingError("lift_matching: " + v.violation);
  std::vector<Vertex> w(g.num_vertices(), -1);
  std::vector<Edge> out;
  for (auto [u, v] : m.edges) {
    bool done = false;
    for (Vertex a : split.copies[u]) {
      if (split.edge_vertex[a]) continue;
      for (Vertex b : split.copies[v])
        if (!split.edge_vertex[b] && split.node[a] == split.node[b]) {
          out.emplace_back(std::min(a, b), std::max(a, b));
          w[u] = a;
          w[v] = b;
          done = true;
          break;
        }
      if (done) break;
    }
    if (!done) throw MatchingError("lift_matching: edge not covered by the split");
  }
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (split.copies[u].empty()) continue;
    if (w[u] < 0) w[u] = split.copies[u].front();
    tree_matching(split, w[u], out);
  }
  return make_matching(std::move(out));
}

Matching project_matching(const GraphSplit& split, const Graph& g, const Matching& m_prime) {
  if (auto v = validate(m_prime, split.g_prime); !v) throw MatchingError("project_matching: " + v.violation);
  const Vertex np = split.g_prime.num_vertices();
  std::vector<Vertex> mate(np, -1);
  for (auto [a, b] : m_prime.edges) {
    mate[a] = b;
    mate[b] = a;
  }
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    std::optional<Edge> keep;
    int external = 0;
    for (Vertex a : split.copies[u])
      if (mate[a] >= 0 && split.origin[mate[a]] != u) {
        ++external;
        Edge e{std::min(a, mate[a]), std::max(a, mate[a])};
        if (!keep || e < *keep) keep = e;
      }
    if (external <= 1) continue;
    const Vertex w = split.origin[keep->first] == u ? keep->first : keep->second;
    for (Vertex a : split.copies[u])
      if (mate[a] >= 0) {
        mate[mate[a]] = -1;
        mate[a] = -1;
      }
    mate[keep->first] = keep->second;
    mate[keep->second] = keep->first;
    std::vector<Edge> tm;
    tree_matching(split, w, tm);
    for (auto [a, b] : tm) {
      mate[a] = b;
      mate[b] = a;
    }
  }
  std::vector<Edge> out;
  for (Vertex a = 0; a < np; ++a)
    if (mate[a] > a && split.origin[mate[a]] != split.origin[a]) out.emplace_back(split.origin[a], split.origin[mate[a]]);
  return make_matching(std::move(out));
}

std::optional<Matching> max_matching(const Graph& g, const TreeDecomposition& td, int c, std::uint64_t seed,
                                     MatchingStats* stats) {
  if (auto v = validate(td, g); !v) throw DecompositionError("max_matching: " + v.violation);
  MatchingStats st;
  if (g.num_edges() == 0) {
    if (stats) *stats = st;
    return Matching{};
  }
  GraphSplit split = split_graph(g, clean(td));
  const Graph& gp = split.g_prime;
  const std::uint64_t p = matching_prime(static_cast<std::size_t>(gp.num_vertices()), c);
  Rng rng(seed);
  TutteSystem sys(gp, split.tpd, p, rng.split(0));
  st.field_ops += sys.field_ops();
  RankDet<PrimeField> rd = rank_det_maxsubmatrix(sys.factorization());
  std::vector<char> keep(gp.num_vertices(), 0);
  for (Index r : rd.rows) keep[r] = 1;
  Subgraph tree;
  tree.graph = split.tpd.tree;
  tree.to_original.resize(split.tpd.num_nodes());
  for (Vertex t = 0; t < split.tpd.num_nodes(); ++t) tree.to_original[t] = t;
  LocalInstance li = restrict(gp, split.tpd, tree, keep);
  auto pm = perfect_matching_impl(li.sub.graph, li.tpd, p, rng.split(1), st);
  if (stats) *stats = st;
  if (!pm) return std::nullopt;
  std::vector<Edge> mp;
  for (auto [a, b] : pm->edges) mp.emplace_back(li.sub.to_original[a], li.sub.to_original[b]);
  return project_matching(split, g, make_matching(std::move(mp)));
}

}  // namespace lowtw

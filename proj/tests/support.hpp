#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/field.hpp"
#include "lowtw/graph.hpp"
#include "lowtw/rng.hpp"
#include "lowtw/sparse_matrix.hpp"

namespace lowtw::testing {

inline bool coin(Rng& rng, double p) { return static_cast<double>(rng.below(1u << 20)) < p * (1u << 20); }

inline std::vector<Vertex> random_permutation(Vertex n, Rng& rng) {
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (Vertex i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

struct GraphWithTd {
  Graph g;
  TreeDecomposition td;
};

// Random k-tree on n vertices with each edge kept with probability keep, and
// the decomposition it was built from.
inline GraphWithTd random_partial_ktree(Vertex n, int k, double keep, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<VertexSet> bags;
  std::vector<Edge> tree;
  const Vertex first = std::min<Vertex>(n, k + 1);
  VertexSet b0;
  for (Vertex v = 0; v < first; ++v) b0.push_back(v);
  for (Vertex u = 0; u < first; ++u)
    for (Vertex v = u + 1; v < first; ++v)
      if (coin(rng, keep)) edges.emplace_back(u, v);
  bags.push_back(b0);
  for (Vertex v = first; v < n; ++v) {
    const Vertex parent = static_cast<Vertex>(rng.below(bags.size()));
    VertexSet s = bags[parent];
    while (static_cast<int>(s.size()) > k) s.erase(s.begin() + rng.below(s.size()));
    for (Vertex u : s)
      if (coin(rng, keep)) edges.emplace_back(u, v);
    s.push_back(v);
    bags.push_back(make_set(s));
    tree.emplace_back(parent, static_cast<Vertex>(bags.size() - 1));
  }
  auto pi = random_permutation(n, rng);
  for (auto& [u, v] : edges) u = pi[u], v = pi[v];
  for (auto& b : bags) {
    for (auto& v : b) v = pi[v];
    std::sort(b.begin(), b.end());
  }
  GraphWithTd out;
  out.g = Graph(n, edges);
  out.td.tree = Graph(static_cast<Vertex>(bags.size()), tree);
  out.td.bags = std::move(bags);
  return out;
}

inline PrimeField::Element random_value(const PrimeField& f, Rng& rng) { return f.random_nonzero(rng); }

inline RationalField::Element random_value(const RationalField&, Rng& rng) {
  std::int64_t num = static_cast<std::int64_t>(rng.below(9)) + 1;
  if (rng.below(2)) num = -num;
  std::int64_t den = static_cast<std::int64_t>(rng.below(3)) + 1;
  mpq_class q(static_cast<long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

template <class F>
SparseMatrix<F> matrix_from_pattern(const F& f, Index rows, Index cols, const std::vector<std::pair<Index, Index>>& pat,
                                    Rng& rng) {
  std::vector<Entry<F>> es;
  for (auto [r, c] : pat) es.push_back({r, c, random_value(f, rng)});
  return SparseMatrix<F>(f, rows, cols, std::move(es));
}

template <class F>
struct MatrixWithTd {
  SparseMatrix<F> m;
  TreeDecomposition td;  // over rows 0..R-1 and columns R..R+C-1
};

// Matrix whose graph is the row-column part of a random partial k-tree.
template <class F>
MatrixWithTd<F> random_tw_matrix(const F& f, Index rows, Index cols, int k, double keep, Rng& rng) {
  auto [g, td] = random_partial_ktree(rows + cols, k, keep, rng);
  std::vector<std::pair<Index, Index>> pat;
  for (auto [u, v] : g.edges()) {
    Vertex a = std::min(u, v), b = std::max(u, v);
    if (a < rows && b >= rows) pat.emplace_back(a, b - rows);
  }
  return {matrix_from_pattern(f, rows, cols, pat, rng), std::move(td)};
}

template <class F>
struct MatrixWithPd {
  SparseMatrix<F> m;
  PathDecomposition pd;
};

// Rows and columns interleaved at random along a line; entries only between
// vertices at most w apart, bags are the sliding windows.
template <class F>
MatrixWithPd<F> random_path_matrix(const F& f, Index rows, Index cols, int w, double density, Rng& rng) {
  const Vertex L = rows + cols;
  auto seq = random_permutation(L, rng);
  std::vector<std::pair<Index, Index>> pat;
  for (Vertex i = 0; i < L; ++i)
    for (Vertex j = i + 1; j < L && j <= i + w; ++j) {
      Vertex a = std::min(seq[i], seq[j]), b = std::max(seq[i], seq[j]);
      if (a < rows && b >= rows && coin(rng, density)) pat.emplace_back(a, b - rows);
    }
  std::sort(pat.begin(), pat.end());
  PathDecomposition pd;
  if (L <= w + 1) {
    pd.bags.push_back(make_set(seq));
  } else {
    for (Vertex i = 0; i + w < L; ++i)
      pd.bags.push_back(make_set(std::vector<Vertex>(seq.begin() + i, seq.begin() + i + w + 1)));
  }
  return {matrix_from_pattern(f, rows, cols, pat, rng), std::move(pd)};
}

template <class F>
struct MatrixWithTpd {
  SparseMatrix<F> m;
  TreePartitionDecomposition tpd;
};

// Vertices split into bags of size at most b on a random tree; entries only
// inside a bag or between adjacent bags.
template <class F>
MatrixWithTpd<F> random_tpd_matrix(const F& f, Index rows, Index cols, int b, double density, Rng& rng) {
  const Vertex L = rows + cols;
  auto seq = random_permutation(L, rng);
  std::vector<VertexSet> bags;
  for (Vertex i = 0; i < L;) {
    Vertex s = 1 + static_cast<Vertex>(rng.below(b));
    s = std::min(s, L - i);
    bags.push_back(make_set(std::vector<Vertex>(seq.begin() + i, seq.begin() + i + s)));
    i += s;
  }
  if (bags.empty()) bags.push_back({});
  std::vector<Edge> tree;
  std::vector<Vertex> where(L);
  for (Vertex t = 0; t < static_cast<Vertex>(bags.size()); ++t) {
    if (t > 0) tree.emplace_back(static_cast<Vertex>(rng.below(t)), t);
    for (Vertex v : bags[t]) where[v] = t;
  }
  Graph tg(static_cast<Vertex>(bags.size()), tree);
  std::vector<std::pair<Index, Index>> pat;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      Vertex a = where[r], bb = where[rows + c];
      if ((a == bb || tg.has_edge(a, bb)) && coin(rng, density)) pat.emplace_back(r, c);
    }
  return {matrix_from_pattern(f, rows, cols, pat, rng), {std::move(tg), std::move(bags)}};
}

// Random directed graph on the underlying graph of a partial k-tree; each
// edge gets one or both orientations.
struct DiGraphWithTd {
  DiGraph g;
  TreeDecomposition td;
};

inline DiGraphWithTd random_directed_ktree(Vertex n, int k, double keep, Rng& rng) {
  auto [g, td] = random_partial_ktree(n, k, keep, rng);
  std::vector<Edge> arcs;
  for (auto [u, v] : g.edges()) {
    switch (rng.below(3)) {
      case 0: arcs.emplace_back(u, v); break;
      case 1: arcs.emplace_back(v, u); break;
      default:
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
  }
  return {DiGraph(n, arcs), std::move(td)};
}

inline Graph path_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph cycle_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

inline Graph complete_graph(Vertex n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

inline Graph grid_graph(Vertex r, Vertex c) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < r; ++i)
    for (Vertex j = 0; j < c; ++j) {
      if (i + 1 < r) e.emplace_back(i * c + j, (i + 1) * c + j);
      if (j + 1 < c) e.emplace_back(i * c + j, i * c + j + 1);
    }
  return Graph(r * c, e);
}

inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return Graph(10, e);
}

// Decomposition of a path-like graph: bags {i, i+1}.
inline TreeDecomposition path_td(Vertex n) {
  TreeDecomposition td;
  std::vector<Edge> t;
  for (Vertex i = 0; i + 1 < n; ++i) {
    td.bags.push_back({i, i + 1});
    if (i > 0) t.emplace_back(i - 1, i);
  }
  if (n == 1) td.bags.push_back({0});
  td.tree = Graph(static_cast<Vertex>(td.bags.size()), t);
  return td;
}

inline TreePartitionDecomposition tpd_of_path(const std::vector<VertexSet>& bags) {
  return {path_graph(static_cast<Vertex>(bags.size())), bags};
}

// A graph with a perfect matching and a tree-partition decomposition of
// width at most b: bags along a random tree, edges inside or between adjacent bags.
struct MatchableInstance {
  Graph g;
  TreePartitionDecomposition tpd;
};

inline MatchableInstance random_matchable(Vertex n, int b, Rng& rng) {
  auto x = random_tpd_matrix(PrimeField(101), n, 0, b, 0, rng);
  std::vector<Vertex> where(n);
  for (Vertex t = 0; t < x.tpd.num_nodes(); ++t)
    for (Vertex v : x.tpd.bags[t]) where[v] = t;
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if ((where[u] == where[v] || x.tpd.tree.has_edge(where[u], where[v])) && coin(rng, 0.5)) e.emplace_back(u, v);
  return {Graph(n, e), x.tpd};
}

}  // namespace lowtw::testing

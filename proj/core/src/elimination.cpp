#include "lowtw/elimination.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace lowtw {

namespace {

// Neighbor lists sorted by position, with edge ids.
struct OrderedAdjacency {
  std::vector<std::size_t> off;
  std::vector<Vertex> nbr;
  std::vector<std::size_t> eid;
  std::size_t edges = 0;

  std::size_t begin(Vertex v) const { return off[v]; }
  std::size_t end(Vertex v) const { return off[v + 1]; }
};

OrderedAdjacency ordered_adjacency(const StrongOrdering& so) {
  const Graph& h = so.h;
  const Vertex n = h.num_vertices();
  OrderedAdjacency a;
  a.off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex v = 0; v < n; ++v) a.off[v + 1] = a.off[v] + static_cast<std::size_t>(h.degree(v));
  a.nbr.resize(a.off[n]);
  a.eid.resize(a.off[n]);
  std::vector<std::size_t> fill(a.off.begin(), a.off.end() - 1);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : h.neighbors(u))
      if (u < v) {
        a.nbr[fill[u]] = v;
        a.eid[fill[u]++] = a.edges;
        a.nbr[fill[v]] = u;
        a.eid[fill[v]++] = a.edges;
        ++a.edges;
      }
  std::vector<std::pair<Vertex, std::size_t>> tmp;
  for (Vertex v = 0; v < n; ++v) {
    tmp.clear();
    for (std::size_t p = a.off[v]; p < a.off[v + 1]; ++p) tmp.emplace_back(a.nbr[p], a.eid[p]);
    std::sort(tmp.begin(), tmp.end(), [&](const auto& x, const auto& y) {
      return so.position[x.first] < so.position[y.first];
    });
    for (std::size_t p = a.off[v]; p < a.off[v + 1]; ++p) {
      a.nbr[p] = tmp[p - a.off[v]].first;
      a.eid[p] = tmp[p - a.off[v]].second;
    }
  }
  return a;
}

std::size_t count_from(const std::vector<std::int64_t>& sorted, std::int64_t x) {
  return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x));
}

template <class F>
BipartiteStructure checked_structure(const SparseMatrix<F>& m) {
  return bipartite_graph(m);
}

StrongOrdering finish(Index rows, Index cols, Vertex n, const std::vector<Edge>& edges,
                      const std::vector<Vertex>& order) {
  StrongOrdering so;
  so.rows = rows;
  so.cols = cols;
  so.h = Graph(n, edges);
  so.position.assign(n, 0);
  for (std::size_t i = 0; i < order.size(); ++i) so.position[order[i]] = static_cast<std::int64_t>(i);
  measure_ordering(so);
  return so;
}

}  // namespace

void measure_ordering(StrongOrdering& so) {
  const Graph& h = so.h;
  const Vertex n = h.num_vertices();
  std::vector<std::vector<std::int64_t>> pos(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : h.neighbors(v)) pos[v].push_back(so.position[w]);
    std::sort(pos[v].begin(), pos[v].end());
  }
  std::size_t deg = 0, width = 0;
  for (Vertex v = 0; v < n; ++v) {
    deg = std::max(deg, count_from(pos[v], so.position[v]));
    for (Vertex w : h.neighbors(v))
      if (v < w)
        width = std::max(width, std::min(count_from(pos[v], so.position[w]), count_from(pos[w], so.position[v])));
  }
  so.degeneracy = static_cast<int>(deg);
  so.width = static_cast<int>(width);
}

std::optional<StrongnessViolation> check_strong_ordering(const StrongOrdering& so) {
  const Graph& h = so.h;
  for (Vertex i = 0; i < h.num_vertices(); ++i) {
    auto ni = h.neighbors(i);
    for (Vertex j : ni)
      for (Vertex k : ni) {
        if (!so.before(j, k)) continue;
        for (Vertex l : h.neighbors(j))
          if (!so.before(l, i) && !h.has_edge(l, k)) return StrongnessViolation{i, j, k, l};
      }
  }
  return std::nullopt;
}

template <class F>
StrongOrdering ordering_from_path_decomp(const SparseMatrix<F>& m, const PathDecomposition& pd) {
  BipartiteStructure bs = checked_structure(m);
  const Vertex n = bs.graph.num_vertices();
  if (auto v = validate(pd, bs.graph); !v)
    throw DecompositionError("ordering_from_path_decomp: " + v.violation);
  std::vector<int> first(n, -1), last(n, -1);
  for (std::size_t i = 0; i < pd.bags.size(); ++i)
    for (Vertex v : pd.bags[i]) {
      if (first[v] < 0) first[v] = static_cast<int>(i);
      last[v] = static_cast<int>(i);
    }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pd.bags.size(); ++i)
    for (Vertex v : pd.bags[i]) {
      if (last[v] != static_cast<int>(i)) continue;
      for (Vertex u : pd.bags[i])
        if (bs.is_row(u) != bs.is_row(v)) edges.emplace_back(u, v);
    }
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return std::pair{last[a], a} < std::pair{last[b], b};
  });
  StrongOrdering so = finish(m.rows(), m.cols(), n, edges, order);
  const std::size_t b = pd.max_bag();
  if (so.h.num_edges() > 2 * b * static_cast<std::size_t>(n))
    throw std::logic_error("ordering_from_path_decomp: edge bound exceeded");
  return so;
}

template <class F>
StrongOrdering ordering_from_tpd(const SparseMatrix<F>& m, const TreePartitionDecomposition& tpd) {
  BipartiteStructure bs = checked_structure(m);
  const Vertex n = bs.graph.num_vertices();
  if (auto v = validate(tpd, bs.graph); !v) throw DecompositionError("ordering_from_tpd: " + v.violation);
  std::vector<Edge> edges;
  std::vector<Vertex> order;
  order.reserve(n);
  if (tpd.num_nodes() > 0) {
    RootedTree rt = root_tree(tpd.tree, 0);
    auto pair_up = [&](const VertexSet& a, const VertexSet& b) {
      for (Vertex u : a)
        for (Vertex v : b)
          if (bs.is_row(u) != bs.is_row(v)) edges.emplace_back(u, v);
    };
    for (Vertex t = 0; t < tpd.num_nodes(); ++t) {
      for (Vertex u : tpd.bags[t])
        for (Vertex v : tpd.bags[t])
          if (u < v && bs.is_row(u) != bs.is_row(v)) edges.emplace_back(u, v);
      if (rt.parent[t] >= 0) pair_up(tpd.bags[t], tpd.bags[rt.parent[t]]);
    }
    // Post-order: descendants first.
    std::vector<std::pair<Vertex, std::size_t>> st{{rt.root, 0}};
    while (!st.empty()) {
      auto& [t, i] = st.back();
      if (i < rt.children[t].size()) {
        Vertex c = rt.children[t][i++];
        st.emplace_back(c, 0);
        continue;
      }
      for (Vertex v : tpd.bags[t]) order.push_back(v);
      st.pop_back();
    }
  }
  return finish(m.rows(), m.cols(), n, edges, order);
}

template <class F>
EliminationResult<F> guided_elimination(const SparseMatrix<F>& m, const StrongOrdering& so,
                                        EntryAccess access) {
  using E = typename F::Element;
  const F& f = m.field();
  const Index R = m.rows(), C = m.cols();
  const Vertex n = R + C;
  if (so.rows != R || so.cols != C || so.h.num_vertices() != n ||
      static_cast<Vertex>(so.position.size()) != n)
    throw EliminationError("guided_elimination: ordering does not match matrix shape");
  for (const auto& [u, v] : so.h.edges())
    if ((u < R) == (v < R)) throw EliminationError("guided_elimination: completion is not bipartite");

  const OrderedAdjacency adj = ordered_adjacency(so);
  std::vector<E> val(adj.edges, f.zero());
  std::unordered_map<std::uint64_t, std::size_t> edge_map;
  auto key = [&](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(b);
  };
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t p = adj.begin(v); p < adj.end(v); ++p)
      if (v < adj.nbr[p]) edge_map.emplace(key(v, adj.nbr[p]), adj.eid[p]);
  for (const auto& e : m.entries()) {
    auto it = edge_map.find(key(e.row, R + e.col));
    if (it == edge_map.end())
      throw EliminationError("guided_elimination: matrix entry (" + std::to_string(e.row) + ", " +
                             std::to_string(e.col) + ") is not an edge of the completion");
    val[it->second] = e.value;
  }
  if (access == EntryAccess::PArrays) edge_map.clear();

  EliminationResult<F> res;
  res.h_edges = adj.edges;
  res.h_vertices = static_cast<std::size_t>(n);
  res.width = so.width;
  const std::size_t b = static_cast<std::size_t>(std::max(so.width, 0));
  auto p_begin = [&](Vertex v) { return std::max(adj.begin(v), adj.end(v) - std::min(b, adj.end(v) - adj.begin(v))); };

  std::vector<char> removed(n, 0);
  std::vector<E> a(n, f.zero()), mult(n, f.zero());
  std::vector<std::int64_t> stamp(n, -1);
  std::vector<std::int64_t> edge_stamp(adj.edges, -1);
  std::vector<Entry<F>> lentries;
  for (Index r = 0; r < R; ++r) lentries.push_back({r, r, f.one()});

  std::vector<Vertex> cols(C);
  for (Index c = 0; c < C; ++c) cols[c] = R + c;
  std::sort(cols.begin(), cols.end(), [&](Vertex x, Vertex y) { return so.position[x] < so.position[y]; });

  std::vector<Vertex> rset, cset;
  for (Vertex i : cols) {
    res.col_order.push_back(i - R);
    removed[i] = 1;
    Vertex j = -1;
    std::size_t jedge = 0;
    for (std::size_t p = adj.begin(i); p < adj.end(i); ++p) {
      ++res.access_steps;
      Vertex r = adj.nbr[p];
      if (!removed[r] && !f.is_zero(val[adj.eid[p]])) {
        j = r;
        jedge = adj.eid[p];
        break;
      }
    }
    if (j < 0) continue;
    removed[j] = 1;
    res.row_order.push_back(j);
    res.pivots.emplace_back(j, i - R);
    const E piv = val[jedge];
    const std::int64_t tag = i;

    rset.clear();
    for (std::size_t p = adj.begin(i); p < adj.end(i); ++p) {
      ++res.access_steps;
      Vertex k = adj.nbr[p];
      if (removed[k] || f.is_zero(val[adj.eid[p]])) continue;
      rset.push_back(k);
      stamp[k] = tag;
      a[k] = val[adj.eid[p]];
      mult[k] = f.div(a[k], piv);
      ++res.field_ops;
      lentries.push_back({k, j, mult[k]});
    }
    cset.clear();
    cset.push_back(i);
    stamp[i] = tag;
    a[i] = piv;
    for (std::size_t p = adj.begin(j); p < adj.end(j); ++p) {
      ++res.access_steps;
      Vertex l = adj.nbr[p];
      if (removed[l] || f.is_zero(val[adj.eid[p]])) continue;
      cset.push_back(l);
      stamp[l] = tag;
      a[l] = val[adj.eid[p]];
    }
    if (rset.empty()) continue;

    std::size_t updates = 0;
    auto update = [&](Vertex k, Vertex l, std::size_t e) {
      if (edge_stamp[e] == tag) return;
      edge_stamp[e] = tag;
      val[e] = f.sub(val[e], f.mul(mult[k], a[l]));
      res.field_ops += 2;
      ++updates;
    };
    if (access == EntryAccess::PArrays) {
      for (Vertex k : rset)
        for (std::size_t p = p_begin(k); p < adj.end(k); ++p) {
          ++res.access_steps;
          Vertex l = adj.nbr[p];
          if (stamp[l] == tag && l >= R) update(k, l, adj.eid[p]);
        }
      for (Vertex l : cset)
        for (std::size_t p = p_begin(l); p < adj.end(l); ++p) {
          ++res.access_steps;
          Vertex k = adj.nbr[p];
          if (stamp[k] == tag && k < R && k != j) update(k, l, adj.eid[p]);
        }
    } else {
      for (Vertex k : rset)
        for (Vertex l : cset) {
          ++res.access_steps;
          auto it = edge_map.find(key(k, l));
          if (it != edge_map.end()) update(k, l, it->second);
        }
    }
    if (updates != rset.size() * cset.size()) {
      for (Vertex k : rset)
        for (Vertex l : cset)
          if (!so.h.has_edge(k, l))
            throw EliminationError("guided_elimination: fill-in at (" + std::to_string(k) + ", " +
                                   std::to_string(l - R) + ") outside the completion");
      throw EliminationError("guided_elimination: entry not reachable through the p-arrays");
    }
  }

  std::vector<Vertex> rest;
  for (Index r = 0; r < R; ++r)
    if (!removed[r]) rest.push_back(r);
  std::sort(rest.begin(), rest.end(), [&](Vertex x, Vertex y) { return so.position[x] < so.position[y]; });
  for (Vertex r : rest) res.row_order.push_back(r);

  std::vector<Entry<F>> uentries;
  for (Index r = 0; r < R; ++r)
    for (std::size_t p = adj.begin(r); p < adj.end(r); ++p)
      if (!f.is_zero(val[adj.eid[p]])) uentries.push_back({r, adj.nbr[p] - R, val[adj.eid[p]]});
  for (Vertex r : rest)
    for (std::size_t p = adj.begin(r); p < adj.end(r); ++p)
      if (!f.is_zero(val[adj.eid[p]])) throw EliminationError("guided_elimination: leftover row is nonzero");
  res.U = SparseMatrix<F>(f, R, C, std::move(uentries));
  res.L = SparseMatrix<F>(f, R, R, std::move(lentries));
  return res;
}

template <class F>
SparseMatrix<F> PluqFactorization<F>::P() const {
  std::vector<Index> inv(row_order.size());
  for (std::size_t a = 0; a < row_order.size(); ++a) inv[row_order[a]] = static_cast<Index>(a);
  return permutation_matrix(L.field(), std::span<const Index>(inv));
}

template <class F>
SparseMatrix<F> PluqFactorization<F>::Q() const {
  return permutation_matrix(U.field(), std::span<const Index>(col_order));
}

template <class F>
SparseMatrix<F> PluqFactorization<F>::product() const {
  return multiply(multiply(P(), multiply(L, U)), Q());
}

template <class F>
PluqFactorization<F> pluq(const EliminationResult<F>& res) {
  PluqFactorization<F> out;
  out.row_order = res.row_order;
  out.col_order = res.col_order;
  const Index R = res.U.rows(), C = res.U.cols();
  std::vector<Index> rpos(R), cpos(C);
  for (Index a = 0; a < R; ++a) rpos[out.row_order[a]] = a;
  for (Index b = 0; b < C; ++b) cpos[out.col_order[b]] = b;
  std::vector<Entry<F>> le, ue;
  for (const auto& e : res.L.entries()) le.push_back({rpos[e.row], rpos[e.col], e.value});
  for (const auto& e : res.U.entries()) ue.push_back({rpos[e.row], cpos[e.col], e.value});
  out.L = SparseMatrix<F>(res.L.field(), R, R, std::move(le));
  out.U = SparseMatrix<F>(res.U.field(), R, C, std::move(ue));
  out.rank = res.pivots.size();
  for (const auto& [r, c] : res.pivots) out.lead.push_back(cpos[c]);
  return out;
}

int permutation_sign(std::span<const Index> perm) {
  std::vector<char> seen(perm.size(), 0);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

template <class F>
RankDet<F> rank_det_maxsubmatrix(const PluqFactorization<F>& fac) {
  const F& f = fac.U.field();
  RankDet<F> rd;
  rd.rank = fac.rank;
  for (std::size_t a = 0; a < fac.rank; ++a) {
    rd.rows.push_back(fac.row_order[a]);
    rd.cols.push_back(fac.col_order[fac.lead[a]]);
  }
  std::sort(rd.rows.begin(), rd.rows.end());
  std::sort(rd.cols.begin(), rd.cols.end());
  if (fac.U.rows() == fac.U.cols()) {
    if (fac.rank < static_cast<std::size_t>(fac.U.rows())) {
      rd.det = f.zero();
    } else {
      typename F::Element d = f.one();
      for (std::size_t a = 0; a < fac.rank; ++a) d = f.mul(d, fac.U.at(static_cast<Index>(a), fac.lead[a]));
      if (permutation_sign(fac.row_order) * permutation_sign(fac.col_order) < 0) d = f.neg(d);
      rd.det = d;
    }
  }
  return rd;
}

template <class F>
Solution<F> solve(const PluqFactorization<F>& fac, std::span<const typename F::Element> r) {
  using E = typename F::Element;
  const F& f = fac.U.field();
  const Index R = fac.U.rows(), C = fac.U.cols();
  if (static_cast<Index>(r.size()) != R) throw MatrixError("solve: right-hand side has wrong length");
  std::vector<E> w(R, f.zero());
  for (Index a = 0; a < R; ++a) w[a] = r[fac.row_order[a]];
  for (Index a = 0; a < R; ++a)
    for (const auto& e : fac.L.row(a))
      if (e.col < a) w[a] = f.sub(w[a], f.mul(e.value, w[e.col]));
  Solution<F> sol;
  for (Index a = static_cast<Index>(fac.rank); a < R; ++a)
    if (!f.is_zero(w[a])) return sol;
  std::vector<E> z(C, f.zero());
  for (Index a = static_cast<Index>(fac.rank) - 1; a >= 0; --a) {
    E acc = w[a];
    E piv = f.zero();
    for (const auto& e : fac.U.row(a)) {
      if (e.col == fac.lead[a])
        piv = e.value;
      else
        acc = f.sub(acc, f.mul(e.value, z[e.col]));
    }
    z[fac.lead[a]] = f.div(acc, piv);
  }
  sol.consistent = true;
  sol.x.assign(C, f.zero());
  for (Index b = 0; b < C; ++b) sol.x[fac.col_order[b]] = z[b];
  return sol;
}

template <class F>
bool is_row_echelon(const SparseMatrix<F>& m) {
  Index prev = -1;
  bool zero_seen = false;
  for (Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    if (row.empty()) {
      zero_seen = true;
      continue;
    }
    if (zero_seen || row.front().col <= prev) return false;
    prev = row.front().col;
  }
  return true;
}

template <class F>
bool is_column_echelon(const SparseMatrix<F>& m) {
  return is_row_echelon(m.transpose());
}

template <class F>
bool is_permutation_matrix(const SparseMatrix<F>& m) {
  if (m.rows() != m.cols() || m.nnz() != static_cast<std::size_t>(m.rows())) return false;
  std::vector<char> seen(m.cols(), 0);
  for (Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    if (row.size() != 1 || !m.field().equal(row.front().value, m.field().one()) || seen[row.front().col])
      return false;
    seen[row.front().col] = 1;
  }
  return true;
}

#define LOWTW_INSTANTIATE(F)                                                                         \
  template StrongOrdering ordering_from_path_decomp<F>(const SparseMatrix<F>&, const PathDecomposition&); \
  template StrongOrdering ordering_from_tpd<F>(const SparseMatrix<F>&, const TreePartitionDecomposition&); \
  template EliminationResult<F> guided_elimination<F>(const SparseMatrix<F>&, const StrongOrdering&, \
                                                      EntryAccess);                                  \
  template struct PluqFactorization<F>;                                                              \
  template PluqFactorization<F> pluq<F>(const EliminationResult<F>&);                                \
  template RankDet<F> rank_det_maxsubmatrix<F>(const PluqFactorization<F>&);                         \
  template Solution<F> solve<F>(const PluqFactorization<F>&, std::span<const F::Element>);           \
  template bool is_row_echelon<F>(const SparseMatrix<F>&);                                           \
  template bool is_column_echelon<F>(const SparseMatrix<F>&);                                        \
  template bool is_permutation_matrix<F>(const SparseMatrix<F>&);

LOWTW_INSTANTIATE(PrimeField)
LOWTW_INSTANTIATE(RationalField)

#undef LOWTW_INSTANTIATE

}  // namespace lowtw

#include "lowtw/splitting.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lowtw {

std::size_t TreeSplit::norm() const {
  std::size_t n = 0;
  for (const auto& t : trees) n += static_cast<std::size_t>(t.size()) - 1;
  return n;
}

Validation validate(const TreeSplit& ts) {
  if (ts.rows < 0 || ts.cols < 0) return Validation::fail("negative dimensions");
  if (static_cast<Index>(ts.trees.size()) != ts.rows + ts.cols) return Validation::fail("wrong number of trees");
  for (std::size_t v = 0; v < ts.trees.size(); ++v) {
    const auto& t = ts.trees[v];
    if (t.size() == 0) return Validation::fail("empty tree at vertex " + std::to_string(v));
    if (t.parent.size() != t.label.size()) return Validation::fail("parent array size mismatch");
    if (t.parent[0] != -1) return Validation::fail("node 0 is not the root");
    // In pre-order the parent of node i is node i-1 or one of its ancestors.
    for (int i = 1; i < t.size(); ++i) {
      if (t.parent[i] < 0 || t.parent[i] >= i) return Validation::fail("tree not stored in pre-order");
      int a = i - 1;
      while (a != -1 && a != t.parent[i]) a = t.parent[a];
      if (a == -1) return Validation::fail("tree not stored in pre-order");
    }
  }
  for (const auto& [a, b] : ts.entry_nodes)
    if (a < 0 || b < 0) return Validation::fail("negative entry node");
  return {};
}

TreeSplit trivial_split(Index rows, Index cols, std::size_t nnz) {
  TreeSplit ts;
  ts.rows = rows;
  ts.cols = cols;
  ts.trees.assign(static_cast<std::size_t>(rows + cols), SplitTree{{0}, {-1}});
  ts.entry_nodes.assign(nnz, {0, 0});
  return ts;
}

template <class F>
TreeSplit tree_split_from_td(const SparseMatrix<F>& m, const TreeDecomposition& td) {
  BipartiteStructure bs = bipartite_graph(m);
  const Graph& g = bs.graph;
  if (auto v = validate(td, g); !v) throw DecompositionError("tree_split_from_td: " + v.violation);
  RootedTree rt = root_decomposition(td);
  TreeSplit ts;
  ts.rows = m.rows();
  ts.cols = m.cols();
  ts.trees.resize(g.num_vertices());
  // slot[x][i]: node of bag[x][i] inside that vertex's tree.
  std::vector<std::vector<int>> slot(td.num_nodes());
  auto find = [&](Vertex x, Vertex v) -> int {
    auto it = std::lower_bound(td.bags[x].begin(), td.bags[x].end(), v);
    return it != td.bags[x].end() && *it == v ? slot[x][it - td.bags[x].begin()] : -1;
  };
  for (Vertex x : rt.preorder) {
    const auto& bag = td.bags[x];
    slot[x].assign(bag.size(), -1);
    const Vertex p = rt.parent[x];
    for (std::size_t i = 0; i < bag.size(); ++i) {
      auto& t = ts.trees[bag[i]];
      const int par = p >= 0 ? find(p, bag[i]) : -1;
      slot[x][i] = t.size();
      t.label.push_back(x);
      t.parent.push_back(par);
    }
  }
  auto top = topmost_edge_nodes(td, rt, g);
  auto edges = g.edges();
  ts.entry_nodes.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    ts.entry_nodes[e] = {find(top[e], edges[e].first), find(top[e], edges[e].second)};
  return ts;
}

namespace {

template <class F>
SplitMatrix<F> build_split(const SparseMatrix<F>& m, const TreeSplit& ts) {
  if (auto v = validate(ts); !v) throw SplitError("split_matrix: " + v.violation);
  if (ts.rows != m.rows() || ts.cols != m.cols() || ts.entry_nodes.size() != m.nnz())
    throw SplitError("split_matrix: split does not match matrix");
  const F& f = m.field();
  const Index R = m.rows(), C = m.cols();
  Index nr = 0, nc = 0;
  for (Index v = 0; v < R + C; ++v) (v < R ? nr : nc) += ts.trees[v].size() - 1;
  const Index N = nr + nc;
  SplitMatrix<F> out;
  out.N = static_cast<std::size_t>(N);
  out.node_rows = R + nr;
  out.node_cols = C + nc;
  out.row_origin.assign(static_cast<std::size_t>(R + N), -1);
  out.col_origin.assign(static_cast<std::size_t>(C + N), -1);
  out.node_index.resize(R + C);
  out.chain_index.resize(R + C);

  // Roots first, then non-root copies per vertex, then chains of the other side.
  Index next_row = R, next_col = C;
  for (Index v = 0; v < R + C; ++v) {
    const bool row = v < R;
    const Index orig = row ? v : v - R;
    Index& next = row ? next_row : next_col;
    auto& origin = row ? out.row_origin : out.col_origin;
    out.node_index[v].assign(ts.trees[v].size(), orig);
    origin[orig] = orig;
    for (int i = 1; i < ts.trees[v].size(); ++i) {
      out.node_index[v][i] = next;
      origin[next++] = orig;
    }
  }
  for (Index v = R; v < R + C; ++v) {
    out.chain_index[v].assign(ts.trees[v].size(), -1);
    for (int i = 1; i < ts.trees[v].size(); ++i) {
      out.chain_index[v][i] = next_row;
      out.row_origin[next_row++] = v - R;
    }
  }
  for (Index v = 0; v < R; ++v) {
    out.chain_index[v].assign(ts.trees[v].size(), -1);
    for (int i = 1; i < ts.trees[v].size(); ++i) {
      out.chain_index[v][i] = next_col;
      out.col_origin[next_col++] = v;
    }
  }

  std::vector<Entry<F>> es;
  es.reserve(m.nnz() + 4 * static_cast<std::size_t>(N));
  const auto& me = m.entries();
  for (std::size_t e = 0; e < me.size(); ++e) {
    auto [a, b] = ts.entry_nodes[e];
    if (a >= ts.trees[me[e].row].size() || b >= ts.trees[R + me[e].col].size())
      throw SplitError("split_matrix: entry node out of range");
    es.push_back({out.node_index[me[e].row][a], out.node_index[R + me[e].col][b], me[e].value});
  }
  // Eliminating the chains leaves det[M_E]_{I_E,J_E} = det[M]_{I,J} times the
  // product of gadget signs times (-1)^(nr*nc) from the block order. The last
  // gadget absorbs the difference to (-1)^(N(R+C)).
  bool odd = (nr * nc) % 2 == 1;
  for (Index v = 0; v < R + C; ++v)
    for (int i = 1; i < ts.trees[v].size(); ++i) odd ^= out.node_index[v][i] % 2 == 1;
  const bool fix = odd != ((N % 2 == 1) && ((R + C) % 2 == 1));
  Index last = -1;
  for (Index v = 0; v < R + C; ++v)
    if (ts.trees[v].size() > 1) last = v;
  auto sign = [&](Index preceding) { return preceding % 2 == 0 ? f.one() : f.neg(f.one()); };
  for (Index v = 0; v < R + C; ++v) {
    const auto& t = ts.trees[v];
    for (int i = 1; i < t.size(); ++i) {
      const Index child = out.node_index[v][i], par = out.node_index[v][t.parent[i]], ch = out.chain_index[v][i];
      auto s = sign(child);
      if (fix && v == last && i == ts.trees[v].size() - 1) s = f.neg(s);
      if (v < R) {
        es.push_back({child, ch, s});
        es.push_back({par, ch, f.neg(s)});
      } else {
        es.push_back({ch, child, s});
        es.push_back({ch, par, f.neg(s)});
      }
    }
  }
  try {
    out.matrix = SparseMatrix<F>(f, R + N, C + N, std::move(es));
  } catch (const MatrixError& e) {
    throw SplitError(std::string("split_matrix: inconsistent split: ") + e.what());
  }
  return out;
}

template <class F>
std::vector<typename F::Element> solve_factor(const SparseMatrix<F>& a, FactorKind kind,
                                              std::vector<typename F::Element> r, bool& ok) {
  using E = typename F::Element;
  const F& f = a.field();
  std::vector<E> x(a.cols(), f.zero());
  switch (kind) {
    case FactorKind::Permutation:
      for (const auto& e : a.entries()) x[e.col] = r[e.row];
      return x;
    case FactorKind::RowEchelon:
      for (Index i = a.rows() - 1; i >= 0; --i) {
        auto row = a.row(i);
        if (row.empty()) {
          if (!f.is_zero(r[i])) ok = false;
          continue;
        }
        E acc = r[i];
        for (std::size_t k = 1; k < row.size(); ++k) acc = f.sub(acc, f.mul(row[k].value, x[row[k].col]));
        x[row.front().col] = f.div(acc, row.front().value);
      }
      return x;
    case FactorKind::ColumnEchelon: {
      for (Index c = 0; c < a.cols(); ++c) {
        auto col = a.col(c);
        if (col.empty()) continue;
        const Index lead = a.entries()[col.front()].row;
        E acc = r[lead];
        E piv = f.zero();
        for (const auto& e : a.row(lead)) {
          if (e.col == c)
            piv = e.value;
          else
            acc = f.sub(acc, f.mul(e.value, x[e.col]));
        }
        x[c] = f.div(acc, piv);
      }
      return x;
    }
  }
  return x;
}

}  // namespace

template <class F>
SplitMatrix<F> split_matrix(const SparseMatrix<F>& m, const TreeSplit& ts) {
  return build_split(m, ts);
}

template <class F>
SplitMatrix<F> split_matrix(const SparseMatrix<F>& m, const TreeSplit& ts, const TreeDecomposition& td) {
  SplitMatrix<F> out = build_split(m, ts);
  const Index R = m.rows(), C = m.cols();
  const Vertex nodes = td.num_nodes();
  Subdivision sd = one_subdivision(td.tree);
  auto edge_vertex = [&](Vertex a, Vertex b) {
    Edge e{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(sd.edge_of.begin(), sd.edge_of.end(), e);
    if (it == sd.edge_of.end() || *it != e) throw SplitError("split_matrix: tree edge not in decomposition");
    return nodes + static_cast<Vertex>(it - sd.edge_of.begin());
  };
  TreePartitionDecomposition tpd;
  tpd.tree = sd.graph;
  tpd.bags.assign(sd.graph.num_vertices(), {});
  const Vertex split_rows = R + static_cast<Vertex>(out.N);
  for (Index v = 0; v < R + C; ++v) {
    const auto& t = ts.trees[v];
    const bool row = v < R;
    for (int i = 0; i < t.size(); ++i) {
      if (t.label[i] < 0 || t.label[i] >= nodes) throw SplitError("split_matrix: label is not a decomposition node");
      tpd.bags[t.label[i]].push_back(row ? out.node_index[v][i] : split_rows + out.node_index[v][i]);
      if (i == 0) continue;
      const Vertex w = edge_vertex(t.label[i], t.label[t.parent[i]]);
      tpd.bags[w].push_back(row ? split_rows + out.chain_index[v][i] : out.chain_index[v][i]);
    }
  }
  for (auto& b : tpd.bags) std::sort(b.begin(), b.end());
  out.tpd = std::move(tpd);
  return out;
}

std::pair<std::vector<Index>, std::vector<Index>> lift_index_sets(std::span<const Index> I,
                                                                  std::span<const Index> J,
                                                                  const TreeSplit& ts) {
  const Index N = static_cast<Index>(ts.norm());
  std::pair<std::vector<Index>, std::vector<Index>> out;
  for (Index i : I) {
    if (i < 0 || i >= ts.rows) throw SplitError("lift_index_sets: row out of range");
    out.first.push_back(i);
  }
  for (Index j : J) {
    if (j < 0 || j >= ts.cols) throw SplitError("lift_index_sets: column out of range");
    out.second.push_back(j);
  }
  for (Index k = 0; k < N; ++k) {
    out.first.push_back(ts.rows + k);
    out.second.push_back(ts.cols + k);
  }
  return out;
}

template <class F>
SparseMatrix<F> GeneralizedLU<F>::product() const {
  if (factors.empty()) throw MatrixError("GeneralizedLU: no factors");
  SparseMatrix<F> p = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) p = multiply(p, factors[i]);
  return p;
}

template <class F>
bool GeneralizedLU<F>::well_formed() const {
  if (factors.size() != kinds.size()) return false;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    bool ok = false;
    switch (kinds[i]) {
      case FactorKind::Permutation: ok = is_permutation_matrix(factors[i]); break;
      case FactorKind::RowEchelon: ok = is_row_echelon(factors[i]); break;
      case FactorKind::ColumnEchelon: ok = is_column_echelon(factors[i]); break;
    }
    if (!ok) return false;
    if (i > 0 && factors[i - 1].cols() != factors[i].rows()) return false;
  }
  return true;
}

template <class F>
Solution<F> GeneralizedLU<F>::solve(std::span<const typename F::Element> r) const {
  if (factors.empty() || static_cast<Index>(r.size()) != factors.front().rows())
    throw MatrixError("GeneralizedLU::solve: right-hand side has wrong length");
  std::vector<typename F::Element> y(r.begin(), r.end());
  bool ok = true;
  for (std::size_t i = 0; i < factors.size() && ok; ++i) y = solve_factor(factors[i], kinds[i], std::move(y), ok);
  if (ok) {
    // Column-echelon steps only read their lead rows, so check the residual.
    std::vector<typename F::Element> back = y;
    for (std::size_t i = factors.size(); i-- > 0;) back = factors[i].apply(back);
    const F& f = factors.front().field();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!f.equal(back[i], r[i])) ok = false;
  }
  Solution<F> s;
  s.consistent = ok;
  if (ok) s.x = std::move(y);
  return s;
}

template <class F>
TwResult<F> tw_rank_det_solve(const SparseMatrix<F>& m, const TreeDecomposition& td,
                              std::optional<std::span<const typename F::Element>> r, EntryAccess access) {
  const F& f = m.field();
  const Index R = m.rows(), C = m.cols();
  TwResult<F> out;
  if (r && static_cast<Index>(r->size()) != R) throw MatrixError("tw_rank_det_solve: right-hand side has wrong length");
  if (R == 0 || C == 0) {
    if (R == C) out.det = f.one();
    out.lu.factors.push_back(SparseMatrix<F>(f, R, C));
    out.lu.kinds.push_back(FactorKind::RowEchelon);
    if (r) out.solution = out.lu.solve(*r);
    return out;
  }
  BipartiteStructure bs = bipartite_graph(m);
  TreeDecomposition nice = nice_form(td, bs.graph);
  TreeSplit ts = tree_split_from_td(m, nice);
  SplitMatrix<F> sm = split_matrix(m, ts, nice);
  StrongOrdering so = ordering_from_tpd(sm.matrix, *sm.tpd);
  EliminationResult<F> el = guided_elimination(sm.matrix, so, access);
  PluqFactorization<F> fac = pluq(el);
  RankDet<F> rd = rank_det_maxsubmatrix(fac);

  const std::size_t N = sm.N;
  out.rank = rd.rank - N;
  if (R == C) {
    auto d = *rd.det;
    if ((N % 2 == 1) && ((static_cast<std::size_t>(R) + static_cast<std::size_t>(C)) % 2 == 1)) d = f.neg(d);
    out.det = d;
  }

  out.stats.split_norm = N;
  out.stats.split_rows = sm.matrix.rows();
  out.stats.split_cols = sm.matrix.cols();
  out.stats.split_nnz = sm.matrix.nnz();
  for (Index i = 0; i < sm.matrix.rows(); ++i) out.stats.max_row_nnz = std::max(out.stats.max_row_nnz, sm.matrix.row(i).size());
  for (Index j = 0; j < sm.matrix.cols(); ++j) out.stats.max_row_nnz = std::max(out.stats.max_row_nnz, sm.matrix.col(j).size());
  out.stats.tpd_width = sm.tpd->width();
  out.stats.ordering_width = so.width;
  out.stats.field_ops = el.field_ops;
  out.stats.h_edges = el.h_edges;

  // M = U_E * P * L * U * Q * L_E, with U_E and L_E summing the copies of each row and column.
  const Index SR = sm.matrix.rows(), SC = sm.matrix.cols();
  std::vector<Index> first(R, -1);
  std::vector<Entry<F>> ue;
  for (Index a = 0; a < SR; ++a) {
    const Index x = fac.row_order[a];
    if (x >= sm.node_rows) continue;
    const Index o = sm.row_origin[x];
    if (first[o] < 0) first[o] = a;
    ue.push_back({o, a, f.one()});
  }
  std::vector<Index> rord(R);
  std::iota(rord.begin(), rord.end(), 0);
  std::sort(rord.begin(), rord.end(), [&](Index a, Index b) { return first[a] < first[b]; });
  std::vector<Index> rpos(R), pt(R);
  for (Index i = 0; i < R; ++i) rpos[rord[i]] = i;
  for (auto& e : ue) e.row = rpos[e.row];
  for (Index i = 0; i < R; ++i) pt[rord[i]] = i;

  std::vector<Index> cfirst(C, -1);
  std::vector<Entry<F>> le;
  for (Index b = 0; b < SC; ++b) {
    const Index x = fac.col_order[b];
    if (x >= sm.node_cols) continue;
    const Index o = sm.col_origin[x];
    if (cfirst[o] < 0) cfirst[o] = b;
    le.push_back({b, o, f.one()});
  }
  std::vector<Index> cord(C);
  std::iota(cord.begin(), cord.end(), 0);
  std::sort(cord.begin(), cord.end(), [&](Index a, Index b) { return cfirst[a] < cfirst[b]; });
  std::vector<Index> cpos(C);
  for (Index j = 0; j < C; ++j) cpos[cord[j]] = j;
  for (auto& e : le) e.col = cpos[e.col];

  out.lu.factors = {permutation_matrix(f, std::span<const Index>(pt)),
                    SparseMatrix<F>(f, R, SR, std::move(ue)),
                    fac.L,
                    fac.U,
                    SparseMatrix<F>(f, SC, C, std::move(le)),
                    permutation_matrix(f, std::span<const Index>(cord))};
  out.lu.kinds = {FactorKind::Permutation, FactorKind::RowEchelon, FactorKind::ColumnEchelon,
                  FactorKind::RowEchelon, FactorKind::ColumnEchelon, FactorKind::Permutation};
  if (r) out.solution = out.lu.solve(*r);
  return out;
}

#define LOWTW_INSTANTIATE(F)                                                                          \
  template TreeSplit tree_split_from_td<F>(const SparseMatrix<F>&, const TreeDecomposition&);         \
  template SplitMatrix<F> split_matrix<F>(const SparseMatrix<F>&, const TreeSplit&);                  \
  template SplitMatrix<F> split_matrix<F>(const SparseMatrix<F>&, const TreeSplit&,                   \
                                          const TreeDecomposition&);                                  \
  template struct GeneralizedLU<F>;                                                                   \
  template TwResult<F> tw_rank_det_solve<F>(const SparseMatrix<F>&, const TreeDecomposition&,         \
                                            std::optional<std::span<const F::Element>>, EntryAccess);

LOWTW_INSTANTIATE(PrimeField)
LOWTW_INSTANTIATE(RationalField)

#undef LOWTW_INSTANTIATE

}  // namespace lowtw

#include "lowtw/oracles.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace lowtw::oracle {

template <class F>
DenseRankDet<F> dense_rank_det(const F& f, DenseMatrix<F> a, std::size_t cols) {
  const std::size_t rows = a.size();
  DenseRankDet<F> out;
  auto det = f.one();
  std::size_t r = 0;
  std::vector<std::size_t> colperm(cols);
  for (std::size_t c = 0; c < cols; ++c) colperm[c] = c;
  for (; r < rows && r < cols; ++r) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = r; i < rows && pr == rows; ++i)
      for (std::size_t j = r; j < cols; ++j)
        if (!f.is_zero(a[i][j])) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == rows) break;
    if (pr != r) {
      std::swap(a[pr], a[r]);
      det = f.neg(det);
    }
    if (pc != r) {
      for (auto& row : a) std::swap(row[pc], row[r]);
      det = f.neg(det);
    }
    det = f.mul(det, a[r][r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (f.is_zero(a[i][r])) continue;
      auto m = f.div(a[i][r], a[r][r]);
      for (std::size_t j = r; j < cols; ++j) a[i][j] = f.sub(a[i][j], f.mul(m, a[r][j]));
    }
  }
  out.rank = r;
  if (rows == cols) out.det = r == rows ? det : f.zero();
  return out;
}

template <class F>
typename F::Element cofactor_det(const F& f, const DenseMatrix<F>& a) {
  const std::size_t n = a.size();
  if (n > 8) throw OracleError("cofactor_det: matrix larger than 8x8");
  if (n == 0) return f.one();
  if (n == 1) return a[0][0];
  auto total = f.zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (f.is_zero(a[0][j])) continue;
    DenseMatrix<F> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<typename F::Element> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(std::move(row));
    }
    auto term = f.mul(a[0][j], cofactor_det(f, minor));
    total = j % 2 == 0 ? f.add(total, term) : f.sub(total, term);
  }
  return total;
}

template <class F>
std::optional<std::vector<typename F::Element>> dense_solve(const F& f, DenseMatrix<F> a, std::size_t cols,
                                                            std::vector<typename F::Element> r) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && f.is_zero(a[p][c])) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    std::swap(r[p], r[row]);
    auto inv = f.inv(a[row][c]);
    for (std::size_t j = 0; j < cols; ++j) a[row][j] = f.mul(a[row][j], inv);
    r[row] = f.mul(r[row], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || f.is_zero(a[i][c])) continue;
      auto m = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = f.sub(a[i][j], f.mul(m, a[row][j]));
      r[i] = f.sub(r[i], f.mul(m, r[row]));
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t i = row; i < rows; ++i)
    if (!f.is_zero(r[i])) return std::nullopt;
  std::vector<typename F::Element> x(cols, f.zero());
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = r[i];
  return x;
}

template <class F>
DenseMatrix<F> dense_multiply(const F& f, const DenseMatrix<F>& a, const DenseMatrix<F>& b, std::size_t inner,
                              std::size_t cols) {
  DenseMatrix<F> c(a.size(), std::vector<typename F::Element>(cols, f.zero()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (f.is_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][k], b[k][j]));
    }
  return c;
}

template DenseRankDet<PrimeField> dense_rank_det(const PrimeField&, DenseMatrix<PrimeField>, std::size_t);
template DenseRankDet<RationalField> dense_rank_det(const RationalField&, DenseMatrix<RationalField>, std::size_t);
template PrimeField::Element cofactor_det(const PrimeField&, const DenseMatrix<PrimeField>&);
template RationalField::Element cofactor_det(const RationalField&, const DenseMatrix<RationalField>&);
template std::optional<std::vector<PrimeField::Element>> dense_solve(const PrimeField&, DenseMatrix<PrimeField>,
                                                                     std::size_t, std::vector<PrimeField::Element>);
template std::optional<std::vector<RationalField::Element>> dense_solve(const RationalField&,
                                                                        DenseMatrix<RationalField>, std::size_t,
                                                                        std::vector<RationalField::Element>);
template DenseMatrix<PrimeField> dense_multiply(const PrimeField&, const DenseMatrix<PrimeField>&,
                                                const DenseMatrix<PrimeField>&, std::size_t, std::size_t);
template DenseMatrix<RationalField> dense_multiply(const RationalField&, const DenseMatrix<RationalField>&,
                                                   const DenseMatrix<RationalField>&, std::size_t, std::size_t);

std::vector<Edge> max_matching(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> match(n, -1), p(n), base(n);
  std::vector<char> used, blossom;
  std::queue<int> q;

  auto lca = [&](int a, int b) {
    std::vector<char> seen(n, 0);
    for (;;) {
      a = base[a];
      seen[a] = 1;
      if (match[a] == -1) break;
      a = p[match[a]];
    }
    for (;;) {
      b = base[b];
      if (seen[b]) return b;
      b = p[match[b]];
    }
  };
  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = blossom[base[match[v]]] = 1;
      p[v] = child;
      child = match[v];
      v = p[match[v]];
    }
  };
  auto find_path = [&](int root) {
    used.assign(n, 0);
    std::fill(p.begin(), p.end(), -1);
    for (int i = 0; i < n; ++i) base[i] = i;
    used[root] = 1;
    q = {};
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : g.neighbors(v)) {
        if (base[v] == base[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && p[match[to]] != -1)) {
          int cur = lca(v, to);
          blossom.assign(n, 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n; ++i)
            if (blossom[base[i]]) {
              base[i] = cur;
              if (!used[i]) {
                used[i] = 1;
                q.push(i);
              }
            }
        } else if (p[to] == -1) {
          p[to] = v;
          if (match[to] == -1) return to;
          used[match[to]] = 1;
          q.push(match[to]);
        }
      }
    }
    return -1;
  };

  for (int v = 0; v < n; ++v) {
    if (match[v] != -1) continue;
    int u = find_path(v);
    while (u != -1) {
      int pv = p[u], ppv = match[pv];
      match[u] = pv;
      match[pv] = u;
      u = ppv;
    }
  }
  std::vector<Edge> out;
  for (int v = 0; v < n; ++v)
    if (match[v] > v) out.emplace_back(v, match[v]);
  return out;
}

namespace {

std::vector<std::uint32_t> adjacency_masks(const Graph& g, int limit, const char* who) {
  if (g.num_vertices() > limit) throw OracleError(std::string(who) + ": graph too large");
  std::vector<std::uint32_t> adj(g.num_vertices(), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  return adj;
}

// pm[mask]: the induced subgraph on mask has a perfect matching.
std::vector<char> perfect_table(const std::vector<std::uint32_t>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<char> pm(std::size_t{1} << n, 0);
  pm[0] = 1;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) % 2) continue;
    int low = __builtin_ctz(mask);
    std::uint32_t rest = mask & ~(1u << low);
    for (std::uint32_t c = adj[low] & rest; c; c &= c - 1) {
      int v = __builtin_ctz(c);
      if (pm[rest & ~(1u << v)]) {
        pm[mask] = 1;
        break;
      }
    }
  }
  return pm;
}

}  // namespace

std::size_t max_matching_size_exhaustive(const Graph& g) {
  auto adj = adjacency_masks(g, 20, "max_matching_size_exhaustive");
  const int n = g.num_vertices();
  // best[mask]: maximum matching using only vertices of mask.
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int low = __builtin_ctz(mask);
    std::uint32_t rest = mask & ~(1u << low);
    std::uint8_t b = best[rest];
    for (std::uint32_t c = adj[low] & rest; c; c &= c - 1) {
      int v = __builtin_ctz(c);
      b = std::max<std::uint8_t>(b, best[rest & ~(1u << v)] + 1);
    }
    best[mask] = b;
  }
  return best[(1u << n) - 1];
}

std::set<Edge> allowed_edges(const Graph& g) {
  auto adj = adjacency_masks(g, 20, "allowed_edges");
  auto pm = perfect_table(adj);
  const std::uint32_t full = (1u << g.num_vertices()) - 1;
  std::set<Edge> out;
  for (auto [u, v] : g.edges())
    if (pm[full & ~(1u << u) & ~(1u << v)]) out.insert({u, v});
  return out;
}

bool has_perfect_matching(const Graph& g) {
  auto adj = adjacency_masks(g, 20, "has_perfect_matching");
  return perfect_table(adj)[(1u << g.num_vertices()) - 1] != 0;
}

FlowResult max_vertex_flow(const DiGraph& g, Vertex s, Vertex t) {
  const int n = g.num_vertices();
  if (s == t) throw OracleError("max_vertex_flow: s equals t");
  if (g.has_arc(s, t)) throw OracleError("max_vertex_flow: arc from s to t");
  const int inf = n + 1;
  struct Arc {
    int to, cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(2 * n);
  auto add = [&](int a, int b, int c) {
    out[a].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({b, c});
    out[b].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({a, 0});
  };
  for (int v = 0; v < n; ++v) add(2 * v, 2 * v + 1, (v == s || v == t) ? inf : 1);
  for (auto [u, v] : g.arcs()) add(2 * u + 1, 2 * v, inf);
  const int src = 2 * s, dst = 2 * t;
  FlowResult res;
  std::vector<int> via(2 * n);
  for (;;) {
    std::fill(via.begin(), via.end(), -1);
    std::queue<int> q;
    q.push(src);
    via[src] = -2;
    while (!q.empty() && via[dst] == -1) {
      int x = q.front();
      q.pop();
      for (int id : out[x])
        if (arcs[id].cap > 0 && via[arcs[id].to] == -1) {
          via[arcs[id].to] = id;
          q.push(arcs[id].to);
        }
    }
    if (via[dst] == -1) break;
    for (int x = dst; x != src; x = arcs[via[x] ^ 1].to) {
      arcs[via[x]].cap -= 1;
      arcs[via[x] ^ 1].cap += 1;
    }
    ++res.value;
  }
  for (int v = 0; v < n; ++v)
    if (v != s && v != t && via[2 * v] != -1 && via[2 * v + 1] == -1) res.cut.push_back(v);
  return res;
}

bool reachable(const DiGraph& g, Vertex s, Vertex t, const std::vector<Vertex>& removed) {
  std::vector<char> seen(g.num_vertices(), 0);
  for (Vertex v : removed) seen[v] = 1;
  if (seen[s]) return false;
  std::queue<Vertex> q;
  q.push(s);
  seen[s] = 1;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    if (x == t) return true;
    for (Vertex y : g.out_neighbors(x))
      if (!seen[y]) {
        seen[y] = 1;
        q.push(y);
      }
  }
  return false;
}

int exact_treewidth(const Graph& g) {
  auto adj = adjacency_masks(g, 16, "exact_treewidth");
  const int n = g.num_vertices();
  if (n == 0) return -1;
  // q(S, v): vertices outside S and v reachable from v through S.
  auto q = [&](std::uint32_t S, int v) {
    std::uint32_t seen = 1u << v, frontier = 1u << v, outside = 0;
    while (frontier) {
      int x = __builtin_ctz(frontier);
      frontier &= frontier - 1;
      std::uint32_t nb = adj[x] & ~seen;
      seen |= nb;
      outside |= nb & ~S;
      frontier |= nb & S;
    }
    return __builtin_popcount(outside);
  };
  std::vector<int> tw(std::size_t{1} << n, std::numeric_limits<int>::max());
  tw[0] = std::numeric_limits<int>::min();
  for (std::uint32_t S = 1; S < (1u << n); ++S)
    for (std::uint32_t c = S; c; c &= c - 1) {
      int v = __builtin_ctz(c);
      std::uint32_t rest = S & ~(1u << v);
      tw[S] = std::min(tw[S], std::max(tw[rest], q(rest, v)));
    }
  return tw[(1u << n) - 1];
}

std::optional<Quadruple> brute_strongness(const Graph& h, const std::vector<std::int64_t>& position) {
  const int n = h.num_vertices();
  if (n > 60) throw OracleError("brute_strongness: graph too large");
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : h.edges()) adj[u][v] = adj[v][u] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!adj[i][j] || !adj[i][k] || position[j] >= position[k]) continue;
        for (int l = 0; l < n; ++l)
          if (adj[j][l] && position[i] <= position[l] && !adj[l][k]) return Quadruple{i, j, k, l};
      }
  return std::nullopt;
}

}  // namespace lowtw::oracle

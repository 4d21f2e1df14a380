#include <doctest.h>

#include "lowtw/elimination.hpp"
#include "lowtw/oracles.hpp"
#include "support.hpp"

using namespace lowtw;
using namespace lowtw::testing;

namespace {

template <class F>
SparseMatrix<F> dense_to_sparse(const F& f, const std::vector<std::vector<std::int64_t>>& a) {
  std::vector<Entry<F>> es;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != 0) es.push_back({static_cast<Index>(i), static_cast<Index>(j), f.from_int(a[i][j])});
  return SparseMatrix<F>(f, static_cast<Index>(a.size()), a.empty() ? 0 : static_cast<Index>(a[0].size()), es);
}

PathDecomposition single_bag(Vertex n) {
  PathDecomposition pd;
  VertexSet b;
  for (Vertex v = 0; v < n; ++v) b.push_back(v);
  pd.bags.push_back(b);
  return pd;
}

// Tridiagonal n x n with interval bags {r_i, c_i, r_{i+1}, c_{i+1}}.
template <class F>
MatrixWithPd<F> tridiagonal(const F& f, Index n, Rng& rng) {
  std::vector<std::pair<Index, Index>> pat;
  for (Index i = 0; i < n; ++i)
    for (Index j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) pat.emplace_back(i, j);
  PathDecomposition pd;
  for (Index i = 0; i + 1 < n; ++i) pd.bags.push_back(make_set({i, i + 1, n + i, n + i + 1}));
  return {matrix_from_pattern(f, n, n, pat, rng), pd};
}

template <class F>
void check_against_oracle(const SparseMatrix<F>& m, const StrongOrdering& so) {
  const F& f = m.field();
  auto el = guided_elimination(m, so);
  auto fac = pluq(el);
  CHECK(fac.product() == m);
  CHECK(is_row_echelon(fac.U));
  CHECK(el.L.nnz() <= el.h_edges + el.h_vertices);
  for (const auto& e : el.U.entries()) CHECK(so.h.has_edge(e.row, m.rows() + e.col));
  auto rd = rank_det_maxsubmatrix(fac);
  auto od = oracle::dense_rank_det(f, m.dense(), static_cast<std::size_t>(m.cols()));
  CHECK(rd.rank == od.rank);
  if (m.rows() == m.cols()) {
    REQUIRE(rd.det);
    CHECK(f.equal(*rd.det, *od.det));
  }
  auto sub = submatrix(m, rd.rows, rd.cols).matrix;
  auto sd = oracle::dense_rank_det(f, sub.dense(), static_cast<std::size_t>(sub.cols()));
  CHECK(sd.rank == rd.rank);
}

}  // namespace

TEST_CASE("strongness checker agrees with brute force on C6") {
  // Rows 0..2, columns 3..5, cycle r0 c3 r1 c4 r2 c5.
  std::vector<Edge> e{{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 5}, {5, 0}};
  Graph c6(6, e);
  std::vector<Vertex> perm{0, 1, 2, 3, 4, 5};
  int violations = 0;
  do {
    StrongOrdering so;
    so.rows = 3;
    so.cols = 3;
    so.h = c6;
    so.position.assign(perm.begin(), perm.end());
    auto fast = check_strong_ordering(so);
    auto slow = oracle::brute_strongness(c6, so.position);
    CHECK(fast.has_value() == slow.has_value());
    violations += fast.has_value();
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(violations > 0);

  StrongOrdering clique;
  clique.rows = 2;
  clique.cols = 2;
  std::vector<Edge> ke{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  clique.h = Graph(4, ke);
  clique.position = {3, 1, 0, 2};
  CHECK_FALSE(check_strong_ordering(clique));
}

TEST_CASE("path decomposition orderings") {
  PrimeField f(1000003);
  auto id = SparseMatrix<PrimeField>::identity(f, 4);
  PathDecomposition pd;
  for (Index i = 0; i < 4; ++i) pd.bags.push_back({i, 4 + i});
  auto so = ordering_from_path_decomp(id, pd);
  CHECK(so.h.edges() == bipartite_graph(id).graph.edges());
  for (Index i = 0; i + 1 < 4; ++i) CHECK(so.before(i, i + 1));
  CHECK_FALSE(check_strong_ordering(so));

  Rng rng(1);
  auto t = tridiagonal(f, 8, rng);
  auto ts = ordering_from_path_decomp(t.m, t.pd);
  CHECK_FALSE(oracle::brute_strongness(ts.h, ts.position));
  CHECK(ts.degeneracy <= 4);

  auto one = ordering_from_path_decomp(id, single_bag(8));
  CHECK(one.h.num_edges() == 16);
  CHECK_FALSE(check_strong_ordering(one));
}

TEST_CASE("tree-partition orderings") {
  PrimeField f(1000003);
  Rng rng(2);
  auto id = SparseMatrix<PrimeField>::identity(f, 2);
  TreePartitionDecomposition one{Graph(1), {{0, 1, 2, 3}}};
  CHECK_FALSE(check_strong_ordering(ordering_from_tpd(id, one)));
  TreePartitionDecomposition two{path_graph(2), {{0, 2}, {1, 3}}};
  auto so = ordering_from_tpd(id, two);
  CHECK(so.before(1, 0));
  CHECK(so.before(3, 2));
  CHECK_FALSE(oracle::brute_strongness(so.h, so.position));
  for (int it = 0; it < 20; ++it) {
    auto x = random_tpd_matrix(f, 20, 20, 4, 0.5, rng);
    auto s = ordering_from_tpd(x.m, x.tpd);
    CHECK(s.degeneracy <= 8);
    CHECK_FALSE(check_strong_ordering(s));
  }
}

TEST_CASE("elimination small cases") {
  PrimeField f(1000003);
  auto id = SparseMatrix<PrimeField>::identity(f, 3);
  auto el = guided_elimination(id, ordering_from_path_decomp(id, single_bag(6)));
  CHECK(el.U == id);
  CHECK(el.L == id);
  auto fac = pluq(el);
  CHECK(fac.P() == id);
  CHECK(fac.Q() == id);

  auto anti = dense_to_sparse(f, {{0, 1}, {1, 0}});
  auto af = pluq(guided_elimination(anti, ordering_from_path_decomp(anti, single_bag(4))));
  CHECK(af.rank == 2);
  CHECK(af.product() == anti);

  auto zero = SparseMatrix<PrimeField>(f, 3, 3);
  auto zr = rank_det_maxsubmatrix(pluq(guided_elimination(zero, ordering_from_path_decomp(zero, single_bag(6)))));
  CHECK(zr.rank == 0);
  CHECK(*zr.det == 0);
  CHECK(zr.rows.empty());

  PrimeField f7(7);
  auto two = dense_to_sparse(f7, {{1, 2}, {3, 4}});
  auto tr = rank_det_maxsubmatrix(pluq(guided_elimination(two, ordering_from_path_decomp(two, single_bag(4)))));
  CHECK(tr.rank == 2);
  CHECK(*tr.det == 5);
}

TEST_CASE("both entry access modes agree") {
  PrimeField f(1000003);
  Rng rng(3);
  for (int it = 0; it < 10; ++it) {
    auto x = random_path_matrix(f, 30, 30, 3, 0.6, rng);
    auto so = ordering_from_path_decomp(x.m, x.pd);
    auto a = guided_elimination(x.m, so, EntryAccess::PArrays);
    auto b = guided_elimination(x.m, so, EntryAccess::HashMap);
    CHECK(a.U == b.U);
    CHECK(a.L == b.L);
  }
}

TEST_CASE("elimination against the dense oracle") {
  Rng rng(5);
  PrimeField f(1000003);
  RationalField q;
  auto t = tridiagonal(f, 50, rng);
  check_against_oracle(t.m, ordering_from_path_decomp(t.m, t.pd));
  for (int it = 0; it < 20; ++it) {
    auto x = random_path_matrix(f, 15 + it, 15 + it, 1 + it % 4, 0.7, rng);
    check_against_oracle(x.m, ordering_from_path_decomp(x.m, x.pd));
    auto y = random_path_matrix(q, 12, 12 + it % 3, 1 + it % 4, 0.7, rng);
    check_against_oracle(y.m, ordering_from_path_decomp(y.m, y.pd));
    auto z = random_tpd_matrix(q, 12, 12, 1 + it % 3, 0.6, rng);
    check_against_oracle(z.m, ordering_from_tpd(z.m, z.tpd));
  }
}

TEST_CASE("solve") {
  PrimeField f(1000003);
  auto id = SparseMatrix<PrimeField>::identity(f, 4);
  auto fac = pluq(guided_elimination(id, ordering_from_path_decomp(id, single_bag(8))));
  std::vector<std::uint64_t> r{4, 3, 2, 1};
  auto s = solve(fac, std::span<const std::uint64_t>(r));
  CHECK(s.consistent);
  CHECK(s.x == r);

  auto col = dense_to_sparse(f, {{1}, {1}});
  auto cf = pluq(guided_elimination(col, ordering_from_path_decomp(col, single_bag(3))));
  std::vector<std::uint64_t> r12{1, 2};
  CHECK_FALSE(solve(cf, std::span<const std::uint64_t>(r12)).consistent);

  Rng rng(6);
  RationalField q;
  for (int it = 0; it < 10; ++it) {
    auto x = random_path_matrix(q, 40, 40, 3, 0.5, rng);
    auto xf = pluq(guided_elimination(x.m, ordering_from_path_decomp(x.m, x.pd)));
    std::vector<mpq_class> want(40);
    for (auto& v : want) v = random_value(q, rng);
    auto rhs = x.m.apply(want);
    auto sol = solve(xf, std::span<const mpq_class>(rhs));
    REQUIRE(sol.consistent);
    CHECK(x.m.apply(sol.x) == rhs);
    auto bad = rhs;
    bad[rng.below(40)] += 1;
    auto os = oracle::dense_solve(q, x.m.dense(), 40, bad);
    CHECK(solve(xf, std::span<const mpq_class>(bad)).consistent == os.has_value());
  }
}

TEST_CASE("echelon and permutation predicates") {
  PrimeField f(101);
  CHECK(is_row_echelon(dense_to_sparse(f, {{1, 2, 0}, {0, 0, 3}, {0, 0, 0}})));
  CHECK_FALSE(is_row_echelon(dense_to_sparse(f, {{0, 1}, {1, 0}})));
  CHECK(is_column_echelon(dense_to_sparse(f, {{1, 0}, {2, 0}, {0, 3}})));
  CHECK(is_permutation_matrix(dense_to_sparse(f, {{0, 1}, {1, 0}})));
  std::vector<Index> swap{1, 0}, id{0, 1, 2}, cyc{1, 2, 0};
  CHECK(permutation_sign(swap) == -1);
  CHECK(permutation_sign(id) == 1);
  CHECK(permutation_sign(cyc) == 1);
}

TEST_CASE("fill-in outside the completion is reported") {
  PrimeField f(101);
  // Full 2x2 with a completion missing (r1, c1).
  auto m = dense_to_sparse(f, {{1, 1}, {1, 1}});
  StrongOrdering so;
  so.rows = 2;
  so.cols = 2;
  std::vector<Edge> e{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  so.h = Graph(4, e);
  so.position = {0, 1, 2, 3};
  measure_ordering(so);
  CHECK_NOTHROW(guided_elimination(m, so));
  StrongOrdering bad = so;
  std::vector<Edge> e2{{0, 2}, {0, 3}, {1, 2}};
  bad.h = Graph(4, e2);
  measure_ordering(bad);
  CHECK_THROWS_AS(guided_elimination(dense_to_sparse(f, {{1, 1}, {1, 0}}), bad), EliminationError);
}

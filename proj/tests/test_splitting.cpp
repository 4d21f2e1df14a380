#include <doctest.h>

#include <set>

#include "lowtw/oracles.hpp"
#include "lowtw/splitting.hpp"
#include "support.hpp"

using namespace lowtw;
using namespace lowtw::testing;

namespace {

struct SmallSplit {
  SparseMatrix<RationalField> m;
  TreeDecomposition td;
};

// Rows r, r' and columns c, c', c''; vertices r=0, r'=1, c=2, c'=3, c''=4.
SmallSplit small_split_instance() {
  RationalField q;
  std::vector<Entry<RationalField>> es{{0, 0, 1}, {0, 1, 2}, {0, 2, 3}, {1, 0, 4}, {1, 1, 5}};
  SmallSplit fi{SparseMatrix<RationalField>(q, 2, 3, es), {}};
  std::vector<Edge> t{{0, 1}, {1, 2}, {1, 3}};
  fi.td.tree = Graph(4, t);
  fi.td.bags = {{0, 1, 2}, {0, 1}, {0, 4}, {0, 1, 3}};
  return fi;
}

int node_of(const SplitTree& t, Vertex label) {
  for (int i = 0; i < t.size(); ++i)
    if (t.label[i] == label) return i;
  return -1;
}

template <class F>
std::size_t dense_rank(const SparseMatrix<F>& m) {
  return oracle::dense_rank_det(m.field(), m.dense(), static_cast<std::size_t>(m.cols())).rank;
}

template <class F>
typename F::Element dense_det(const SparseMatrix<F>& m) {
  return *oracle::dense_rank_det(m.field(), m.dense(), static_cast<std::size_t>(m.cols())).det;
}

}  // namespace

TEST_CASE("tree split from a decomposition") {
  auto fi = small_split_instance();
  auto ts = tree_split_from_td(fi.m, fi.td);
  CHECK(validate(ts));
  CHECK(ts.norm() == 5);
  CHECK(ts.trees[0].label == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(ts.trees[1].label == std::vector<Vertex>{0, 1, 3});
  CHECK(ts.trees[2].size() == 1);

  TreeDecomposition one = trivial_decomposition(5);
  auto flat = tree_split_from_td(fi.m, one);
  CHECK(flat.norm() == 0);
  for (const auto& t : flat.trees) CHECK(t.size() == 1);
}

TEST_CASE("small split pattern") {
  auto fi = small_split_instance();
  auto ts = tree_split_from_td(fi.m, fi.td);
  auto sm = split_matrix(fi.m, ts);
  REQUIRE(sm.matrix.rows() == 7);
  REQUIRE(sm.matrix.cols() == 8);
  CHECK(sm.N == 5);
  auto row = [&](Vertex v, Vertex node) { return sm.node_index[v][node_of(ts.trees[v], node)]; };
  auto chain = [&](Vertex v, Vertex node) { return sm.chain_index[v][node_of(ts.trees[v], node)]; };
  const Vertex r = 0, rp = 1, c = 2, cp = 3, cpp = 4;
  std::set<std::pair<Index, Index>> want{
      {row(r, 0), row(c, 0)},      {row(r, 0), chain(r, 1)},   {row(r, 1), chain(r, 1)},
      {row(r, 1), chain(r, 2)},    {row(r, 1), chain(r, 3)},   {row(r, 2), row(cpp, 2)},
      {row(r, 2), chain(r, 2)},    {row(r, 3), row(cp, 3)},    {row(r, 3), chain(r, 3)},
      {row(rp, 0), row(c, 0)},     {row(rp, 0), chain(rp, 1)}, {row(rp, 1), chain(rp, 1)},
      {row(rp, 1), chain(rp, 3)},  {row(rp, 3), row(cp, 3)},   {row(rp, 3), chain(rp, 3)}};
  std::set<std::pair<Index, Index>> got;
  for (const auto& e : sm.matrix.entries()) got.emplace(e.row, e.col);
  CHECK(got == want);
  // Chain entries are +-1 with opposite signs at the two ends.
  for (Vertex v : {r, rp})
    for (int i = 1; i < ts.trees[v].size(); ++i) {
      auto col = sm.chain_index[v][i];
      auto child = sm.matrix.at(sm.node_index[v][i], col);
      auto parent = sm.matrix.at(sm.node_index[v][ts.trees[v].parent[i]], col);
      CHECK(abs(child) == 1);
      CHECK(child == -parent);
    }
  CHECK(dense_rank(sm.matrix) == dense_rank(fi.m) + sm.N);
}

TEST_CASE("trivial split keeps the matrix") {
  RationalField q;
  Rng rng(1);
  auto x = random_tw_matrix(q, 6, 6, 2, 0.8, rng);
  auto ts = trivial_split(6, 6, x.m.nnz());
  auto sm = split_matrix(x.m, ts);
  CHECK(sm.matrix == x.m);
  std::vector<Index> I{0, 2}, J{1, 3};
  auto [IE, JE] = lift_index_sets(I, J, ts);
  CHECK(IE == I);
  CHECK(JE == J);
}

TEST_CASE("split preserves rank, determinant and minors") {
  RationalField q;
  Rng rng(2);
  for (int it = 0; it < 15; ++it) {
    auto x = random_tw_matrix(q, 5, 5, 2, 0.8, rng);
    auto nice = nice_form(x.td, bipartite_graph(x.m).graph);
    auto ts = tree_split_from_td(x.m, nice);
    auto sm = split_matrix(x.m, ts, nice);
    CHECK(dense_rank(sm.matrix) == dense_rank(x.m) + sm.N);
    CHECK(dense_det(sm.matrix) == dense_det(x.m));
    CHECK(validate(*sm.tpd, bipartite_graph(sm.matrix).graph));
    CHECK(sm.matrix.nnz() <= x.m.nnz() + 4 * sm.N);
    const std::size_t b = nice.max_bag();
    for (Index i = 0; i < sm.matrix.rows(); ++i) CHECK(sm.matrix.row(i).size() <= b + 3);
    for (Index j = 0; j < sm.matrix.cols(); ++j) CHECK(sm.matrix.col(j).size() <= b + 3);

    auto w = random_tw_matrix(q, 5, 6, 2, 0.8, rng);
    auto wn = nice_form(w.td, bipartite_graph(w.m).graph);
    auto wts = tree_split_from_td(w.m, wn);
    auto ws = split_matrix(w.m, wts);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Index> I{static_cast<Index>(rng.below(5))}, J{static_cast<Index>(rng.below(6))};
      Index i2 = static_cast<Index>(rng.below(5)), j2 = static_cast<Index>(rng.below(6));
      if (i2 != I[0]) I.push_back(i2);
      if (j2 != J[0]) J.push_back(j2);
      if (I.size() != J.size()) continue;
      std::sort(I.begin(), I.end());
      std::sort(J.begin(), J.end());
      auto [IE, JE] = lift_index_sets(I, J, wts);
      CHECK(IE.size() == I.size() + ws.N);
      auto small = dense_det(submatrix(w.m, I, J).matrix);
      auto big = dense_det(submatrix(ws.matrix, IE, JE).matrix);
      if (ws.N % 2 == 1) big = -big;  // n + m = 11
      CHECK(small == big);
    }
  }
  std::vector<Index> out{9};
  CHECK_THROWS_AS(lift_index_sets(out, {}, trivial_split(2, 2, 0)), SplitError);
}

TEST_CASE("rank, determinant and solve along a tree decomposition") {
  RationalField q;
  auto id = SparseMatrix<RationalField>::identity(q, 5);
  auto r = tw_rank_det_solve(id, trivial_decomposition(10));
  CHECK(r.rank == 5);
  CHECK(*r.det == 1);
  std::vector<mpq_class> rhs{1, 2, 3, 4, 5};
  auto s = tw_rank_det_solve(id, trivial_decomposition(10), std::span<const mpq_class>(rhs));
  REQUIRE(s.solution);
  CHECK(s.solution->consistent);
  CHECK(s.solution->x == rhs);

  // M[j][i] = 1 for i - j in {0, 1}.
  const Index n = 12;
  std::vector<Entry<RationalField>> es;
  for (Index j = 0; j < n; ++j) {
    es.push_back({j, j, 1});
    if (j + 1 < n) es.push_back({j, j + 1, 1});
  }
  SparseMatrix<RationalField> bi(q, n, n, es);
  TreeDecomposition btd;
  std::vector<Edge> bt;
  for (Index j = 0; j < n; ++j) {
    VertexSet b{j, n + j};
    if (j + 1 < n) b.push_back(n + j + 1);
    btd.bags.push_back(make_set(b));
    if (j > 0) bt.emplace_back(j - 1, j);
  }
  btd.tree = Graph(n, bt);
  auto br = tw_rank_det_solve(bi, btd);
  CHECK(br.rank == static_cast<std::size_t>(n));
  CHECK(*br.det == 1);

  Rng rng(3);
  PrimeField f(1000003);
  for (int it = 0; it < 6; ++it) {
    auto x = random_tw_matrix(q, 40, 40, 3, 0.7, rng);
    std::vector<mpq_class> want(40);
    for (auto& v : want) v = random_value(q, rng);
    auto rr = x.m.apply(want);
    auto res = tw_rank_det_solve(x.m, x.td, std::span<const mpq_class>(rr));
    auto od = oracle::dense_rank_det(q, x.m.dense(), 40);
    CHECK(res.rank == od.rank);
    CHECK(*res.det == *od.det);
    CHECK(res.lu.well_formed());
    CHECK(res.lu.product() == x.m);
    REQUIRE(res.solution->consistent);
    CHECK(x.m.apply(res.solution->x) == rr);
    auto bad = rr;
    bad[0] += 1;
    auto bs = res.lu.solve(bad);
    CHECK(bs.consistent == oracle::dense_solve(q, x.m.dense(), 40, bad).has_value());

    auto y = random_tw_matrix(f, 30, 36, 3, 0.6, rng);
    auto yr = tw_rank_det_solve(y.m, y.td);
    CHECK(yr.rank == oracle::dense_rank_det(f, y.m.dense(), 36).rank);
    CHECK_FALSE(yr.det);
    CHECK(yr.lu.product() == y.m);
    CHECK(yr.lu.well_formed());
  }
}

TEST_CASE("degenerate shapes") {
  RationalField q;
  SparseMatrix<RationalField> empty(q, 0, 3);
  auto r = tw_rank_det_solve(empty, trivial_decomposition(3));
  CHECK(r.rank == 0);
  CHECK_FALSE(r.det);
  SparseMatrix<RationalField> z(q, 3, 3);
  auto zr = tw_rank_det_solve(z, trivial_decomposition(6));
  CHECK(zr.rank == 0);
  CHECK(*zr.det == 0);
}

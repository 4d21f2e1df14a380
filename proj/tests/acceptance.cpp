// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "cli_support.hpp"
#include "lowtw/elimination.hpp"
#include "lowtw/matching.hpp"
#include "lowtw/oracles.hpp"
#include "lowtw/splitting.hpp"
#include "lowtw/tw_approx.hpp"
#include "lowtw/vertex_flow.hpp"
#include "support.hpp"

using namespace lowtw;
using namespace lowtw::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

template <class F>
typename F::Element dense_det(const SparseMatrix<F>& m) {
  return *oracle::dense_rank_det(m.field(), m.dense(), static_cast<std::size_t>(m.cols())).det;
}

template <class F>
std::size_t dense_rank(const SparseMatrix<F>& m) {
  return oracle::dense_rank_det(m.field(), m.dense(), static_cast<std::size_t>(m.cols())).rank;
}

// Shared by criteria 1 and 2.
struct EliminationTally {
  int runs = 0;
  int product_bad = 0;
  int rank_det_bad = 0;
  int fill_errors = 0;
  int l_bound_bad = 0;
  double seconds = 0;
};

EliminationTally tally;

template <class F>
void eliminate_one(const F& f, const SparseMatrix<F>& m, const StrongOrdering& so) {
  ++tally.runs;
  EliminationResult<F> el;
  try {
    el = guided_elimination(m, so);
  } catch (const EliminationError&) {
    ++tally.fill_errors;
    return;
  }
  if (el.L.nnz() > el.h_edges + el.h_vertices) ++tally.l_bound_bad;
  auto fac = pluq(el);
  if (!(fac.product() == m)) ++tally.product_bad;
  auto rd = rank_det_maxsubmatrix(fac);
  auto od = oracle::dense_rank_det(f, m.dense(), static_cast<std::size_t>(m.cols()));
  bool ok = rd.rank == od.rank;
  if (m.rows() == m.cols()) ok = ok && rd.det && od.det && f.equal(*rd.det, *od.det);
  if (!ok) ++tally.rank_det_bad;
}

template <class F>
void elimination_instance(const F& f, int i, Rng& rng) {
  const int w = 1 + i % 6;
  const Index rows = 1 + static_cast<Index>(rng.below(200));
  const Index cols = i % 3 == 0 ? rows : 1 + static_cast<Index>(rng.below(200));
  const double density = 0.3 + 0.7 * static_cast<double>(rng.below(1000)) / 1000.0;
  if ((i / 2) % 2 == 0) {
    auto x = random_path_matrix(f, rows, cols, w, density, rng);
    eliminate_one(f, x.m, ordering_from_path_decomp(x.m, x.pd));
  } else {
    auto x = random_tpd_matrix(f, rows, cols, w, density, rng);
    eliminate_one(f, x.m, ordering_from_tpd(x.m, x.tpd));
  }
}

Outcome criterion_elimination() {
  Rng rng(1001);
  PrimeField p(kLargePrime);
  RationalField q;
  const auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    if (i % 2 == 0)
      elimination_instance(p, i, rng);
    else
      elimination_instance(q, i, rng);
  }
  tally.seconds = seconds_since(t0);
  std::ostringstream d;
  d << tally.runs << " matrices, product mismatches " << tally.product_bad << ", rank/det mismatches "
    << tally.rank_det_bad << ", elimination errors " << tally.fill_errors << ", " << tally.seconds << "s with oracles";
  return {tally.product_bad == 0 && tally.rank_det_bad == 0 && tally.fill_errors == 0 && tally.seconds < 60,
          d.str()};
}

Outcome criterion_fill_in() {
  // The split matrices of the tree decomposition pipeline go through the same elimination.
  Rng rng(1002);
  RationalField q;
  PrimeField p(kLargePrime);
  for (int i = 0; i < 100; ++i) {
    const Index n = 5 + static_cast<Index>(rng.below(60));
    if (i % 2 == 0) {
      auto x = random_tw_matrix(p, n, n, 1 + i % 4, 0.7, rng);
      auto nice = nice_form(x.td, bipartite_graph(x.m).graph);
      auto sm = split_matrix(x.m, tree_split_from_td(x.m, nice), nice);
      eliminate_one(p, sm.matrix, ordering_from_tpd(sm.matrix, *sm.tpd));
    } else {
      auto x = random_tw_matrix(q, n, n, 1 + i % 4, 0.7, rng);
      auto nice = nice_form(x.td, bipartite_graph(x.m).graph);
      auto sm = split_matrix(x.m, tree_split_from_td(x.m, nice), nice);
      eliminate_one(q, sm.matrix, ordering_from_tpd(sm.matrix, *sm.tpd));
    }
  }
  std::ostringstream d;
  d << tally.runs << " eliminations, fill outside H " << tally.fill_errors << ", nnz(L) bound violations "
    << tally.l_bound_bad;
  return {tally.fill_errors == 0 && tally.l_bound_bad == 0, d.str()};
}

int node_of(const SplitTree& t, Vertex label) {
  for (int i = 0; i < t.size(); ++i)
    if (t.label[i] == label) return i;
  return -1;
}

bool small_split_pattern() {
  RationalField q;
  std::vector<Entry<RationalField>> es{{0, 0, 1}, {0, 1, 2}, {0, 2, 3}, {1, 0, 4}, {1, 1, 5}};
  SparseMatrix<RationalField> m(q, 2, 3, es);
  TreeDecomposition td;
  std::vector<Edge> t{{0, 1}, {1, 2}, {1, 3}};
  td.tree = Graph(4, t);
  td.bags = {{0, 1, 2}, {0, 1}, {0, 4}, {0, 1, 3}};
  auto ts = tree_split_from_td(m, td);
  auto sm = split_matrix(m, ts);
  if (sm.matrix.rows() != 7 || sm.matrix.cols() != 8 || sm.N != 5) return false;
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
  return got == want;
}

Outcome criterion_split() {
  Rng rng(1003);
  RationalField q;
  int rank_bad = 0, det_bad = 0;
  std::size_t max_n = 0;
  for (int i = 0; i < 200; ++i) {
    const Index n = 2 + static_cast<Index>(rng.below(14));
    auto x = random_tw_matrix(q, n, n, 1 + i % 3, 0.5 + 0.5 * (i % 2), rng);
    auto nice = nice_form(x.td, bipartite_graph(x.m).graph);
    auto sm = split_matrix(x.m, tree_split_from_td(x.m, nice), nice);
    max_n = std::max(max_n, sm.N);
    if (dense_rank(sm.matrix) != dense_rank(x.m) + sm.N) ++rank_bad;
    if (dense_det(sm.matrix) != dense_det(x.m)) ++det_bad;
  }
  const bool fig = small_split_pattern();
  std::ostringstream d;
  d << "200 instances (largest N " << max_n << "), rank mismatches " << rank_bad << ", det mismatches " << det_bad
    << ", 2x3 pattern " << (fig ? "exact" : "differs");
  return {rank_bad == 0 && det_bad == 0 && fig, d.str()};
}

Outcome criterion_matching() {
  Rng rng(1004);
  int agree = 0, over = 0, invalid = 0, failed = 0;
  const int runs = 200;
  for (int i = 0; i < runs; ++i) {
    const Vertex n = 2 + static_cast<Vertex>(rng.below(59));
    const double keep = 0.3 + 0.6 * static_cast<double>(rng.below(100)) / 100.0;
    auto [g, td] = random_partial_ktree(n, 1 + i % 4, keep, rng);
    const std::size_t want = oracle::max_matching(g).size();
    const std::size_t size = matching_size(g, td, 1, 5000 + i);
    auto m = max_matching(g, td, 1, 7000 + i);
    if (size > want) ++over;
    if (!m) {
      ++failed;
      continue;
    }
    if (!validate(*m, g)) ++invalid;
    if (m->size() > want) ++over;
    if (size == want && m->size() == want) ++agree;
  }
  std::ostringstream d;
  d << agree << "/" << runs << " equal the oracle, over-estimates " << over << ", invalid " << invalid
    << ", reported failures " << failed;
  return {agree * 100 >= runs * 99 && over == 0 && invalid == 0, d.str()};
}

Outcome criterion_allowed_edges() {
  Rng rng(1005);
  int checked = 0, wrong = 0, singular = 0, graphs = 0;
  auto check = [&](const Graph& g, const TreePartitionDecomposition& tpd, Rng r) {
    if (!oracle::has_perfect_matching(g)) return;
    ++graphs;
    TutteSystem sys(g, tpd, matching_prime(g.num_vertices(), 1), r);
    if (!sys.nonsingular()) {
      ++singular;
      return;
    }
    auto allowed = oracle::allowed_edges(g);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      auto [a, b] = find_allowed_edge(g, sys, u);
      ++checked;
      if (allowed.count({std::min(a, b), std::max(a, b)}) == 0) ++wrong;
    }
  };
  auto one_bag = [](Vertex n) {
    VertexSet all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    return tpd_of_path({all});
  };
  for (Vertex n : {2, 4, 6, 8, 10, 12, 14}) {
    check(cycle_graph(n), one_bag(n), rng.split(n));
    check(complete_graph(n), one_bag(n), rng.split(100 + n));
    check(path_graph(n), one_bag(n), rng.split(200 + n));
  }
  check(petersen_graph(), one_bag(10), rng.split(300));
  check(grid_graph(2, 7), one_bag(14), rng.split(301));
  check(grid_graph(3, 4), one_bag(12), rng.split(302));
  for (int i = 0; i < 400; ++i) {
    auto x = random_matchable(2 + 2 * static_cast<Vertex>(rng.below(7)), 1 + i % 4, rng);
    check(x.g, x.tpd, rng.split(1000 + i));
  }
  std::ostringstream d;
  d << graphs << " graphs with perfect matchings, " << checked << " edges checked, outside every perfect matching "
    << wrong << ", singular samples " << singular;
  return {wrong == 0 && checked > 0, d.str()};
}

Outcome criterion_flow() {
  Rng rng(1006);
  int bad_size = 0, bad_value = 0, bad_cut = 0, bad_paths = 0, runs = 0;
  while (runs < 300) {
    const Vertex n = 2 + static_cast<Vertex>(rng.below(199));
    const double keep = 0.4 + 0.6 * static_cast<double>(rng.below(100)) / 100.0;
    auto x = random_directed_ktree(n, 1 + runs % 6, keep, rng);
    const Vertex s = static_cast<Vertex>(rng.below(n));
    const Vertex t = static_cast<Vertex>(rng.below(n));
    if (s == t || x.g.has_arc(s, t)) continue;
    ++runs;
    auto r = max_vertex_flow_td(x.g, s, t, x.td);
    std::vector<Vertex> S{s}, T{t};
    if (r.flow.paths.size() != r.cut.vertices.size()) ++bad_size;
    if (r.flow.paths.size() != oracle::max_vertex_flow(x.g, s, t).value) ++bad_value;
    if (oracle::reachable(x.g, s, t, r.cut.vertices)) ++bad_cut;
    if (!check_flow(x.g, S, T, r.flow)) ++bad_paths;
  }
  std::ostringstream d;
  d << runs << " instances, flow != cut " << bad_size << ", flow != oracle " << bad_value
    << ", cut leaves a path " << bad_cut << ", invalid flows " << bad_paths;
  return {bad_size + bad_value + bad_cut + bad_paths == 0, d.str()};
}

Outcome criterion_tw_approx() {
  Rng rng(1007);
  int runs = 0, invalid = 0, too_big = 0, verdicts = 0, unsound = 0, clique_verdicts = 0;
  auto run = [&](const Graph& g, int k, bool small) {
    ++runs;
    auto r = approximate_treewidth(g, k);
    if (r.treewidth_at_least_k) {
      ++verdicts;
      if (small && oracle::exact_treewidth(g) < k) ++unsound;
      return;
    }
    if (!validate(r.decomposition, g)) ++invalid;
    if (r.decomposition.max_bag() > 1800ULL * static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k)) ++too_big;
  };
  for (int i = 0; i < 300; ++i) {
    const Vertex n = 1 + static_cast<Vertex>(rng.below(12));
    std::vector<Edge> e;
    const std::uint64_t p = rng.below(100);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.below(100) < p) e.emplace_back(u, v);
    const Graph g(n, e);
    // Tiny k makes the edge count guard fire on dense graphs.
    run(g, 1 + i % 3, true);
  }
  for (int i = 0; i < 40; ++i) {
    auto [g, td] = random_partial_ktree(200 + 50 * i, 1 + i % 3, 0.8, rng);
    run(g, 2 + i % 3, false);
  }
  for (int i = 0; i < 3; ++i) {
    auto [g, td] = random_partial_ktree(3000, 1, 1.0, rng);
    run(g, 1, false);
    run(g, 2, false);
  }
  for (Vertex n = 1; n <= 40; ++n)
    for (int k = n; k <= n + 2; ++k) {
      ++runs;
      auto kn = complete_graph(n);
      auto r = approximate_treewidth(kn, k);
      if (r.treewidth_at_least_k)
        ++clique_verdicts;
      else if (!validate(r.decomposition, kn))
        ++invalid;
    }
  std::ostringstream d;
  d << runs << " runs, invalid " << invalid << ", over-size bags " << too_big << ", verdicts " << verdicts
    << " (unsound " << unsound << "), clique verdicts " << clique_verdicts;
  return {invalid == 0 && too_big == 0 && unsound == 0 && clique_verdicts == 0, d.str()};
}

// Best of a few repetitions.
double time_it(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

Outcome criterion_scaling() {
  const std::vector<Vertex> sizes{20000, 40000, 80000};
  const int k = 6;
  std::vector<double> elim, match, flow;
  for (Vertex n : sizes) {
    Rng rng(1008 + n);
    PrimeField f(kLargePrime);
    auto x = random_path_matrix(f, n / 2, n / 2, k, 0.6, rng);
    elim.push_back(time_it([&] {
      auto fac = pluq(guided_elimination(x.m, ordering_from_path_decomp(x.m, x.pd)));
      if (fac.rank == 0 && x.m.nnz() > 0) throw std::logic_error("empty factorization");
    }, 5));
    auto [g, td] = random_partial_ktree(n, k, 0.6, rng);
    match.push_back(time_it([&] { matching_size(g, td, 1, 11); }, 1));
    auto d = random_directed_ktree(n, k, 0.8, rng);
    Vertex s = 0, t = n - 1;
    while (d.g.has_arc(s, t)) --t;
    flow.push_back(time_it([&] { max_vertex_flow_td(d.g, s, t, d.td); }, 5));
  }
  auto ratio = [](const std::vector<double>& ts) { return (ts[1] / ts[0] + ts[2] / ts[1]) / 2; };
  const double re = ratio(elim), rm = ratio(match), rf = ratio(flow);
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "doubling ratios elimination %.2f (%.3fs %.3fs %.3fs), matching_size %.2f (%.3fs %.3fs %.3fs), "
                "max_vertex_flow_td %.2f (%.3fs %.3fs %.3fs)",
                re, elim[0], elim[1], elim[2], rm, match[0], match[1], match[2], rf, flow[0], flow[1], flow[2]);
  return {re <= 2.6 && rm <= 3.0 && rf <= 3.0, buf};
}

std::string run_corpus_once(const std::filesystem::path& dir) {
  std::ostringstream all;
  for (const auto& line : corpus_lines()) {
    auto r = run_cli(corpus_args(line));
    all << "$ " << line << "\n" << r.code << "\n" << r.out << r.err;
  }
  // Written decompositions as well as stdout.
  std::filesystem::create_directories(dir);
  int i = 0;
  for (const char* gr : {"tree30.gr", "ktree60.gr", "grid4.gr", "petersen.gr"}) {
    auto out = (dir / ("approx" + std::to_string(i++) + ".td")).string();
    auto r = run_cli({"tw-approx", "-k", "4", fixture(gr), "-o", out});
    std::ifstream in(out);
    std::stringstream content;
    content << in.rdbuf();
    all << "$ tw-approx " << gr << "\n" << r.code << "\n" << r.out << r.err << content.str();
  }
  return all.str();
}

Outcome criterion_determinism() {
  const auto base = std::filesystem::temp_directory_path() / "lowtw_acceptance";
  const std::string a = run_corpus_once(base / "a");
  const std::string b = run_corpus_once(base / "b");
  std::filesystem::remove_all(base);
  std::ostringstream d;
  d << corpus_lines().size() << " corpus commands plus 4 written decompositions, " << a.size() << " bytes, "
    << (a == b ? "identical" : "different");
  return {a == b && !corpus_lines().empty(), d.str()};
}

}  // namespace

int main() {
  report(1, "elimination correctness", criterion_elimination);
  report(2, "fill-in invariant", criterion_fill_in);
  report(3, "split identities", criterion_split);
  report(4, "matching", criterion_matching);
  report(5, "allowed-edge soundness", criterion_allowed_edges);
  report(6, "max flow", criterion_flow);
  report(7, "treewidth approximation", criterion_tw_approx);
  report(8, "scaling", criterion_scaling);
  report(9, "determinism", criterion_determinism);
  return failures == 0 ? 0 : 1;
}

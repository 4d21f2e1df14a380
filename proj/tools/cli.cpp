#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lowtw/elimination.hpp"
#include "lowtw/io.hpp"
#include "lowtw/matching.hpp"
#include "lowtw/oracles.hpp"
#include "lowtw/splitting.hpp"
#include "lowtw/tw_approx.hpp"
#include "lowtw/vertex_flow.hpp"

namespace lowtw::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph, decomposition, matrix, rhs, output;
  int k = 0;
  std::uint64_t seed = 0;
  int error_exponent = 1;
  int threads = 1;
  bool oracle = false;
  Vertex source = 0, sink = 0;
  std::optional<std::size_t> limit;
};

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

std::string slurp(const std::string& path) {
  auto in = open(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph read_graph(const std::string& path) {
  auto in = open(path);
  return io::parse_graph(in);
}

io::DecompositionFile read_decomposition(const std::string& path) {
  auto in = open(path);
  return io::parse_decomposition(in);
}

void print_vertices(std::ostream& out, const char* key, std::span<const Vertex> vs) {
  out << key;
  for (Vertex v : vs) out << ' ' << v + 1;
  out << '\n';
}

int tw_approx_cmd(const Options& o, std::ostream& out) {
  Graph g = read_graph(o.graph);
  if (o.k < 1) throw UsageError("-k must be positive");
  ApproxResult r = approximate_treewidth(g, o.k);
  if (r.treewidth_at_least_k) {
    out << "treewidth >= " << o.k << '\n';
    return kExitVerdict;
  }
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw UsageError("cannot write " + o.output);
    io::write_decomposition(f, r.decomposition, g.num_vertices());
  } else {
    io::write_decomposition(out, r.decomposition, g.num_vertices());
  }
  out << "bags " << r.decomposition.num_nodes() << '\n';
  out << "width " << r.decomposition.width() << '\n';
  if (o.oracle && g.num_vertices() <= 16) out << "oracle_treewidth " << oracle::exact_treewidth(g) << '\n';
  return kExitOk;
}

int validate_cmd(const Options& o, std::ostream& out) {
  Graph g = read_graph(o.graph);
  auto d = read_decomposition(o.decomposition);
  if (d.n != g.num_vertices()) throw UsageError("decomposition and graph disagree on the vertex count");
  Validation v;
  switch (d.kind) {
    case io::DecompositionKind::Tree: v = validate(d.td, g); break;
    case io::DecompositionKind::TreePartition: v = validate(io::as_tree_partition(d), g); break;
    case io::DecompositionKind::Path: v = validate(io::as_path(d), g); break;
  }
  out << "valid " << (v.ok ? 1 : 0) << '\n';
  if (!v.ok) {
    out << "violation " << v.violation << '\n';
    return kExitVerdict;
  }
  out << "width " << static_cast<int>(d.td.max_bag()) - 1 << '\n';
  return kExitOk;
}

template <class F>
int linear_algebra(const std::string& cmd, const Options& o, const SparseMatrix<F>& m, std::ostream& out) {
  const F& f = m.field();
  auto d = read_decomposition(o.decomposition);
  if (d.n != m.rows() + m.cols()) throw UsageError("decomposition must cover rows + cols vertices");
  if (cmd == "det" && m.rows() != m.cols()) throw UsageError("det needs a square matrix");
  std::optional<std::vector<typename F::Element>> r;
  if (cmd == "solve") {
    if (o.rhs.empty()) throw UsageError("solve needs --rhs");
    auto in = open(o.rhs);
    r = io::parse_vector(in, f);
    if (static_cast<Index>(r->size()) != m.rows()) throw UsageError("right-hand side has wrong length");
  }

  std::size_t rank = 0;
  std::optional<typename F::Element> det;
  std::optional<Solution<F>> sol;
  if (d.kind == io::DecompositionKind::Tree) {
    std::optional<std::span<const typename F::Element>> rs;
    if (r) rs = std::span<const typename F::Element>(*r);
    TwResult<F> res = tw_rank_det_solve(m, d.td, rs);
    rank = res.rank;
    det = res.det;
    sol = res.solution;
    out << "split_norm " << res.stats.split_norm << '\n';
  } else {
    StrongOrdering so = d.kind == io::DecompositionKind::Path ? ordering_from_path_decomp(m, io::as_path(d))
                                                              : ordering_from_tpd(m, io::as_tree_partition(d));
    auto fac = pluq(guided_elimination(m, so));
    auto rd = rank_det_maxsubmatrix(fac);
    rank = rd.rank;
    det = rd.det;
    if (r) sol = solve(fac, std::span<const typename F::Element>(*r));
    out << "ordering_width " << so.width << '\n';
  }

  int code = kExitOk;
  if (cmd == "rank") out << "rank " << rank << '\n';
  if (cmd == "det") out << "det " << f.to_string(*det) << '\n';
  if (cmd == "solve") {
    out << "rank " << rank << '\n';
    if (!sol->consistent) {
      out << "status inconsistent\n";
      code = kExitVerdict;
    } else {
      out << "status consistent\n";
      if (!o.output.empty()) {
        std::ofstream fo(o.output);
        if (!fo) throw UsageError("cannot write " + o.output);
        io::write_vector(fo, f, std::span<const typename F::Element>(sol->x));
      } else {
        for (std::size_t i = 0; i < sol->x.size(); ++i) out << "x" << i + 1 << ' ' << f.to_string(sol->x[i]) << '\n';
      }
    }
  }

  if (o.oracle) {
    auto dense = m.dense();
    auto od = oracle::dense_rank_det(f, dense, static_cast<std::size_t>(m.cols()));
    bool agree = od.rank == rank;
    if (cmd == "det") agree = agree && od.det && f.equal(*od.det, *det);
    if (cmd == "solve") {
      auto os = oracle::dense_solve(f, dense, static_cast<std::size_t>(m.cols()), *r);
      agree = agree && os.has_value() == sol->consistent;
      if (sol->consistent) agree = agree && m.apply(sol->x) == *r;
    }
    out << "oracle_rank " << od.rank << '\n';
    if (cmd == "det") out << "oracle_det " << f.to_string(*od.det) << '\n';
    out << "oracle_agree " << (agree ? 1 : 0) << '\n';
  }
  return code;
}

int matrix_cmd(const std::string& cmd, const Options& o, std::ostream& out) {
  auto in = open(o.matrix);
  io::AnyMatrix m = io::parse_matrix(in);
  return std::visit([&](const auto& x) { return linear_algebra(cmd, o, x, out); }, m);
}

int matching_cmd(const std::string& cmd, const Options& o, std::ostream& out) {
  Graph g = read_graph(o.graph);
  auto d = read_decomposition(o.decomposition);
  if (d.kind == io::DecompositionKind::TreePartition) throw UsageError("matching needs a tree or path decomposition");
  TreeDecomposition td = std::move(d.td);
  int code = kExitOk;
  std::size_t size = 0;
  if (cmd == "matching-size") {
    size = matching_size(g, td, o.error_exponent, o.seed);
    out << "size " << size << '\n';
  } else {
    MatchingStats stats;
    auto mm = max_matching(g, clean(td), o.error_exponent, o.seed, &stats);
    if (!mm) {
      out << "status failure\n";
      return kExitFailure;
    }
    size = mm->size();
    out << "size " << size << '\n';
    for (auto [u, v] : mm->edges) out << "edge " << u + 1 << ' ' << v + 1 << '\n';
  }
  if (o.oracle) {
    std::size_t want = oracle::max_matching(g).size();
    out << "oracle_size " << want << '\n';
    out << "oracle_agree " << (want == size ? 1 : 0) << '\n';
  }
  return code;
}

int maxflow_cmd(const Options& o, std::ostream& out) {
  std::string text = slurp(o.graph);
  std::istringstream probe(text);
  DiGraph g;
  bool directed = false;
  for (std::string line; std::getline(probe, line);) {
    std::istringstream ls(line);
    std::string a, b;
    ls >> a >> b;
    if (a == "p") {
      directed = b == "dtw";
      break;
    }
  }
  std::istringstream in(text);
  g = directed ? io::parse_digraph(in) : symmetric_digraph(io::parse_graph(in));
  auto d = read_decomposition(o.decomposition);
  if (d.kind == io::DecompositionKind::TreePartition) throw UsageError("maxflow needs a tree or path decomposition");
  Vertex s = o.source - 1, t = o.sink - 1;
  if (s < 0 || t < 0 || s >= g.num_vertices() || t >= g.num_vertices())
    throw UsageError("terminal out of range");

  std::size_t value = 0;
  if (o.limit) {
    std::vector<Vertex> S{s}, T{t};
    auto r = flow_up_to_k(g, S, T, *o.limit);
    if (!r) {
      out << "flow > " << *o.limit << '\n';
      return kExitVerdict;
    }
    value = r->flow.size();
    out << "flow " << value << '\n';
    print_vertices(out, "cut", r->cut.vertices);
  } else {
    FlowTdStats stats;
    MaxFlowCut r = max_vertex_flow_td(g, s, t, d.td, &stats);
    value = r.flow.size();
    out << "flow " << value << '\n';
    print_vertices(out, "cut", r.cut.vertices);
    for (const auto& p : r.flow.paths) print_vertices(out, "path", p);
  }
  if (o.oracle) {
    std::size_t want = oracle::max_vertex_flow(g, s, t).value;
    out << "oracle_flow " << want << '\n';
    out << "oracle_agree " << (want == value ? 1 : 0) << '\n';
  }
  return kExitOk;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("LOWTW_SEED");
  if (!env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw UsageError("LOWTW_SEED is not an unsigned integer");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Algorithms on graphs and matrices of low treewidth"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_flag("--oracle", o.oracle, "Run the reference implementation alongside and compare");
    c->add_option("--threads", o.threads, "Worker threads (the recursion runs sequentially)")->check(CLI::PositiveNumber);
  };

  auto* tw = app.add_subcommand("tw-approx", "Approximate a tree decomposition or report treewidth >= k");
  tw->add_option("-k", o.k, "Width parameter")->required();
  tw->add_option("graph", o.graph, "Graph file")->required();
  tw->add_option("-o,--output", o.output, "Decomposition output file");
  common(tw);

  auto* val = app.add_subcommand("validate", "Check a decomposition against a graph");
  val->add_option("graph", o.graph)->required();
  val->add_option("decomposition", o.decomposition)->required();
  common(val);

  std::vector<CLI::App*> la;
  for (const char* name : {"rank", "det", "solve"}) {
    auto* c = app.add_subcommand(name, std::string("Matrix ") + name + " along a decomposition of its matrix graph");
    c->add_option("matrix", o.matrix)->required();
    c->add_option("decomposition", o.decomposition)->required();
    if (std::string(name) == "solve") {
      c->add_option("--rhs", o.rhs, "Right-hand side, one value per line")->required();
      c->add_option("-o,--output", o.output, "Solution output file");
    }
    common(c);
    la.push_back(c);
  }

  std::vector<CLI::App*> mt;
  for (const char* name : {"matching-size", "matching"}) {
    auto* c = app.add_subcommand(name, "Randomized maximum matching along a tree decomposition");
    c->add_option("graph", o.graph)->required();
    c->add_option("decomposition", o.decomposition)->required();
    c->add_option("--seed", o.seed, "Random seed (default from LOWTW_SEED)");
    c->add_option("--error-exponent", o.error_exponent, "Failure probability n^-c")->check(CLI::NonNegativeNumber);
    common(c);
    mt.push_back(c);
  }

  auto* mf = app.add_subcommand("maxflow", "Maximum vertex-disjoint s-t flow along a tree decomposition");
  mf->add_option("graph", o.graph)->required();
  mf->add_option("decomposition", o.decomposition)->required();
  mf->add_option("--source", o.source)->required();
  mf->add_option("--sink", o.sink)->required();
  mf->add_option("--limit", o.limit, "Stop once the flow exceeds this bound");
  common(mf);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (tw->parsed()) return tw_approx_cmd(o, out);
    if (val->parsed()) return validate_cmd(o, out);
    for (auto* c : la)
      if (c->parsed()) return matrix_cmd(c->get_name(), o, out);
    for (auto* c : mt)
      if (c->parsed()) return matching_cmd(c->get_name(), o, out);
    if (mf->parsed()) return maxflow_cmd(o, out);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lowtw::cli

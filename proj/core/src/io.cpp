#include "lowtw/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace lowtw::io {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

// Non-empty, non-comment lines split on whitespace.
std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    std::istringstream ss(text);
    Line l{number, {}};
    std::string tok;
    while (ss >> tok) l.tokens.push_back(tok);
    if (l.tokens.empty() || l.tokens[0] == "c" || l.tokens[0][0] == '%') continue;
    out.push_back(std::move(l));
  }
  return out;
}

std::int64_t integer(const Line& l, std::size_t i, const char* what) {
  if (i >= l.tokens.size()) throw ParseError(l.number, std::string("missing ") + what);
  const std::string& t = l.tokens[i];
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError(l.number, std::string("bad ") + what + " '" + t + "'");
  return v;
}

std::uint64_t unsigned_integer(const Line& l, std::size_t i, const char* what) {
  if (i >= l.tokens.size()) throw ParseError(l.number, std::string("missing ") + what);
  const std::string& t = l.tokens[i];
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ParseError(l.number, std::string("bad ") + what + " '" + t + "'");
  return v;
}

Vertex vertex(const Line& l, std::size_t i, Vertex n) {
  std::int64_t v = integer(l, i, "vertex");
  if (v < 1 || v > n) throw ParseError(l.number, "vertex " + std::to_string(v) + " out of range");
  return static_cast<Vertex>(v - 1);
}

void expect_arity(const Line& l, std::size_t k) {
  if (l.tokens.size() != k) throw ParseError(l.number, "expected " + std::to_string(k) + " fields");
}

std::pair<Vertex, std::vector<Edge>> parse_edges(std::istream& in, const std::string& tag, bool directed) {
  auto lines = tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty graph file");
  const Line& h = lines[0];
  if (h.tokens.size() != 4 || h.tokens[0] != "p" || h.tokens[1] != tag)
    throw ParseError(h.number, "expected header 'p " + tag + " <n> <m>'");
  std::int64_t n = integer(h, 2, "vertex count"), m = integer(h, 3, "edge count");
  if (n < 0 || m < 0 || n > std::numeric_limits<Vertex>::max() / 2) throw ParseError(h.number, "bad header counts");
  if (static_cast<std::int64_t>(lines.size()) - 1 != m)
    throw ParseError(h.number, "header announces " + std::to_string(m) + " edges, file has " +
                                   std::to_string(lines.size() - 1));
  std::vector<Edge> edges;
  std::vector<std::pair<Edge, std::size_t>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    expect_arity(l, 2);
    Vertex u = vertex(l, 0, static_cast<Vertex>(n)), v = vertex(l, 1, static_cast<Vertex>(n));
    if (u == v) throw ParseError(l.number, "self-loop");
    edges.emplace_back(u, v);
    Edge key = directed ? Edge{u, v} : Edge{std::min(u, v), std::max(u, v)};
    seen.emplace_back(key, l.number);
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i].first == seen[i - 1].first)
      throw ParseError(std::max(seen[i].second, seen[i - 1].second), "duplicate edge");
  return {static_cast<Vertex>(n), std::move(edges)};
}

}  // namespace

Graph parse_graph(std::istream& in) {
  auto [n, edges] = parse_edges(in, "tw", false);
  return Graph(n, edges);
}

DiGraph parse_digraph(std::istream& in) {
  auto [n, edges] = parse_edges(in, "dtw", true);
  return DiGraph(n, edges);
}

void write_graph(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  out << "p tw " << g.num_vertices() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u + 1 << ' ' << v + 1 << '\n';
}

void write_digraph(std::ostream& out, const DiGraph& g) {
  auto arcs = g.arcs();
  out << "p dtw " << g.num_vertices() << ' ' << arcs.size() << '\n';
  for (auto [u, v] : arcs) out << u + 1 << ' ' << v + 1 << '\n';
}

DecompositionFile parse_decomposition(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty decomposition file");
  const Line& h = lines[0];
  if (h.tokens.size() != 5 || h.tokens[0] != "s") throw ParseError(h.number, "expected header 's td <bags> <max> <n>'");
  DecompositionFile f;
  if (h.tokens[1] == "td")
    f.kind = DecompositionKind::Tree;
  else if (h.tokens[1] == "tpd")
    f.kind = DecompositionKind::TreePartition;
  else if (h.tokens[1] == "pd")
    f.kind = DecompositionKind::Path;
  else
    throw ParseError(h.number, "unknown decomposition type '" + h.tokens[1] + "'");
  std::int64_t bags = integer(h, 2, "bag count"), maxb = integer(h, 3, "bag size"), n = integer(h, 4, "vertex count");
  if (bags < 0 || maxb < 0 || n < 0) throw ParseError(h.number, "bad header counts");
  f.n = static_cast<Vertex>(n);
  f.td.bags.assign(bags, {});
  std::vector<char> defined(bags, 0);
  std::vector<Edge> edges;
  std::vector<std::pair<Edge, std::size_t>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] == "b") {
      std::int64_t id = integer(l, 1, "bag id");
      if (id < 1 || id > bags) throw ParseError(l.number, "bag id out of range");
      if (defined[id - 1]) throw ParseError(l.number, "bag defined twice");
      defined[id - 1] = 1;
      VertexSet b;
      for (std::size_t k = 2; k < l.tokens.size(); ++k) b.push_back(vertex(l, k, f.n));
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw ParseError(l.number, "repeated vertex in bag");
      if (static_cast<std::int64_t>(b.size()) > maxb) throw ParseError(l.number, "bag larger than announced");
      f.td.bags[id - 1] = std::move(b);
    } else {
      expect_arity(l, 2);
      std::int64_t a = integer(l, 0, "bag id"), b = integer(l, 1, "bag id");
      if (a < 1 || a > bags || b < 1 || b > bags) throw ParseError(l.number, "tree edge bag id out of range");
      if (a == b) throw ParseError(l.number, "tree edge is a loop");
      Edge e{static_cast<Vertex>(std::min(a, b) - 1), static_cast<Vertex>(std::max(a, b) - 1)};
      edges.push_back(e);
      seen.emplace_back(e, l.number);
    }
  }
  for (std::int64_t i = 0; i < bags; ++i)
    if (!defined[i]) throw ParseError(h.number, "bag " + std::to_string(i + 1) + " is never defined");
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i].first == seen[i - 1].first)
      throw ParseError(std::max(seen[i].second, seen[i - 1].second), "duplicate tree edge");
  if (f.kind == DecompositionKind::Path && edges.empty())
    for (std::int64_t i = 1; i < bags; ++i) edges.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
  f.td.tree = Graph(static_cast<Vertex>(bags), edges);
  if (bags > 0 && !is_tree(f.td.tree)) throw ParseError(h.number, "tree edges do not form a tree");
  return f;
}

TreeDecomposition parse_tree_decomposition(std::istream& in) {
  auto f = parse_decomposition(in);
  if (f.kind == DecompositionKind::TreePartition) throw ParseError(0, "expected a tree decomposition, got tpd");
  return std::move(f.td);
}

TreePartitionDecomposition as_tree_partition(const DecompositionFile& f) {
  if (f.kind != DecompositionKind::TreePartition) throw DecompositionError("not a tree-partition decomposition");
  return {f.td.tree, f.td.bags};
}

PathDecomposition as_path(const DecompositionFile& f) {
  if (f.kind != DecompositionKind::Path) throw DecompositionError("not a path decomposition");
  return {f.td.bags};
}

namespace {

void write_bags(std::ostream& out, const char* tag, const std::vector<VertexSet>& bags, Vertex n) {
  std::size_t mx = 0;
  for (const auto& b : bags) mx = std::max(mx, b.size());
  out << "s " << tag << ' ' << bags.size() << ' ' << mx << ' ' << n << '\n';
  for (std::size_t i = 0; i < bags.size(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
}

}  // namespace

void write_decomposition(std::ostream& out, const TreeDecomposition& td, Vertex n) {
  write_bags(out, "td", td.bags, n);
  for (auto [a, b] : td.tree.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

void write_decomposition(std::ostream& out, const TreePartitionDecomposition& tpd, Vertex n) {
  write_bags(out, "tpd", tpd.bags, n);
  for (auto [a, b] : tpd.tree.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

void write_decomposition(std::ostream& out, const PathDecomposition& pd, Vertex n) {
  write_bags(out, "pd", pd.bags, n);
}

std::uint64_t modulus_of(const PrimeField& f) { return f.modulus(); }
std::uint64_t modulus_of(const RationalField&) { return 0; }

namespace {

template <class F>
SparseMatrix<F> read_entries(const F& f, const std::vector<Line>& lines, Index rows, Index cols) {
  std::vector<Entry<F>> es;
  std::vector<std::pair<std::pair<Index, Index>, std::size_t>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    expect_arity(l, 3);
    std::int64_t r = integer(l, 0, "row"), c = integer(l, 1, "column");
    if (r < 1 || r > rows || c < 1 || c > cols) throw ParseError(l.number, "entry index out of range");
    typename F::Element v;
    try {
      v = f.parse(l.tokens[2]);
    } catch (const std::exception& e) {
      throw ParseError(l.number, std::string("bad value: ") + e.what());
    }
    if (f.is_zero(v)) throw ParseError(l.number, "explicit zero entry");
    es.push_back({static_cast<Index>(r - 1), static_cast<Index>(c - 1), v});
    seen.push_back({{static_cast<Index>(r - 1), static_cast<Index>(c - 1)}, l.number});
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i].first == seen[i - 1].first)
      throw ParseError(std::max(seen[i].second, seen[i - 1].second), "duplicate entry");
  return SparseMatrix<F>(f, rows, cols, std::move(es));
}

}  // namespace

AnyMatrix parse_matrix(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty matrix file");
  const Line& h = lines[0];
  if (h.tokens.size() != 4 || h.tokens[0] != "m") throw ParseError(h.number, "expected header 'm <rows> <cols> <modulus>'");
  std::int64_t rows = integer(h, 1, "row count"), cols = integer(h, 2, "column count");
  std::uint64_t mod = unsigned_integer(h, 3, "modulus");
  if (rows < 0 || cols < 0) throw ParseError(h.number, "negative dimension");
  if (mod == 0) return read_entries(RationalField{}, lines, static_cast<Index>(rows), static_cast<Index>(cols));
  try {
    PrimeField f(mod);
    return read_entries(f, lines, static_cast<Index>(rows), static_cast<Index>(cols));
  } catch (const FieldError& e) {
    throw ParseError(h.number, e.what());
  }
}

template <class F>
void write_matrix(std::ostream& out, const SparseMatrix<F>& m) {
  out << "m " << m.rows() << ' ' << m.cols() << ' ' << modulus_of(m.field()) << '\n';
  for (const auto& e : m.entries()) out << e.row + 1 << ' ' << e.col + 1 << ' ' << m.field().to_string(e.value) << '\n';
}

void write_matrix(std::ostream& out, const AnyMatrix& m) {
  std::visit([&](const auto& x) { write_matrix(out, x); }, m);
}

template <class F>
std::vector<typename F::Element> parse_vector(std::istream& in, const F& f) {
  std::vector<typename F::Element> v;
  for (const auto& l : tokenize(in)) {
    expect_arity(l, 1);
    try {
      v.push_back(f.parse(l.tokens[0]));
    } catch (const std::exception& e) {
      throw ParseError(l.number, std::string("bad value: ") + e.what());
    }
  }
  return v;
}

template <class F>
void write_vector(std::ostream& out, const F& f, std::span<const typename F::Element> v) {
  for (const auto& x : v) out << f.to_string(x) << '\n';
}

template void write_matrix(std::ostream&, const SparseMatrix<PrimeField>&);
template void write_matrix(std::ostream&, const SparseMatrix<RationalField>&);
template std::vector<PrimeField::Element> parse_vector(std::istream&, const PrimeField&);
template std::vector<RationalField::Element> parse_vector(std::istream&, const RationalField&);
template void write_vector(std::ostream&, const PrimeField&, std::span<const PrimeField::Element>);
template void write_vector(std::ostream&, const RationalField&, std::span<const RationalField::Element>);

}  // namespace lowtw::io

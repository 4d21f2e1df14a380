#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lowtw/decomposition.hpp"
#include "lowtw/graph.hpp"
#include "lowtw/sparse_matrix.hpp"

namespace lowtw::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// PACE graph format: "p tw n m" then m lines "u v", 1-based, "c" comments.
// "p dtw n m" holds arcs "u v" of a directed graph.
Graph parse_graph(std::istream& in);
DiGraph parse_digraph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
void write_digraph(std::ostream& out, const DiGraph& g);

enum class DecompositionKind { Tree, TreePartition, Path };

struct DecompositionFile {
  DecompositionKind kind = DecompositionKind::Tree;
  Vertex n = 0;
  TreeDecomposition td;  // tree and bags; also used for tpd and pd contents
};

// "s td|tpd|pd <bags> <max bag> <n>", "b <id> <v...>", tree edges "<id> <id>".
// Path decompositions list bags in path order and need no edge lines.
DecompositionFile parse_decomposition(std::istream& in);
TreeDecomposition parse_tree_decomposition(std::istream& in);
void write_decomposition(std::ostream& out, const TreeDecomposition& td, Vertex n);
void write_decomposition(std::ostream& out, const TreePartitionDecomposition& tpd, Vertex n);
void write_decomposition(std::ostream& out, const PathDecomposition& pd, Vertex n);
TreePartitionDecomposition as_tree_partition(const DecompositionFile& f);
PathDecomposition as_path(const DecompositionFile& f);

using AnyMatrix = std::variant<SparseMatrix<PrimeField>, SparseMatrix<RationalField>>;

// "m <rows> <cols> <modulus|0>" then "<r> <c> <value>" lines, 1-based.
// Modulus 0 selects exact rationals; values may be written num/den.
AnyMatrix parse_matrix(std::istream& in);
template <class F>
void write_matrix(std::ostream& out, const SparseMatrix<F>& m);
void write_matrix(std::ostream& out, const AnyMatrix& m);

// One value per line.
template <class F>
std::vector<typename F::Element> parse_vector(std::istream& in, const F& f);
template <class F>
void write_vector(std::ostream& out, const F& f, std::span<const typename F::Element> v);

std::uint64_t modulus_of(const PrimeField& f);
std::uint64_t modulus_of(const RationalField& f);

}  // namespace lowtw::io

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lowtw/field.hpp"
#include "lowtw/graph.hpp"

namespace lowtw {

using Index = std::int32_t;

class MatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class F>
struct Entry {
  Index row;
  Index col;
  typename F::Element value;
};

// Immutable sparse matrix; entries sorted by (row, col), no stored zeros.
template <class F>
class SparseMatrix {
 public:
  using Element = typename F::Element;

  SparseMatrix() = default;
  SparseMatrix(F field, Index rows, Index cols) : f_(std::move(field)), rows_(rows), cols_(cols) {
    index();
  }
  // Throws MatrixError on out-of-range, duplicate or zero entries.
  SparseMatrix(F field, Index rows, Index cols, std::vector<Entry<F>> entries)
      : f_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_)
        throw MatrixError("entry out of range: " + std::to_string(e.row) + " " + std::to_string(e.col));
      if (f_.is_zero(e.value))
        throw MatrixError("stored zero at " + std::to_string(e.row) + " " + std::to_string(e.col));
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry<F>& a, const Entry<F>& b) {
      return std::pair{a.row, a.col} < std::pair{b.row, b.col};
    });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i].row == entries_[i - 1].row && entries_[i].col == entries_[i - 1].col)
        throw MatrixError("duplicate entry at " + std::to_string(entries_[i].row) + " " +
                          std::to_string(entries_[i].col));
    index();
  }

  // Same as the constructor but drops zero values instead of throwing.
  static SparseMatrix from_triplets(F field, Index rows, Index cols, std::vector<Entry<F>> entries) {
    std::erase_if(entries, [&](const Entry<F>& e) { return field.is_zero(e.value); });
    return SparseMatrix(std::move(field), rows, cols, std::move(entries));
  }

  static SparseMatrix identity(F field, Index n) {
    std::vector<Entry<F>> es;
    for (Index i = 0; i < n; ++i) es.push_back({i, i, field.one()});
    return SparseMatrix(std::move(field), n, n, std::move(es));
  }

  const F& field() const { return f_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry<F>>& entries() const { return entries_; }

  std::span<const Entry<F>> row(Index r) const {
    return {entries_.data() + row_off_[r], entries_.data() + row_off_[r + 1]};
  }
  // Positions into entries() of column c, ascending by row.
  std::span<const std::size_t> col(Index c) const {
    return {col_pos_.data() + col_off_[c], col_pos_.data() + col_off_[c + 1]};
  }

  Element at(Index r, Index c) const {
    auto rr = row(r);
    auto it = std::lower_bound(rr.begin(), rr.end(), c,
                               [](const Entry<F>& e, Index x) { return e.col < x; });
    return it != rr.end() && it->col == c ? it->value : f_.zero();
  }

  std::vector<std::vector<Element>> dense() const {
    std::vector<std::vector<Element>> d(rows_, std::vector<Element>(cols_, f_.zero()));
    for (const auto& e : entries_) d[e.row][e.col] = e.value;
    return d;
  }

  SparseMatrix transpose() const {
    std::vector<Entry<F>> es;
    es.reserve(entries_.size());
    for (const auto& e : entries_) es.push_back({e.col, e.row, e.value});
    return SparseMatrix(f_, cols_, rows_, std::move(es));
  }

  std::vector<Element> apply(std::span<const Element> x) const {
    if (static_cast<Index>(x.size()) != cols_) throw MatrixError("apply: dimension mismatch");
    std::vector<Element> y(rows_, f_.zero());
    for (const auto& e : entries_) y[e.row] = f_.add(y[e.row], f_.mul(e.value, x[e.col]));
    return y;
  }

  bool operator==(const SparseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto &a = entries_[i], &b = o.entries_[i];
      if (a.row != b.row || a.col != b.col || !f_.equal(a.value, b.value)) return false;
    }
    return true;
  }

 private:
  void index() {
    row_off_.assign(static_cast<std::size_t>(rows_) + 1, 0);
    col_off_.assign(static_cast<std::size_t>(cols_) + 1, 0);
    for (const auto& e : entries_) {
      ++row_off_[e.row + 1];
      ++col_off_[e.col + 1];
    }
    for (Index i = 0; i < rows_; ++i) row_off_[i + 1] += row_off_[i];
    for (Index i = 0; i < cols_; ++i) col_off_[i + 1] += col_off_[i];
    col_pos_.assign(entries_.size(), 0);
    std::vector<std::size_t> fill(col_off_.begin(), col_off_.end() - 1);
    for (std::size_t i = 0; i < entries_.size(); ++i) col_pos_[fill[entries_[i].col]++] = i;
  }

  F f_{};
  Index rows_ = 0, cols_ = 0;
  std::vector<Entry<F>> entries_;
  std::vector<std::size_t> row_off_{0}, col_off_{0}, col_pos_;
};

template <class F>
SparseMatrix<F> multiply(const SparseMatrix<F>& a, const SparseMatrix<F>& b) {
  if (a.cols() != b.rows()) throw MatrixError("multiply: dimension mismatch");
  const F& f = a.field();
  std::vector<Entry<F>> out;
  std::vector<typename F::Element> acc(b.cols(), f.zero());
  std::vector<char> touched(b.cols(), 0);
  std::vector<Index> cols;
  for (Index r = 0; r < a.rows(); ++r) {
    cols.clear();
    for (const auto& ea : a.row(r))
      for (const auto& eb : b.row(ea.col)) {
        if (!touched[eb.col]) {
          touched[eb.col] = 1;
          cols.push_back(eb.col);
          acc[eb.col] = f.zero();
        }
        acc[eb.col] = f.add(acc[eb.col], f.mul(ea.value, eb.value));
      }
    std::sort(cols.begin(), cols.end());
    for (Index c : cols) {
      touched[c] = 0;
      if (!f.is_zero(acc[c])) out.push_back({r, c, acc[c]});
    }
  }
  return SparseMatrix<F>(f, a.rows(), b.cols(), std::move(out));
}

// perm[i] = j puts a one at (i, j).
template <class F>
SparseMatrix<F> permutation_matrix(const F& f, std::span<const Index> perm) {
  std::vector<Entry<F>> es;
  for (std::size_t i = 0; i < perm.size(); ++i) es.push_back({static_cast<Index>(i), perm[i], f.one()});
  return SparseMatrix<F>(f, static_cast<Index>(perm.size()), static_cast<Index>(perm.size()), std::move(es));
}

// Rows are vertices 0..rows-1, columns rows..rows+cols-1.
struct BipartiteStructure {
  Graph graph;
  Index rows = 0;
  Index cols = 0;
  bool is_row(Vertex v) const { return v < rows; }
  Vertex row_vertex(Index r) const { return r; }
  Vertex col_vertex(Index c) const { return rows + c; }
};

template <class F>
BipartiteStructure bipartite_graph(const SparseMatrix<F>& m) {
  std::vector<Edge> edges;
  edges.reserve(m.nnz());
  for (const auto& e : m.entries()) edges.emplace_back(e.row, m.rows() + e.col);
  return {Graph(m.rows() + m.cols(), edges), m.rows(), m.cols()};
}

template <class F>
struct Submatrix {
  SparseMatrix<F> matrix;
  std::vector<Index> row_map;
  std::vector<Index> col_map;
};

template <class F>
Submatrix<F> submatrix(const SparseMatrix<F>& m, std::span<const Index> rows, std::span<const Index> cols) {
  std::vector<Index> rl(m.rows(), -1), cl(m.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m.rows()) throw MatrixError("submatrix: row out of range");
    rl[rows[i]] = static_cast<Index>(i);
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] < 0 || cols[i] >= m.cols()) throw MatrixError("submatrix: column out of range");
    cl[cols[i]] = static_cast<Index>(i);
  }
  std::vector<Entry<F>> es;
  for (Index r : rows)
    for (const auto& e : m.row(r))
      if (cl[e.col] >= 0) es.push_back({rl[r], cl[e.col], e.value});
  return {SparseMatrix<F>(m.field(), static_cast<Index>(rows.size()), static_cast<Index>(cols.size()),
                          std::move(es)),
          std::vector<Index>(rows.begin(), rows.end()), std::vector<Index>(cols.begin(), cols.end())};
}

}  // namespace lowtw

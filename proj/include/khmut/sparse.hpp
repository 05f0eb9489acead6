#pragma once

// Sparse matrices over an exact field and their ranks.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "khmut/field.hpp"

namespace khmut {

template <ExactField F>
class SparseMatrix {
 public:
  using Entry = std::pair<std::pair<int, int>, F>;

  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }

  F get(int r, int c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? F::zero() : it->second;
  }
  void set(int r, int c, const F& v) {
    check(r, c);
    if (v.is_zero()) entries_.erase({r, c});
    else entries_[{r, c}] = v;
  }
  void add(int r, int c, const F& v) {
    check(r, c);
    if (v.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace({r, c}, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }
  const std::map<std::pair<int, int>, F>& entries() const { return entries_; }

  /// Product this * other.
  SparseMatrix multiply(const SparseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("SparseMatrix: dimension mismatch in multiply");
    std::vector<std::vector<std::pair<int, F>>> other_rows(other.rows_);
    for (const auto& [rc, v] : other.entries_) other_rows[rc.first].push_back({rc.second, v});
    SparseMatrix out(rows_, other.cols_);
    for (const auto& [rc, v] : entries_)
      for (const auto& [c2, w] : other_rows[rc.second]) out.add(rc.first, c2, v * w);
    return out;
  }

  bool is_zero() const { return entries_.empty(); }

  /// Enlarges the bounds; existing entries are kept.
  void grow(int rows, int cols) {
    if (rows < rows_ || cols < cols_) throw std::invalid_argument("SparseMatrix: grow cannot shrink");
    rows_ = rows;
    cols_ = cols;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, F> entries_;

  void check(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("SparseMatrix: index out of range");
  }
};

namespace detail {

template <ExactField F>
bool is_unit_like(const F& v) {
  return v.is_one() || (-v).is_one();
}

template <ExactField F>
std::size_t dense_rank(std::vector<std::vector<F>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (!m[r][c].is_zero()) {
        if (piv == rows || is_unit_like(m[r][c])) piv = r;
        if (is_unit_like(m[r][c])) break;
      }
    }
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    F inv = m[rank][c].inverse();
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c].is_zero()) continue;
      F f = m[r][c] * inv;
      for (std::size_t k = c; k < cols; ++k)
        if (!m[rank][k].is_zero()) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Rank by sparse row echelon form; rows are processed sparsest first to limit fill-in.
template <ExactField F>
std::size_t sparse_rank(std::vector<std::vector<std::pair<int, F>>> rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::map<int, std::vector<std::pair<int, F>>> pivots;  // leading column -> normalized row
  std::size_t rank = 0;
  std::vector<std::pair<int, F>> scratch;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    while (!row.empty()) {
      auto pit = pivots.find(row.front().first);
      if (pit == pivots.end()) break;
      const F f = row.front().second;  // pivot rows are normalized to leading 1
      scratch.clear();
      const auto& prow = pit->second;
      std::size_t a = 0, b = 0;
      while (a < row.size() || b < prow.size()) {
        if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
          scratch.push_back(row[a++]);
        } else if (a == row.size() || prow[b].first < row[a].first) {
          scratch.push_back({prow[b].first, -(f * prow[b].second)});
          ++b;
        } else {
          F v = row[a].second - f * prow[b].second;
          if (!v.is_zero()) scratch.push_back({row[a].first, v});
          ++a;
          ++b;
        }
      }
      row.swap(scratch);
    }
    if (row.empty()) continue;
    F inv = row.front().second.inverse();
    for (auto& [c, v] : row) v = v * inv;
    pivots.emplace(row.front().first, std::move(row));
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Rank of a set of row vectors (column index, value); dense elimination is
/// used below 64x64.
template <ExactField F>
std::size_t rank_of_rows(std::vector<std::vector<std::pair<int, F>>> rows, int ncols) {
  if (rows.size() < 64 && ncols < 64) {
    std::vector<std::vector<F>> dense(rows.size(), std::vector<F>(static_cast<std::size_t>(ncols), F::zero()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [c, v] : rows[r]) dense[r][static_cast<std::size_t>(c)] += v;
    return detail::dense_rank(std::move(dense));
  }
  return detail::sparse_rank<F>(std::move(rows));
}

template <ExactField F>
std::size_t rank(const SparseMatrix<F>& m) {
  std::vector<std::vector<std::pair<int, F>>> rows(static_cast<std::size_t>(m.rows()));
  for (const auto& [rc, v] : m.entries()) rows[static_cast<std::size_t>(rc.first)].push_back({rc.second, v});
  rows.erase(std::remove_if(rows.begin(), rows.end(), [](const auto& r) { return r.empty(); }), rows.end());
  return rank_of_rows<F>(std::move(rows), m.cols());
}

}  // namespace khmut

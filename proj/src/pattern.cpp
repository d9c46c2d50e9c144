#include "zcnet/pattern.hpp"

#include <algorithm>
#include <stdexcept>

namespace zcnet {

PatternMatrix::PatternMatrix(Index rows, Index cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  for (const Entry& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) {
      throw std::out_of_range("entry (" + std::to_string(e.row + 1) + "," +
                              std::to_string(e.col + 1) + ") outside " + std::to_string(rows_) +
                              "x" + std::to_string(cols_) + " pattern");
    }
  }
  std::sort(entries_.begin(), entries_.end());
  const auto last = std::unique(entries_.begin(), entries_.end());
  duplicates_ = static_cast<Index>(entries_.end() - last);
  entries_.erase(last, entries_.end());
}

PatternMatrix PatternMatrix::identity(Index n) {
  std::vector<Entry> diag;
  diag.reserve(n);
  for (Index i = 0; i < n; ++i) diag.push_back({i, i});
  return {n, n, std::move(diag)};
}

bool PatternMatrix::contains(Index row, Index col) const {
  return std::binary_search(entries_.begin(), entries_.end(), Entry{row, col});
}

PatternMatrix PatternMatrix::permuted(std::span<const Index> row_perm,
                                      std::span<const Index> col_perm) const {
  if (row_perm.size() != rows_ || col_perm.size() != cols_) {
    throw std::invalid_argument("permutation size does not match pattern shape");
  }
  return block(row_perm, col_perm);
}

PatternMatrix PatternMatrix::block(std::span<const Index> row_idx,
                                   std::span<const Index> col_idx) const {
  std::vector<Index> new_row(rows_, rows_);
  std::vector<Index> new_col(cols_, cols_);
  for (Index r = 0; r < row_idx.size(); ++r) new_row.at(row_idx[r]) = r;
  for (Index c = 0; c < col_idx.size(); ++c) new_col.at(col_idx[c]) = c;
  std::vector<Entry> out;
  for (const Entry& e : entries_) {
    if (new_row[e.row] != rows_ && new_col[e.col] != cols_) {
      out.push_back({new_row[e.row], new_col[e.col]});
    }
  }
  return {row_idx.size(), col_idx.size(), std::move(out)};
}

PatternMatrix hcat(const PatternMatrix& a, const PatternMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("hcat: row counts differ (" + std::to_string(a.rows()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
  std::vector<Entry> out(a.entries().begin(), a.entries().end());
  for (const Entry& e : b.entries()) out.push_back({e.row, e.col + a.cols()});
  return {a.rows(), a.cols() + b.cols(), std::move(out)};
}

std::string entry_symbol(char matrix, Entry e) {
  const std::string r = std::to_string(e.row + 1);
  const std::string c = std::to_string(e.col + 1);
  if (r.size() == 1 && c.size() == 1) return std::string(1, matrix) + r + c;
  return std::string(1, matrix) + r + "," + c;
}

}  // namespace zcnet

#ifndef ZCNET_PATTERN_HPP
#define ZCNET_PATTERN_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zcnet {

using Index = std::size_t;

/// Position of a structural nonzero. Indices are 0-based in memory and
/// 1-based in every textual form (files, reports, vertex names).
struct Entry {
  Index row = 0;
  Index col = 0;

  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Zero/nonzero structure of a matrix. Nonzeros are kept sorted row-major
/// without duplicates; the object is immutable after construction.
class PatternMatrix {
 public:
  PatternMatrix() = default;

  /// Builds a pattern from 0-based entries. Out-of-range entries throw
  /// std::out_of_range; duplicates are collapsed and counted.
  PatternMatrix(Index rows, Index cols, std::vector<Entry> entries);

  static PatternMatrix zero(Index rows, Index cols) { return {rows, cols, {}}; }
  static PatternMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  std::span<const Entry> entries() const { return entries_; }
  bool contains(Index row, Index col) const;

  /// Number of duplicate entries dropped by the constructor.
  Index duplicates_collapsed() const { return duplicates_; }

  /// Rows (resp. columns) of the pattern permuted: new row r is old row perm[r].
  PatternMatrix permuted(std::span<const Index> row_perm, std::span<const Index> col_perm) const;

  /// Submatrix on the given (ordered) row and column index lists.
  PatternMatrix block(std::span<const Index> row_idx, std::span<const Index> col_idx) const;

  friend bool operator==(const PatternMatrix& a, const PatternMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Entry> entries_;
  Index duplicates_ = 0;
};

/// [A B]: horizontal concatenation of two patterns with equal row counts.
PatternMatrix hcat(const PatternMatrix& a, const PatternMatrix& b);

/// Renders e.g. "a13" / "b4,1"; multi-digit indices are comma separated.
std::string entry_symbol(char matrix, Entry e);

}  // namespace zcnet

#endif  // ZCNET_PATTERN_HPP

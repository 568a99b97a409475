#pragma once

#include <cstddef>
#include <vector>

#include "commop/rational.hpp"

namespace commop {

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rational& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const Rational& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  /// Appends a row; the first row fixes the column count.
  void push_row(const std::vector<Rational>& row);

  std::vector<Rational> apply(const std::vector<Rational>& v) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Rational> a_;
};

/// Reduced row echelon data produced by fraction-free elimination.
struct RowEchelon {
  std::vector<size_t> pivot_columns;           // ascending
  std::vector<std::vector<Rational>> rows;     // one normalized row per pivot
  size_t cols = 0;
  size_t rank() const { return pivot_columns.size(); }
};

/// Fraction-free (integer-preserving) Gauss-Jordan elimination.
///
/// Each row is first cleared of denominators; every update is an exact
/// integer division by the previous pivot. Pivots are chosen leftmost column
/// first, then smallest remaining row index, so the result is reproducible.
RowEchelon row_echelon(const RatMatrix& m);

/// Kernel basis, one vector per free column in ascending order, with a 1 in
/// its free column. Empty when the matrix has full column rank.
std::vector<std::vector<Rational>> nullspace(const RatMatrix& m);

}  // namespace commop

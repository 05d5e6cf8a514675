#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace allostery {

using Residue = std::uint8_t;
using FpVector = std::vector<Residue>;

struct SparseEntry {
  std::uint32_t column;
  Residue value;
};
// Nonzero entries in increasing column order.
using SparseRow = std::vector<SparseEntry>;

// Arithmetic in F_p for primes p <= 251.
class PrimeField {
 public:
  explicit PrimeField(unsigned p);
  unsigned p() const { return p_; }
  Residue add(Residue a, Residue b) const { return reduce_[a + b]; }
  Residue sub(Residue a, Residue b) const { return reduce_[a + p_ - b]; }
  Residue mul(Residue a, Residue b) const { return reduce_[static_cast<unsigned>(a) * b]; }
  Residue neg(Residue a) const { return a == 0 ? 0 : static_cast<Residue>(p_ - a); }
  Residue inv(Residue a) const { return inverse_[a]; }
  Residue from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  // a += f * b on the columns of b.
  void axpy(FpVector& a, Residue f, const SparseRow& b) const;
  void axpy(FpVector& a, Residue f, const FpVector& b) const;
  Residue dot(const FpVector& a, const FpVector& b) const;
  Residue dot(const FpVector& a, const SparseRow& b) const;

 private:
  unsigned p_;
  std::vector<Residue> reduce_;  // x mod p for x < p^2 + p
  std::vector<Residue> inverse_;
};

SparseRow to_sparse(const FpVector& v);
FpVector to_dense(const SparseRow& row, std::size_t columns);

// Row echelon form over F_p with sparse rows, each row normalized to a
// leading 1 at its pivot column. The quotient F_p^columns / rowspace is
// coordinatized by the non-pivot ("free") columns in increasing order.
class RowEchelon {
 public:
  RowEchelon(unsigned p, std::size_t columns);

  // Adds a row to the span; returns false when it was already dependent.
  bool insert(const SparseRow& row);
  bool insert(const FpVector& row) { return insert(to_sparse(row)); }

  // The unique representative of v modulo the span vanishing on every pivot
  // column.
  FpVector reduce(FpVector v) const;
  // Same for a sparse vector (columns may repeat); the result is sorted and
  // supported on free columns. Cost follows the fill, not the column count.
  SparseRow reduce_sparse(const SparseRow& row) const;
  // Class of a sparse vector as a sparse vector over free-column indices.
  SparseRow project_sparse(const SparseRow& row) const;
  // Coordinates of the class of v on the free columns.
  FpVector project(const FpVector& v) const;
  FpVector project_unit(std::size_t column) const;
  bool in_span(const FpVector& v) const;
  // The functional on F_p^columns that vanishes on the span and takes the
  // given values on the free columns.
  FpVector extend_functional(const FpVector& on_free) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t columns() const { return columns_; }
  std::size_t quotient_dimension() const { return columns_ - rows_.size(); }
  const std::vector<std::size_t>& free_columns() const;
  // Rows in insertion order with their pivot columns.
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const PrimeField& field() const { return field_; }

 private:
  PrimeField field_;
  std::size_t columns_;
  std::vector<SparseRow> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::ptrdiff_t> row_of_column_;
  mutable std::vector<std::size_t> free_columns_;
  mutable std::vector<std::ptrdiff_t> free_index_;
  mutable bool free_dirty_ = true;
  // Class of each pivot column's unit vector, over free-column indices.
  mutable std::vector<SparseRow> pivot_classes_;
  mutable bool classes_dirty_ = true;
  void refresh_free() const;
  void refresh_classes() const;
};

// Rank of a set of dense rows by plain Gaussian elimination on a copy.
std::size_t fp_rank(std::vector<FpVector> rows, unsigned p);

}  // namespace allostery

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamcode/gf.hpp"

namespace streamcode {

class SingularMatrix : public std::runtime_error {
public:
  SingularMatrix(std::size_t column, const std::string& what)
      : std::runtime_error(what), column_(column) {}
  // First column for which no pivot could be found.
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

class GuardExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<ExtElem>;
using IndexList = std::vector<std::size_t>;

// [begin, end)
IndexList index_range(std::size_t begin, std::size_t end);

/// Dense row-major matrix over GF(p^2). Base-field entries are stored embedded.
class FieldMatrix {
public:
  FieldMatrix(QuadExtField field, std::size_t rows, std::size_t cols);
  FieldMatrix(QuadExtField field, std::size_t rows, std::size_t cols, std::vector<ExtElem> entries);

  static FieldMatrix identity(QuadExtField field, std::size_t n);

  const QuadExtField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  ExtElem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const ExtElem& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  ExtElem at(std::size_t r, std::size_t c) const;

  std::span<const ExtElem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;
  const std::vector<ExtElem>& entries() const { return data_; }

  FieldMatrix transpose() const;
  // Order-preserving selection; throws std::out_of_range on a bad index.
  FieldMatrix submatrix(const IndexList& rows, const IndexList& cols) const;
  // Inclusive-exclusive block [r0, r1) x [c0, c1).
  FieldMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

  bool all_in_base_field() const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
  QuadExtField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<ExtElem> data_;
};

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b);

// Row vector times matrix.
Vector multiply(std::span<const ExtElem> v, const FieldMatrix& a);

/// Reduced row echelon form with first-nonzero pivoting.
struct RowEchelon {
  FieldMatrix reduced;
  IndexList pivot_columns;
  std::size_t rank() const { return pivot_columns.size(); }
};

RowEchelon row_reduce(FieldMatrix a);
std::size_t rank(const FieldMatrix& a);

enum class SolveStatus { Unique, Underdetermined, Inconsistent };

struct SolveResult {
  SolveStatus status;
  // A particular solution whenever the system is consistent (free variables set to 0).
  Vector x;
};

// Solves A x = b for a column vector b.
SolveResult solve(const FieldMatrix& a, std::span<const ExtElem> b);

// Throws SingularMatrix naming the first column without a pivot.
FieldMatrix invert(const FieldMatrix& a);

// Basis of {v : v A = 0}; basis size is rows - rank.
std::vector<Vector> left_null_space(const FieldMatrix& a);

// Basis of {x : A x = 0}.
std::vector<Vector> right_null_space(const FieldMatrix& a);

// True iff the row spaces of a and b coincide.
bool same_row_space(const FieldMatrix& a, const FieldMatrix& b);

// Entry (i, j) = (x_i - y_j)^-1 over the base field. Points must be pairwise distinct
// across both lists and fit in GF(p).
FieldMatrix cauchy_matrix(const QuadExtField& field, std::span<const uint32_t> xs,
                          std::span<const uint32_t> ys);

inline constexpr double kMdsSubmatrixGuard = 1e6;

// Number of square submatrices of an r x c matrix: sum_s C(r, s) C(c, s).
double square_submatrix_count(std::size_t rows, std::size_t cols);

// Exhaustive: every square submatrix non-singular. Throws GuardExceeded when the
// submatrix count is above `guard`.
bool is_mds_parity(const FieldMatrix& p, double guard = kMdsSubmatrixGuard);

// Exhaustive MDS check on a k x n generator: any k columns are independent.
// Throws GuardExceeded above `guard` column subsets.
bool is_mds_generator(const FieldMatrix& g, double guard = kMdsSubmatrixGuard);

double binomial(std::size_t n, std::size_t k);

// Calls fn(subset) for every k-subset of [0, n) in lexicographic order; stops early when
// fn returns false. Returns false iff stopped early.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) {
    return true;
  }
  IndexList idx(k);
  for (std::size_t i = 0; i < k; ++i) {
    idx[i] = i;
  }
  while (true) {
    if (!fn(static_cast<const IndexList&>(idx))) {
      return false;
    }
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
      --i;
    }
    if (i == 0) {
      return true;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

} // namespace streamcode

#include "streamcode/matrix.hpp"

#include <algorithm>
#include <set>

namespace streamcode {

namespace {

void require_same_field(const FieldMatrix& a, const FieldMatrix& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw std::invalid_argument(std::string(op) + ": matrices over different fields");
  }
}

} // namespace

IndexList index_range(std::size_t begin, std::size_t end) {
  IndexList out;
  for (std::size_t i = begin; i < end; ++i) {
    out.push_back(i);
  }
  return out;
}

FieldMatrix::FieldMatrix(QuadExtField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols) {}

FieldMatrix::FieldMatrix(QuadExtField field, std::size_t rows, std::size_t cols,
                         std::vector<ExtElem> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("FieldMatrix: entry count does not match dimensions");
  }
  for (const auto& e : data_) {
    if (!field_.contains(e)) {
      throw std::invalid_argument("FieldMatrix: entry outside the field");
    }
  }
}

FieldMatrix FieldMatrix::identity(QuadExtField field, std::size_t n) {
  FieldMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = field.one();
  }
  return m;
}

ExtElem FieldMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw std::out_of_range("FieldMatrix::at: (" + std::to_string(r) + ", " + std::to_string(c) +
                            ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return (*this)(r, c);
}

Vector FieldMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = (*this)(r, c);
  }
  return out;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      t(c, r) = (*this)(r, c);
    }
  }
  return t;
}

FieldMatrix FieldMatrix::submatrix(const IndexList& rows, const IndexList& cols) const {
  FieldMatrix out(field_, rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) {
      throw std::out_of_range("submatrix: row index " + std::to_string(rows[i]) + " >= " +
                              std::to_string(rows_));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] >= cols_) {
        throw std::out_of_range("submatrix: column index " + std::to_string(cols[j]) + " >= " +
                                std::to_string(cols_));
      }
      out(i, j) = (*this)(rows[i], cols[j]);
    }
  }
  return out;
}

FieldMatrix FieldMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0,
                               std::size_t c1) const {
  return submatrix(index_range(r0, r1), index_range(c0, c1));
}

bool FieldMatrix::all_in_base_field() const {
  return std::all_of(data_.begin(), data_.end(), [](ExtElem e) { return e.b == 0; });
}

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "multiply");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("multiply: inner dimensions differ");
  }
  const auto& f = a.field();
  FieldMatrix out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const ExtElem s = a(i, t);
      if (QuadExtField::is_zero(s)) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = f.add(out(i, j), f.mul(s, b(t, j)));
      }
    }
  }
  return out;
}

FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("add: dimensions differ");
  }
  FieldMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = a.field().add(a(i, j), b(i, j));
    }
  }
  return out;
}

FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "hstack");
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("hstack: row counts differ");
  }
  FieldMatrix out(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = a(i, j);
    }
    for (std::size_t j = 0; j < b.cols(); ++j) {
      out(i, a.cols() + j) = b(i, j);
    }
  }
  return out;
}

FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "vstack");
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("vstack: column counts differ");
  }
  std::vector<ExtElem> entries = a.entries();
  entries.insert(entries.end(), b.entries().begin(), b.entries().end());
  return FieldMatrix(a.field(), a.rows() + b.rows(), a.cols(), std::move(entries));
}

Vector multiply(std::span<const ExtElem> v, const FieldMatrix& a) {
  if (v.size() != a.rows()) {
    throw std::invalid_argument("multiply: vector length does not match matrix rows");
  }
  const auto& f = a.field();
  Vector out(a.cols(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (QuadExtField::is_zero(v[i])) {
      continue;
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[j] = f.add(out[j], f.mul(v[i], a(i, j)));
    }
  }
  return out;
}

RowEchelon row_reduce(FieldMatrix a) {
  const auto f = a.field();
  IndexList pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && QuadExtField::is_zero(a(pivot, col))) {
      ++pivot;
    }
    if (pivot == a.rows()) {
      continue;
    }
    if (pivot != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::swap(a(pivot, j), a(row, j));
      }
    }
    const ExtElem scale = f.inv(a(row, col));
    for (std::size_t j = col; j < a.cols(); ++j) {
      a(row, j) = f.mul(a(row, j), scale);
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || QuadExtField::is_zero(a(i, col))) {
        continue;
      }
      const ExtElem factor = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) {
        a(i, j) = f.sub(a(i, j), f.mul(factor, a(row, j)));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

std::size_t rank(const FieldMatrix& a) { return row_reduce(a).rank(); }

SolveResult solve(const FieldMatrix& a, std::span<const ExtElem> b) {
  if (b.size() != a.rows()) {
    throw std::invalid_argument("solve: right-hand side length does not match rows");
  }
  const auto& f = a.field();
  FieldMatrix aug(f, a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      aug(i, j) = a(i, j);
    }
    aug(i, a.cols()) = b[i];
  }
  const RowEchelon ech = row_reduce(std::move(aug));
  if (!ech.pivot_columns.empty() && ech.pivot_columns.back() == a.cols()) {
    return {SolveStatus::Inconsistent, {}};
  }
  Vector x(a.cols(), f.zero());
  for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r) {
    x[ech.pivot_columns[r]] = ech.reduced(r, a.cols());
  }
  const auto status =
      ech.rank() == a.cols() ? SolveStatus::Unique : SolveStatus::Underdetermined;
  return {status, std::move(x)};
}

FieldMatrix invert(const FieldMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("invert: matrix is not square");
  }
  const std::size_t n = a.rows();
  const RowEchelon ech = row_reduce(hstack(a, FieldMatrix::identity(a.field(), n)));
  for (std::size_t c = 0; c < n; ++c) {
    if (c >= ech.pivot_columns.size() || ech.pivot_columns[c] != c) {
      throw SingularMatrix(c, "invert: singular matrix, no pivot in column " + std::to_string(c));
    }
  }
  return ech.reduced.block(0, n, n, 2 * n);
}

std::vector<Vector> right_null_space(const FieldMatrix& a) {
  const auto& f = a.field();
  const RowEchelon ech = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : ech.pivot_columns) {
    is_pivot[c] = true;
  }
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) {
      continue;
    }
    Vector v(a.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r) {
      v[ech.pivot_columns[r]] = f.neg(ech.reduced(r, free));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> left_null_space(const FieldMatrix& a) { return right_null_space(a.transpose()); }

bool same_row_space(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.cols()) {
    return false;
  }
  const std::size_t ra = rank(a);
  return ra == rank(b) && ra == rank(vstack(a, b));
}

FieldMatrix cauchy_matrix(const QuadExtField& field, std::span<const uint32_t> xs,
                          std::span<const uint32_t> ys) {
  std::set<uint32_t> seen;
  for (auto v : xs) {
    if (v >= field.p() || !seen.insert(v).second) {
      throw std::invalid_argument("cauchy_matrix: evaluation point " + std::to_string(v) +
                                  " repeated or outside GF(p)");
    }
  }
  for (auto v : ys) {
    if (v >= field.p() || !seen.insert(v).second) {
      throw std::invalid_argument("cauchy_matrix: evaluation point " + std::to_string(v) +
                                  " repeated or outside GF(p)");
    }
  }
  const PrimeField base = field.base();
  FieldMatrix out(field, xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const FieldElem diff = base.sub(FieldElem{xs[i]}, FieldElem{ys[j]});
      out(i, j) = field.embed(base.inv(diff));
    }
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) {
    return 0.0;
  }
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return out;
}

double square_submatrix_count(std::size_t rows, std::size_t cols) {
  double total = 0.0;
  for (std::size_t s = 1; s <= std::min(rows, cols); ++s) {
    total += binomial(rows, s) * binomial(cols, s);
  }
  return total;
}

bool is_mds_parity(const FieldMatrix& p, double guard) {
  const double count = square_submatrix_count(p.rows(), p.cols());
  if (count > guard) {
    throw GuardExceeded("is_mds_parity: " + std::to_string(static_cast<long long>(count)) +
                        " square submatrices exceed the guard");
  }
  for (std::size_t s = 1; s <= std::min(p.rows(), p.cols()); ++s) {
    bool ok = for_each_subset(p.rows(), s, [&](const IndexList& rows) {
      return for_each_subset(p.cols(), s, [&](const IndexList& cols) {
        return rank(p.submatrix(rows, cols)) == s;
      });
    });
    if (!ok) {
      return false;
    }
  }
  return true;
}

bool is_mds_generator(const FieldMatrix& g, double guard) {
  const std::size_t k = g.rows();
  if (k > g.cols()) {
    return false;
  }
  if (binomial(g.cols(), k) > guard) {
    throw GuardExceeded("is_mds_generator: column subset count exceeds the guard");
  }
  const IndexList all_rows = index_range(0, k);
  return for_each_subset(g.cols(), k, [&](const IndexList& cols) {
    return rank(g.submatrix(all_rows, cols)) == k;
  });
}

} // namespace streamcode

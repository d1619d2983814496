#pragma once

#include <cstdint>
#include <vector>

namespace bizeta {

// Dense integer matrix, row-major. Arithmetic is overflow-checked.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>> &rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<std::int64_t> row(std::size_t i) const;
  std::vector<std::int64_t> col(std::size_t j) const;
  IntMatrix transpose() const;
  IntMatrix select_cols(const std::vector<std::size_t> &cols) const;

  bool operator==(const IntMatrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b);
std::vector<std::int64_t> operator*(const IntMatrix &a, const std::vector<std::int64_t> &v);

struct HermiteForm {
  IntMatrix form;       // U * A, row echelon, positive pivots, reduced above pivots
  IntMatrix transform;  // unimodular U
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

// Row-style Hermite normal form with unimodular transform.
HermiteForm hermite_form(const IntMatrix &a);

// Rank over Q.
std::size_t rank_over_q(const IntMatrix &a);

// Saturated basis (as columns) of {x in Z^cols : A x = 0}.
IntMatrix integer_kernel(const IntMatrix &a);

// Nonzero invariant factors d_1 | d_2 | ... of A over Z.
std::vector<std::int64_t> invariant_factors(const IntMatrix &a);

// True when the columns of B span a saturated sublattice of Z^rows with
// rank equal to the number of columns.
bool is_saturated_basis(const IntMatrix &b);

// Unimodular n x n matrix whose leading columns are B (B must be saturated).
IntMatrix extend_to_basis(const IntMatrix &b);

IntMatrix unimodular_inverse(const IntMatrix &u);

}  // namespace bizeta

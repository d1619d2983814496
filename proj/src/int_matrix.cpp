#include "bizeta/int_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bizeta/numeric.hpp"

namespace bizeta {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>> &rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::int64_t> IntMatrix::row(std::size_t i) const {
  return std::vector<std::int64_t>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<std::int64_t> IntMatrix::col(std::size_t j) const {
  std::vector<std::int64_t> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::select_cols(const std::vector<std::size_t> &cols) const {
  IntMatrix out(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols.size(); ++k) out(i, k) = (*this)(i, cols[k]);
  return out;
}

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked_add(c(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return c;
}

std::vector<std::int64_t> operator*(const IntMatrix &a, const std::vector<std::int64_t> &v) {
  if (a.cols() != v.size()) throw std::invalid_argument("IntMatrix * vector: shape mismatch");
  std::vector<std::int64_t> out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] = checked_add(out[i], checked_mul(a(i, j), v[j]));
  return out;
}

namespace {

struct ExtGcd {
  std::int64_t g, x, y;  // g = x*a + y*b, g >= 0
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// rows (i, k) <- [[x, y], [-b/g, a/g]] * rows (i, k), a unimodular combination.
void combine_rows(IntMatrix &m, std::size_t i, std::size_t k, std::int64_t x, std::int64_t y, std::int64_t u,
                  std::int64_t v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::int64_t ri = m(i, j), rk = m(k, j);
    m(i, j) = checked_add(checked_mul(x, ri), checked_mul(y, rk));
    m(k, j) = checked_add(checked_mul(u, ri), checked_mul(v, rk));
  }
}

void add_row_multiple(IntMatrix &m, std::size_t target, std::size_t source, std::int64_t factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(target, j) = checked_add(m(target, j), checked_mul(factor, m(source, j)));
}

void negate_row(IntMatrix &m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

void swap_rows(IntMatrix &m, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(i, j), m(k, j));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

HermiteForm hermite_form(const IntMatrix &a) {
  HermiteForm out{a, IntMatrix::identity(a.rows()), 0, {}};
  IntMatrix &h = out.form;
  IntMatrix &u = out.transform;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        swap_rows(h, r, i);
        swap_rows(u, r, i);
        continue;
      }
      auto [g, x, y] = ext_gcd(h(r, c), h(i, c));
      std::int64_t p = h(r, c) / g, q = h(i, c) / g;
      combine_rows(h, r, i, x, y, -q, p);
      combine_rows(u, r, i, x, y, -q, p);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      std::int64_t f = -floor_div(h(i, c), h(r, c));
      add_row_multiple(h, i, r, f);
      add_row_multiple(u, i, r, f);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

std::size_t rank_over_q(const IntMatrix &a) {
  std::vector<std::vector<BigInt>> m(a.rows(), std::vector<BigInt>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      for (std::size_t j = c + 1; j < a.cols(); ++j)
        m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

IntMatrix integer_kernel(const IntMatrix &a) {
  HermiteForm hf = hermite_form(a.transpose());
  std::size_t n = a.cols();
  std::size_t k = n - hf.rank;
  IntMatrix rows(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) rows(i, j) = hf.transform(hf.rank + i, j);
  // Canonical representative of the kernel basis.
  HermiteForm canon = hermite_form(rows);
  IntMatrix basis(n, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(j, i) = canon.form(i, j);
  return basis;
}

std::vector<std::int64_t> invariant_factors(const IntMatrix &a) {
  IntMatrix m = a;
  for (int guard = 0; guard < 64; ++guard) {
    HermiteForm hf = hermite_form(m);
    IntMatrix trimmed(hf.rank, m.cols());
    for (std::size_t i = 0; i < hf.rank; ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) trimmed(i, j) = hf.form(i, j);
    m = trimmed.transpose();
    bool diagonal = true;
    for (std::size_t i = 0; i < m.rows() && diagonal; ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (i != j && m(i, j) != 0) {
          diagonal = false;
          break;
        }
    if (!diagonal) continue;
    std::vector<std::int64_t> d;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
      if (m(i, i) != 0) d.push_back(m(i, i) < 0 ? -m(i, i) : m(i, i));
    // Enforce the divisibility chain.
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        std::int64_t g = std::gcd(d[i], d[j]);
        std::int64_t l = checked_mul(d[i] / g, d[j]);
        d[i] = g;
        d[j] = l;
      }
    return d;
  }
  throw std::runtime_error("invariant_factors: did not converge");
}

bool is_saturated_basis(const IntMatrix &b) {
  HermiteForm hf = hermite_form(b);
  if (hf.rank != b.cols()) return false;
  for (std::size_t i = 0; i < b.cols(); ++i)
    if (hf.form(i, i) != 1) return false;
  return true;
}

IntMatrix extend_to_basis(const IntMatrix &b) {
  HermiteForm hf = hermite_form(b);
  for (std::size_t i = 0; i < b.cols(); ++i)
    if (hf.rank != b.cols() || hf.form(i, i) != 1)
      throw std::invalid_argument("extend_to_basis: columns are not a saturated basis");
  return unimodular_inverse(hf.transform);
}

IntMatrix unimodular_inverse(const IntMatrix &u) {
  HermiteForm hf = hermite_form(u);
  if (!(hf.form == IntMatrix::identity(u.rows())))
    throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
  return hf.transform;
}

}  // namespace bizeta

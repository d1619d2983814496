#include <gtest/gtest.h>

#include <random>

#include "bizeta/int_matrix.hpp"

using namespace bizeta;

namespace {

IntMatrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST(IntMatrix, HermiteTransformReproducesForm) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a = random_matrix(rng, 1 + trial % 4, 1 + (trial / 4) % 5);
    HermiteForm h = hermite_form(a);
    EXPECT_EQ(h.transform * a, h.form);
    EXPECT_EQ(h.rank, rank_over_q(a));
    for (std::size_t k = 0; k < h.rank; ++k) {
      std::size_t c = h.pivot_cols[k];
      EXPECT_GT(h.form(k, c), 0);
      for (std::size_t i = 0; i < k; ++i) {
        EXPECT_GE(h.form(i, c), 0);
        EXPECT_LT(h.form(i, c), h.form(k, c));
      }
    }
    // Unimodular: it has an integral inverse.
    IntMatrix inv = unimodular_inverse(h.transform);
    EXPECT_EQ(inv * h.transform, IntMatrix::identity(a.rows()));
  }
}

TEST(IntMatrix, KernelIsSaturatedAndAnnihilated) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix a = random_matrix(rng, 2, 5);
    IntMatrix k = integer_kernel(a);
    EXPECT_EQ(k.cols(), 5 - rank_over_q(a));
    IntMatrix zero(a.rows(), k.cols());
    EXPECT_EQ(a * k, zero);
    if (k.cols() > 0) EXPECT_TRUE(is_saturated_basis(k));
  }
}

TEST(IntMatrix, InvariantFactors) {
  EXPECT_EQ(invariant_factors(IntMatrix::from_rows({{2, 4}, {6, 8}}, 2)), (std::vector<std::int64_t>{2, 4}));
  EXPECT_EQ(invariant_factors(IntMatrix::from_rows({{0, 3}, {-3, 0}}, 2)), (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(invariant_factors(IntMatrix::from_rows({{2, 0}, {0, 3}}, 2)), (std::vector<std::int64_t>{1, 6}));
  EXPECT_TRUE(invariant_factors(IntMatrix(2, 2)).empty());
}

TEST(IntMatrix, SaturationAndExtension) {
  IntMatrix b = IntMatrix::from_rows({{1}, {2}, {3}}, 1);
  EXPECT_TRUE(is_saturated_basis(b));
  IntMatrix u = extend_to_basis(b);
  EXPECT_EQ(u.col(0), b.col(0));
  EXPECT_EQ(unimodular_inverse(u) * u, IntMatrix::identity(3));
  EXPECT_FALSE(is_saturated_basis(IntMatrix::from_rows({{2}, {0}}, 1)));
}

TEST(IntMatrix, OverflowIsChecked) {
  IntMatrix a = IntMatrix::from_rows({{std::int64_t{1} << 62}}, 1);
  IntMatrix b = IntMatrix::from_rows({{4}}, 1);
  EXPECT_THROW(a * b, std::overflow_error);
}

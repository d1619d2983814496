#include <gtest/gtest.h>

#include <random>

#include "bizeta/error.hpp"
#include "bizeta/local_ring.hpp"

using namespace bizeta;

namespace {

RingMatrix random_ring_matrix(const GaloisRing &R, std::mt19937_64 &rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<std::uint64_t> d(0, R.size() - 1);
  RingMatrix m(r, c);
  for (auto &x : m.a) x = static_cast<GaloisRing::Elem>(d(rng));
  return m;
}

// Random element with valuation at least k.
GaloisRing::Elem sparse_elem(const GaloisRing &R, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, R.size() - 1);
  std::uniform_int_distribution<int> k(0, R.N());
  return R.mul(R.p_power(k(rng)), static_cast<GaloisRing::Elem>(d(rng)));
}

}  // namespace

TEST(GaloisRing, FieldOfNineElements) {
  GaloisRing R = GaloisRing::make(3, 1, 2);
  EXPECT_EQ(R.modulus(), (std::vector<std::uint64_t>{1, 0}));  // t^2 + 1
  GaloisRing::Elem t = R.t_power(1);
  EXPECT_EQ(R.mul(t, t), R.from_int(2));
  EXPECT_EQ(R.size(), 9u);
  EXPECT_EQ(R.unit_count(), 8u);
}

TEST(GaloisRing, UnitsOfZ9) {
  GaloisRing R = GaloisRing::make(3, 2, 1);
  EXPECT_EQ(R.unit_count(), 6u);
  int units = 0;
  for (GaloisRing::Elem x = 0; x < R.size(); ++x) units += R.is_unit(x);
  EXPECT_EQ(units, 6);
}

TEST(GaloisRing, Valuations) {
  GaloisRing Z27 = GaloisRing::make(3, 3, 1);
  EXPECT_EQ(Z27.valuation(Z27.from_int(6)), 1);
  EXPECT_EQ(Z27.valuation(Z27.zero()), 3);
  GaloisRing R = GaloisRing::make(3, 2, 2);
  EXPECT_EQ(R.valuation(R.scale(3, R.t_power(1))), 1);
}

TEST(GaloisRing, RingAxiomsAndInverses) {
  for (auto [p, N, f] : {std::tuple{2ull, 3, 1}, {3ull, 2, 2}, {5ull, 1, 2}, {3ull, 3, 1}, {2ull, 2, 3}}) {
    GaloisRing R = GaloisRing::make(p, N, f);
    std::mt19937_64 rng(p * 100 + N * 10 + f);
    std::uniform_int_distribution<std::uint64_t> d(0, R.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
      auto x = static_cast<GaloisRing::Elem>(d(rng)), y = static_cast<GaloisRing::Elem>(d(rng)),
           z = static_cast<GaloisRing::Elem>(d(rng));
      EXPECT_EQ(R.mul(x, R.add(y, z)), R.add(R.mul(x, y), R.mul(x, z)));
      EXPECT_EQ(R.mul(R.mul(x, y), z), R.mul(x, R.mul(y, z)));
      EXPECT_EQ(R.mul(x, y), R.mul(y, x));
      EXPECT_EQ(R.add(x, R.neg(x)), R.zero());
      EXPECT_EQ(R.from_coeffs(R.coeffs(x)), x);
      EXPECT_EQ(R.valuation(R.mul(x, y)), std::min(N, R.valuation(x) + R.valuation(y)));
      if (R.is_unit(x)) EXPECT_EQ(R.mul(x, R.inverse(x)), R.one());
      int v = R.valuation(x);
      if (v < N) EXPECT_EQ(R.mul(R.p_power(v), R.divide_by_p_power(x, v)), x);
    }
    // The unit group has order q^{N-1}(q-1).
    EXPECT_EQ(R.pow(R.from_int(1 + static_cast<std::int64_t>(p)), R.unit_count()), R.one());
  }
}

TEST(GaloisRing, IrreducibleModulusChoice) {
  EXPECT_EQ(first_irreducible(2, 2), (std::vector<std::uint64_t>{1, 1}));     // t^2 + t + 1
  EXPECT_EQ(first_irreducible(2, 3), (std::vector<std::uint64_t>{1, 1, 0}));  // t^3 + t + 1
  EXPECT_EQ(first_irreducible(5, 2), (std::vector<std::uint64_t>{2, 0}));     // t^2 + 2
}

TEST(GaloisRing, RejectsBadParameters) {
  EXPECT_THROW(GaloisRing::make(4, 1, 1), Error);
  EXPECT_THROW(GaloisRing::make(3, 0, 1), Error);
}

TEST(SmithForm, SpecExamples) {
  GaloisRing R = GaloisRing::make(3, 2, 1);
  RingMatrix m(2, 2);
  m(0, 0) = R.from_int(3);
  m(1, 1) = R.one();
  EXPECT_EQ(smith_normal_form(R, m).type.valuations, (std::vector<int>{0, 1}));

  GaloisRing Z27 = GaloisRing::make(3, 3, 1);
  RingMatrix a(2, 2);
  a(0, 1) = Z27.from_int(3);
  a(1, 0) = Z27.from_int(-3);
  EXPECT_EQ(smith_normal_form(Z27, a).type.valuations, (std::vector<int>{1, 1}));

  RingMatrix zero(2, 1);
  ElementaryDivisorType t = smith_normal_form(R, zero).type;
  EXPECT_TRUE(t.valuations.empty());
  EXPECT_EQ(t.deficiency, 1);
  EXPECT_EQ(t.saturated(2), (std::vector<int>{2}));
}

TEST(SmithForm, TransformsAreInvertibleAndDiagonalize) {
  for (auto [p, N, f] : {std::tuple{3ull, 2, 1}, {2ull, 3, 1}, {3ull, 2, 2}, {5ull, 2, 1}}) {
    GaloisRing R = GaloisRing::make(p, N, f);
    std::mt19937_64 rng(p + 17 * N + 131 * f);
    for (int trial = 0; trial < 500; ++trial) {
      std::size_t rows = 1 + trial % 3, cols = 1 + (trial / 3) % 4;
      RingMatrix m = trial % 2 ? random_ring_matrix(R, rng, rows, cols) : RingMatrix(rows, cols);
      if (trial % 2 == 0)
        for (auto &x : m.a) x = sparse_elem(R, rng);
      SmithForm s = smith_normal_form(R, m);
      EXPECT_TRUE(is_invertible(R, s.U));
      EXPECT_TRUE(is_invertible(R, s.V));
      EXPECT_EQ(multiply(R, multiply(R, s.U, m), s.V), s.D);
      std::vector<int> diag;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          if (i != j) EXPECT_EQ(s.D(i, j), 0u);
          else diag.push_back(R.valuation(s.D(i, j)));
      std::sort(diag.begin(), diag.end());
      EXPECT_EQ(diag, s.type.saturated(N));
      EXPECT_EQ(elementary_divisor_type(R, m), s.type);
      EXPECT_EQ(s.type.valuations.size() + s.type.deficiency, std::min(rows, cols));
    }
  }
}

TEST(SmithForm, ImageExponentCountsImage) {
  GaloisRing R = GaloisRing::make(2, 2, 1);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    RingMatrix m = random_ring_matrix(R, rng, 2, 2);
    std::set<std::pair<std::uint32_t, std::uint32_t>> image;
    for (GaloisRing::Elem x = 0; x < 4; ++x)
      for (GaloisRing::Elem y = 0; y < 4; ++y)
        image.insert({R.add(R.mul(m(0, 0), x), R.mul(m(0, 1), y)), R.add(R.mul(m(1, 0), x), R.mul(m(1, 1), y))});
    int e = image_exponent(elementary_divisor_type(R, m), 2);
    EXPECT_EQ(image.size(), std::size_t{1} << e);
  }
}

TEST(SmithForm, MatrixJsonRoundTrip) {
  GaloisRing R = GaloisRing::make(3, 2, 2);
  std::mt19937_64 rng(9);
  RingMatrix m = random_ring_matrix(R, rng, 2, 3);
  EXPECT_EQ(matrix_from_json(R, matrix_to_json(R, m)), m);
}

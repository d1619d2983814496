#include <gtest/gtest.h>

#include "bizeta/error.hpp"
#include "bizeta/zeta_series.hpp"
#include "test_util.hpp"

using namespace bizeta;
using bizeta::testing::corpus_lattice;

namespace {

BivariateDirichletPolynomial poly(std::uint64_t q, std::map<TermKey, std::uint64_t> terms) {
  BivariateDirichletPolynomial z;
  z.base_q = q;
  z.terms = std::move(terms);
  return z;
}

LocalFactorRequest request(std::uint64_t p, int N_max, ZetaKind kind, Method method = Method::Brute, int f = 1) {
  LocalFactorRequest r;
  r.p = p;
  r.N_max = N_max;
  r.kind = kind;
  r.method = method;
  r.f = f;
  return r;
}

}  // namespace

TEST(LocalFactor, AbelianCc) {
  auto z = local_factor_truncated(corpus_lattice("abelian2"), request(5, 2, ZetaKind::Cc));
  EXPECT_EQ(z, poly(5, {{{0, 0}, 1}, {{0, 1}, 25}, {{0, 2}, 625}}));
}

TEST(LocalFactor, HeisenbergIrr) {
  auto z = local_factor_truncated(corpus_lattice("heisenberg"), request(3, 1, ZetaKind::Irr));
  EXPECT_EQ(z, poly(3, {{{0, 0}, 1}, {{0, 1}, 9}, {{1, 1}, 2}}));
}

TEST(LocalFactor, HeisenbergCcText) {
  auto z = local_factor_truncated(corpus_lattice("heisenberg"), request(3, 2, ZetaKind::Cc, Method::Linear));
  EXPECT_EQ(z.coeff(0, 1), 3u);
  EXPECT_EQ(z.coeff(1, 1), 8u);
  EXPECT_EQ(z.coeff(0, 2), 9u);
  EXPECT_EQ(z.coeff(1, 2), 24u);
  EXPECT_EQ(z.coeff(2, 2), 72u);
  std::string text = render_text(z);
  EXPECT_NE(text.find("3 + 8*3^{-s1}"), std::string::npos) << text;
  EXPECT_NE(text.find("9 + 24*3^{-s1} + 72*9^{-s1}"), std::string::npos) << text;
}

TEST(LocalFactor, ClassNumberSpecialization) {
  auto z = local_factor_truncated(corpus_lattice("heisenberg"), request(3, 2, ZetaKind::Cc));
  auto u = specialize_class_number(z);
  EXPECT_EQ(u.base_q, 3u);
  EXPECT_EQ(u.terms, (std::map<int, std::uint64_t>{{0, 1}, {1, 11}, {2, 105}}));
}

TEST(LocalFactor, IrrAndCcGiveTheSameClassNumber) {
  for (const char *name : {"heisenberg", "free_class2_3gen", "heisenberg_plus_z"}) {
    auto cc = specialize_class_number(local_factor_truncated(corpus_lattice(name), request(3, 1, ZetaKind::Cc)));
    auto irr = specialize_class_number(
        local_factor_truncated(corpus_lattice(name), request(3, 1, ZetaKind::Irr, Method::Linear)));
    EXPECT_EQ(cc, irr) << name;
  }
}

TEST(LocalFactor, InadmissiblePrimeRejected) {
  EXPECT_THROW(local_factor_truncated(corpus_lattice("heisenberg"), request(2, 1, ZetaKind::Cc)), Error);
}

TEST(Euler, AbelianTwoPrimes) {
  EulerRequest req;
  auto g = euler_assemble(corpus_lattice("abelian2"), std::vector<std::uint64_t>{2, 3}, req);
  std::map<GlobalKey, BigInt> expect{{{1, 1}, 1}, {{1, 2}, 4}, {{1, 3}, 9}, {{1, 6}, 36}};
  EXPECT_EQ(g.terms, expect);
}

TEST(Euler, HeisenbergNormFifteen) {
  EulerRequest req;
  auto g = euler_assemble(corpus_lattice("heisenberg"), std::vector<std::uint64_t>{3, 5}, req);
  // (3 + 8*3^{-s1}) (5 + 24*5^{-s1}) at norm 15.
  EXPECT_EQ(g.terms.at({1, 15}), 15);
  EXPECT_EQ(g.terms.at({3, 15}), 40);
  EXPECT_EQ(g.terms.at({5, 15}), 72);
  EXPECT_EQ(g.terms.at({15, 15}), 192);
  // Multiplicativity: the product of the two local series.
  auto a = to_global(local_factor_truncated(corpus_lattice("heisenberg"), request(3, 1, ZetaKind::Cc)), 3);
  auto b = to_global(local_factor_truncated(corpus_lattice("heisenberg"), request(5, 1, ZetaKind::Cc)), 5);
  EXPECT_EQ(multiply(a, b), g);
}

TEST(Euler, SkipsExcludedPrimes) {
  EulerRequest req;
  auto g = euler_assemble(corpus_lattice("heisenberg"), std::uint64_t{5}, req);
  EXPECT_EQ(g.primes, (std::vector<std::uint64_t>{3, 5}));
  ASSERT_EQ(g.skipped.size(), 1u);
  EXPECT_EQ(g.skipped[0].p, 2u);
}

TEST(Fit, InterpolationIsExact) {
  std::vector<Rational> x{3, 5, 7}, y{11, 29, 55};
  QPolynomial law = interpolate(x, y);
  EXPECT_EQ(law, (QPolynomial{{-1, 1, 1}}));
  EXPECT_EQ(law(9), 89);
}

TEST(Fit, HeisenbergClassNumberLaw) {
  FitRequest req;
  req.degree = 2;
  auto law = fit_coefficient_law(corpus_lattice("heisenberg"), {3, 5, 7, 11}, req);
  EXPECT_EQ(law.specialized.at(1), (QPolynomial{{-1, 1, 1}}));
  EXPECT_EQ(law.specialized.at(1)(9), 89);
  // Direct enumeration over F_9.
  auto z = local_factor_truncated(corpus_lattice("heisenberg"), request(3, 1, ZetaKind::Cc, Method::Linear, 2));
  for (auto [key, value] : law.evaluate(9)) EXPECT_EQ(value, Rational(z.coeff(key.j, key.m)));
}

TEST(Euler, EmptyPrimeSetIsOne) {
  EulerRequest req;
  auto g = euler_assemble(corpus_lattice("heisenberg"), std::vector<std::uint64_t>{}, req);
  EXPECT_EQ(g.terms, series_one().terms);
}

TEST(Euler, ExactRangeStopsBeforeFirstMissingNorm) {
  EulerRequest req;
  auto g = euler_assemble(corpus_lattice("abelian2"), std::vector<std::uint64_t>{2, 3}, req);
  EXPECT_EQ(g.exact_up_to, 3);  // 4 = 2^2 needs level 2
}

TEST(LocalFactor, ConstantTermOneAndNonnegative) {
  for (const char *name : {"heisenberg", "heisenberg_plus_z", "filiform_class3"})
    for (ZetaKind k : {ZetaKind::Cc, ZetaKind::Irr}) {
      auto z = local_factor_truncated(corpus_lattice(name), request(5, 1, k));
      EXPECT_EQ(z.coeff(0, 0), 1u) << name;
      for (auto [key, c] : z.terms) EXPECT_GT(c, 0u);
    }
}

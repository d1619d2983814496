#include <gtest/gtest.h>

#include <random>

#include "bizeta/orbit_linear.hpp"
#include "bizeta/parallel.hpp"
#include "bizeta/zeta_series.hpp"
#include "test_util.hpp"

using namespace bizeta;
using bizeta::testing::corpus_lattice;

namespace {

using Counts = std::map<std::uint64_t, std::uint64_t>;

ElementaryDivisorType type(std::vector<int> v, int deficiency = 0) { return {std::move(v), deficiency}; }

CommutatorMatrices matrices(const std::string &name) { return commutator_matrices(profile(corpus_lattice(name))); }

}  // namespace

TEST(OrbitLinear, HeisenbergAModThree) {
  auto d = divisor_distribution(matrices("heisenberg"), Which::A, GaloisRing::make(3, 1, 1));
  std::map<ElementaryDivisorType, std::uint64_t> expect{{type({}, 1), 1}, {type({0}), 8}};
  EXPECT_EQ(d.counts, expect);
  EXPECT_EQ(d.total(), 9u);
}

TEST(OrbitLinear, HeisenbergBModThree) {
  auto d = divisor_distribution(matrices("heisenberg"), Which::B, GaloisRing::make(3, 1, 1));
  std::map<ElementaryDivisorType, std::uint64_t> expect{{type({}, 2), 1}, {type({0, 0}), 2}};
  EXPECT_EQ(d.counts, expect);
}

TEST(OrbitLinear, HeisenbergAModNine) {
  auto d = divisor_distribution(matrices("heisenberg"), Which::A, GaloisRing::make(3, 2, 1));
  std::map<ElementaryDivisorType, std::uint64_t> expect{{type({}, 1), 1}, {type({0}), 72}, {type({1}), 8}};
  EXPECT_EQ(d.counts, expect);
}

TEST(OrbitLinear, AbelianFactors) {
  auto p5 = profile(corpus_lattice("abelian2"));
  auto M = commutator_matrices(p5);
  EXPECT_EQ(cc_zeta_from_A(divisor_distribution(M, Which::A, GaloisRing::make(5, 1, 1)), p5).counts,
            (Counts{{1, 25}}));
  EXPECT_EQ(irr_zeta_from_B(divisor_distribution(M, Which::B, GaloisRing::make(7, 1, 1)), p5).counts,
            (Counts{{1, 49}}));
}

TEST(OrbitLinear, SweepsAgree) {
  for (auto [name, p, N, f] : {std::tuple{"heisenberg", 3ull, 2, 1}, {"free_class2_3gen", 3ull, 1, 1},
                               {"heisenberg_plus_z", 5ull, 1, 1}, {"heisenberg", 3ull, 1, 2},
                               {"filiform_class3", 5ull, 1, 1}}) {
    auto M = matrices(name);
    GaloisRing R = GaloisRing::make(p, N, f);
    for (Which w : {Which::A, Which::B}) {
      auto ref = divisor_distribution_serial(M, w, R);
      for (int t : {1, 3, 8}) {
        set_num_threads(t);
        EXPECT_EQ(divisor_distribution(M, w, R), ref) << name;
      }
      set_num_threads(1);
      EXPECT_EQ(divisor_distribution_stratified(M, w, R), ref) << name;
    }
  }
}

TEST(OrbitLinear, InvariantUnderInvertibleChangeOfVariables) {
  std::mt19937_64 rng(21);
  for (auto [name, p, N] : {std::tuple{"heisenberg", 3ull, 2}, {"free_class2_3gen", 3ull, 1},
                            {"heisenberg_plus_z", 5ull, 1}}) {
    auto M = matrices(name);
    GaloisRing R = GaloisRing::make(p, N, 1);
    for (Which w : {Which::A, Which::B}) {
      std::size_t vars = w == Which::A ? M.A.vars : M.B.vars;
      std::uniform_int_distribution<std::uint64_t> d(0, R.size() - 1);
      RingMatrix T;
      do {
        T = RingMatrix(vars, vars);
        for (auto &x : T.a) x = static_cast<GaloisRing::Elem>(d(rng));
      } while (!is_invertible(R, T));
      EXPECT_EQ(divisor_distribution_transformed(M, w, R, T), divisor_distribution_serial(M, w, R)) << name;
    }
  }
}

TEST(OrbitLinear, LinearRoutesMatchBruteForce) {
  for (auto [name, p, N, f] : {std::tuple{"heisenberg", 3ull, 1, 1}, {"heisenberg", 3ull, 2, 1},
                               {"heisenberg", 3ull, 1, 2}, {"heisenberg", 5ull, 1, 1},
                               {"free_class2_3gen", 3ull, 1, 1}, {"heisenberg_plus_z", 3ull, 1, 1},
                               {"abelian2", 2ull, 2, 1}}) {
    auto P = profile(corpus_lattice(name));
    GaloisRing R = GaloisRing::make(p, N, f);
    for (ZetaKind k : {ZetaKind::Cc, ZetaKind::Irr}) {
      if (k == ZetaKind::Irr && p == 2) continue;  // orbit counting needs p odd
      auto brute = quotient_zeta(P, R, k, Method::Brute, default_group_bound(), kCharacterBound);
      auto linear = quotient_zeta(P, R, k, Method::Linear, default_group_bound(), kCharacterBound);
      EXPECT_EQ(brute, linear) << name << " p=" << p << " N=" << N << " f=" << f << " " << to_string(k);
    }
  }
}

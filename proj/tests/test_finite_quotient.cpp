#include <gtest/gtest.h>

#include <random>

#include "bizeta/error.hpp"
#include "bizeta/finite_quotient.hpp"
#include "bizeta/parallel.hpp"
#include "test_util.hpp"

using namespace bizeta;
using bizeta::testing::corpus_lattice;

namespace {

using Counts = std::map<std::uint64_t, std::uint64_t>;

FiniteQuotientGroup group(const std::string &name, std::uint64_t p, int N, int f) {
  return build_group(profile(corpus_lattice(name)), GaloisRing::make(p, N, f));
}

}  // namespace

TEST(FiniteQuotient, HeisenbergModThree) {
  auto G = group("heisenberg", 3, 1, 1);
  EXPECT_EQ(G.order(), 27u);
  EXPECT_EQ(G.exponent(), 3u);
  ClassData d = conjugacy_classes(G);
  EXPECT_EQ(d.counts, (Counts{{1, 3}, {3, 8}}));
  EXPECT_EQ(d.k, 11u);
}

TEST(FiniteQuotient, HeisenbergModNine) {
  auto G = group("heisenberg", 3, 2, 1);
  EXPECT_EQ(G.order(), 729u);
  ClassData d = conjugacy_classes(G);
  EXPECT_EQ(d.counts, (Counts{{1, 9}, {3, 24}, {9, 72}}));
  EXPECT_EQ(d.k, 105u);
}

TEST(FiniteQuotient, HeisenbergOverF9) {
  auto G = group("heisenberg", 3, 1, 2);
  ClassData d = conjugacy_classes(G);
  EXPECT_EQ(d.counts, (Counts{{1, 9}, {9, 80}}));
  EXPECT_EQ(d.k, 89u);
}

TEST(FiniteQuotient, GroupAxioms) {
  for (auto [name, p, N, f] : {std::tuple{"heisenberg", 3ull, 2, 1}, {"filiform_class3", 5ull, 1, 1},
                               {"free_class2_3gen", 3ull, 1, 1}, {"heisenberg", 5ull, 1, 2}}) {
    auto G = group(name, p, N, f);
    std::mt19937_64 rng(N * 7 + f);
    std::uniform_int_distribution<std::uint64_t> d(0, G.order() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      auto x = d(rng), y = d(rng), z = d(rng);
      EXPECT_EQ(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z))) << name;
      EXPECT_EQ(G.mul(x, 0), x);
      EXPECT_EQ(G.mul(x, G.inverse(x)), 0u);
      EXPECT_EQ(G.conjugate(G.mul(x, y), z), G.mul(G.conjugate(x, z), G.conjugate(y, z)));
    }
  }
}

TEST(FiniteQuotient, ClassEquationAndCentre) {
  for (auto [name, p, N] : {std::tuple{"heisenberg", 3ull, 2}, {"filiform_class3", 5ull, 1},
                            {"heisenberg_plus_z", 3ull, 1}, {"abelian2", 7ull, 2}}) {
    auto G = group(name, p, N, 1);
    ClassData d = conjugacy_classes(G);
    std::uint64_t total = 0, k = 0;
    for (auto [n, c] : d.counts) {
      EXPECT_EQ(G.order() % n, 0u);
      total += n * c;
      k += c;
    }
    EXPECT_EQ(total, G.order());
    EXPECT_EQ(k, d.k);
  }
}

TEST(FiniteQuotient, SerialParallelAndShortcutAgree) {
  for (auto [name, p, N, f] : {std::tuple{"heisenberg", 3ull, 2, 1}, {"heisenberg", 3ull, 1, 2},
                               {"free_class2_3gen", 3ull, 1, 1}, {"filiform_class3", 5ull, 1, 1}}) {
    auto G = group(name, p, N, f);
    ConjugacyPartition ref = conjugacy_partition_serial(G);
    for (int t : {1, 2, 4}) {
      set_num_threads(t);
      EXPECT_EQ(conjugacy_partition_parallel(G), ref) << name << " threads " << t;
    }
    set_num_threads(1);
    if (G.nilpotency_class() <= 2) EXPECT_EQ(conjugacy_partition_class_two(G), ref) << name;
    EXPECT_EQ(conjugacy_partition(G), ref);
  }
}

TEST(FiniteQuotient, SizeBoundIsEnforced) {
  try {
    build_group(profile(corpus_lattice("heisenberg")), GaloisRing::make(3, 3, 1), 1000);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.category(), ErrorCategory::SizeBound);
  }
}

TEST(Dixon, AbelianGroup) {
  auto G = group("abelian2", 5, 1, 1);
  DixonResult r = character_degrees(G);
  EXPECT_TRUE(r.abelian);
  EXPECT_EQ(r.degrees.counts, (Counts{{1, 25}}));
}

TEST(Dixon, HeisenbergModThree) {
  DixonResult r = character_degrees(group("heisenberg", 3, 1, 1));
  EXPECT_EQ(r.degrees.counts, (Counts{{1, 9}, {3, 2}}));
}

TEST(Dixon, HeisenbergModNine) {
  auto G = group("heisenberg", 3, 2, 1);
  DixonResult r = character_degrees(G);
  EXPECT_EQ(r.degrees.counts, (Counts{{1, 81}, {3, 18}, {9, 6}}));
  EXPECT_EQ(r.field_prime, 73u);
  EXPECT_EQ(dixon_prime(G.exponent(), G.order()), 73u);
}

TEST(Dixon, DegreesSatisfyOrderIdentity) {
  for (auto [name, p, N, f] : {std::tuple{"filiform_class3", 5ull, 1, 1}, {"heisenberg", 3ull, 1, 2},
                               {"heisenberg_plus_z", 3ull, 1, 1}}) {
    auto G = group(name, p, N, f);
    DixonResult r = character_degrees(G);
    std::uint64_t sq = 0;
    for (auto [n, c] : r.degrees.counts) sq += n * n * c;
    EXPECT_EQ(sq, G.order()) << name;
    EXPECT_EQ(r.degrees.total(), conjugacy_classes(G).k) << name;
  }
}

TEST(Dixon, CharacterBound) {
  EXPECT_THROW(character_degrees(group("heisenberg", 3, 2, 1), 100), Error);
}

TEST(Admissibility, Primes) {
  auto admissible = [](const char *name, std::uint64_t up_to) {
    std::vector<std::uint64_t> out;
    for (const auto &s : admissible_primes(profile(corpus_lattice(name)), up_to))
      if (s.admissible) out.push_back(s.p);
    return out;
  };
  EXPECT_EQ(admissible("heisenberg", 10), (std::vector<std::uint64_t>{3, 5, 7}));
  EXPECT_EQ(admissible("abelian2", 5), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(admissible("filiform_class3", 10), (std::vector<std::uint64_t>{5, 7}));

  auto st = admissible_primes(profile(corpus_lattice("heisenberg")), 2);
  ASSERT_EQ(st.size(), 1u);
  EXPECT_EQ(st[0].reason, "p<=c");
  auto st3 = admissible_primes(profile(corpus_lattice("filiform_class3")), 3);
  EXPECT_EQ(st3[0].reason, "Q2-class");
  EXPECT_EQ(st3[1].reason, "p<=c");
  try {
    require_admissible(profile(corpus_lattice("heisenberg")), 2);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "InadmissiblePrime");
  }
}

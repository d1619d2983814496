#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "bizeta/error.hpp"
#include "bizeta/lie_lattice.hpp"
#include "test_util.hpp"

using namespace bizeta;
using bizeta::testing::corpus_lattice;

namespace {

std::string expect_error(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(LieLattice, HeisenbergValidatesWithClassTwo) {
  auto rep = validate_lattice(corpus_lattice("heisenberg"));
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.computed_class, 2);
}

TEST(LieLattice, AbelianValidatesWithClassOne) {
  auto rep = validate_lattice(corpus_lattice("abelian2"));
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.computed_class, 1);
}

TEST(LieLattice, JacobiViolationWitness) {
  // [e1,e2]=e3, [e3,e4]=e5: J(e1,e2,e4) = [[e1,e2],e4] = e5.
  auto rep = validate_lattice(corpus_lattice("jacobi_violation"));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.code, "JacobiViolation");
  EXPECT_EQ(rep.triple, (std::array<int, 3>{1, 2, 4}));
}

TEST(LieLattice, HeisenbergPlusE1E3IsNotNilpotent) {
  // Adding [e1,e3]=e2 keeps Jacobi (h=3 is automatic) but ad(e1) is no longer nilpotent.
  LieLattice lat("bad", 3, 2);
  lat.set_bracket(0, 1, {0, 0, 1});
  lat.set_bracket(0, 2, {0, 1, 0});
  auto rep = validate_lattice(lat);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.code, "ClassMismatch");
  EXPECT_EQ(rep.computed_class, 0);
}

TEST(LieLattice, DeclaredClassMismatch) {
  LieLattice lat("h", 3, 3);
  lat.set_bracket(0, 1, {0, 0, 1});
  auto rep = validate_lattice(lat);
  EXPECT_EQ(rep.code, "ClassMismatch");
  EXPECT_EQ(rep.computed_class, 2);
  EXPECT_EQ(expect_error([&] { require_valid(lat); }), "ClassMismatch");
}

TEST(LieLattice, JsonErrors) {
  nlohmann::json doc = {{"name", "x"}, {"rank", 2}, {"class", 1},
                        {"brackets", {{{"i", 1}, {"j", 3}, {"terms", nlohmann::json::array()}}}}};
  EXPECT_EQ(expect_error([&] { lattice_from_json(doc); }), "IndexOutOfRange");
  doc["brackets"] = {{{"i", 1}, {"j", 2}, {"terms", nlohmann::json::array()}},
                     {{"i", 2}, {"j", 1}, {"terms", nlohmann::json::array()}}};
  EXPECT_EQ(expect_error([&] { lattice_from_json(doc); }), "DuplicateBracket");
  EXPECT_EQ(expect_error([&] { lattice_from_json(nlohmann::json{{"rank", 2}}); }), "ParseError");
}

TEST(LieLattice, ReversedPairIsNegated) {
  nlohmann::json doc = {{"name", "h"}, {"rank", 3}, {"class", 2},
                        {"brackets", {{{"i", 2}, {"j", 1}, {"terms", {{{"l", 3}, {"coeff", 1}}}}}}}};
  LieLattice lat = lattice_from_json(doc);
  EXPECT_EQ(lat.bracket(0, 1), (Vec{0, 0, -1}));
}

TEST(LieLattice, CanonicalRoundTripIsBitExact) {
  for (const char *name : {"abelian2", "heisenberg", "heisenberg_plus_z", "free_class2_3gen", "filiform_class3"}) {
    LieLattice lat = corpus_lattice(name);
    std::string text = canonical_lattice_text(lat);
    LieLattice again = lattice_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(again, lat);
    EXPECT_EQ(canonical_lattice_text(again), text);
  }
}

TEST(LieLattice, ProfileRanks) {
  struct Case {
    const char *name;
    int h, a, b, r, z;
  } cases[] = {{"heisenberg", 3, 2, 1, 2, 1},
               {"abelian2", 2, 0, 0, 2, 2},
               {"free_class2_3gen", 6, 3, 3, 3, 3},
               {"heisenberg_plus_z", 4, 2, 1, 3, 2}};
  for (const auto &c : cases) {
    LatticeProfile p = profile(corpus_lattice(c.name));
    EXPECT_EQ(p.h, c.h) << c.name;
    EXPECT_EQ(p.a, c.a) << c.name;
    EXPECT_EQ(p.b, c.b) << c.name;
    EXPECT_EQ(p.r, c.r) << c.name;
    EXPECT_EQ(p.z, c.z) << c.name;
    EXPECT_EQ(p.a + p.z, p.h);
    EXPECT_EQ(p.b + p.r, p.h);
    EXPECT_TRUE(p.bad_primes.empty());
  }
}

TEST(LieLattice, BracketsLieInDerivedSpan) {
  for (const char *name : {"heisenberg", "free_class2_3gen", "filiform_class3", "heisenberg_plus_z"}) {
    LatticeProfile p = profile(corpus_lattice(name));
    std::vector<bool> in_f(p.h, false);
    for (int k : p.f_basis) in_f[k] = true;
    for (int i = 0; i < p.h; ++i)
      for (int j = 0; j < p.h; ++j) {
        Vec v = p.working.bracket(i, j);
        for (int l = 0; l < p.h; ++l)
          if (!in_f[l]) EXPECT_EQ(v[l], 0) << name;
      }
  }
}

TEST(LieLattice, NonSaturatedDerivedLatticeRecordsBadPrime) {
  LieLattice lat("h2", 3, 2);
  lat.set_bracket(0, 1, {0, 0, 2});
  LatticeProfile p = profile(lat);
  EXPECT_EQ(p.derived_index, 2);
  EXPECT_EQ(p.bad_primes, (std::vector<std::uint64_t>{2}));
}

TEST(CommutatorMatrices, Heisenberg) {
  CommutatorMatrices m = commutator_matrices(profile(corpus_lattice("heisenberg")));
  auto j = commutator_to_json(m);
  EXPECT_EQ(j["A"], nlohmann::ordered_json::parse(R"([["X2"],["-X1"]])"));
  EXPECT_EQ(j["B"], nlohmann::ordered_json::parse(R"([["0","Y1"],["-Y1","0"]])"));
  EXPECT_EQ(m.u_A, 1u);
  EXPECT_EQ(m.u_B, 1u);
}

TEST(CommutatorMatrices, Abelian) {
  CommutatorMatrices m = commutator_matrices(profile(corpus_lattice("abelian2")));
  EXPECT_EQ(m.A.rows * m.A.cols, 0u);
  EXPECT_EQ(m.B.rows * m.B.cols, 0u);
  EXPECT_EQ(m.u_A, 0u);
  EXPECT_EQ(m.u_B, 0u);
}

TEST(CommutatorMatrices, FreeClassTwoOnThreeGenerators) {
  CommutatorMatrices m = commutator_matrices(profile(corpus_lattice("free_class2_3gen")));
  ASSERT_EQ(m.B.rows, 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    int nonzero = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      const Vec &f = m.B.form(i, j);
      for (std::size_t k = 0; k < 3; ++k) nonzero += f[k] != 0;
    }
    EXPECT_EQ(nonzero, 2);
  }
  EXPECT_EQ(m.u_B, 1u);
  EXPECT_TRUE(m.rank_B.certified);
}

TEST(CommutatorMatrices, EvaluationAntisymmetryAndEvenRank) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-5, 5);
  for (const char *name : {"heisenberg", "free_class2_3gen", "heisenberg_plus_z", "filiform_class3"}) {
    LatticeProfile p = profile(corpus_lattice(name));
    CommutatorMatrices m = commutator_matrices(p);
    for (int trial = 0; trial < 100; ++trial) {
      Vec y(m.B.vars), x(m.A.vars);
      for (auto &v : y) v = d(rng);
      for (auto &v : x) v = d(rng);
      IntMatrix By = m.B.evaluate(y);
      for (std::size_t i = 0; i < By.rows(); ++i)
        for (std::size_t j = 0; j < By.cols(); ++j) EXPECT_EQ(By(i, j), -By(j, i));
      EXPECT_EQ(rank_over_q(By) % 2, 0u);
      // A(x)_{ij} = sum_k lambda_{ik}^j x_k, entrywise.
      IntMatrix Ax = m.A.evaluate(x);
      for (int i = 0; i < p.a; ++i)
        for (int j = 0; j < p.b; ++j) {
          std::int64_t s = 0;
          for (int k = 0; k < p.a; ++k) s += p.structure_constant(i, k, j) * x[k];
          EXPECT_EQ(Ax(i, j), s);
        }
    }
    EXPECT_EQ(m.rank_B.rank() % 2, 0u);
    EXPECT_EQ(m.rank_B.rank(), 2 * m.u_B);
  }
}

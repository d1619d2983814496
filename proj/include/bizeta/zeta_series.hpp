#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bizeta/finite_quotient.hpp"
#include "bizeta/lie_lattice.hpp"
#include "bizeta/numeric.hpp"
#include "json.hpp"

namespace bizeta {

enum class ZetaKind { Irr, Cc };
enum class Method { Brute, Linear };

ZetaKind parse_kind(const std::string &s);
Method parse_method(const std::string &s);
std::string to_string(ZetaKind k);
std::string to_string(Method m);

// Exponent pair of q^{-j s1} q^{-m s2}; ordered by level m first.
struct TermKey {
  int j = 0;
  int m = 0;
  auto operator<=>(const TermKey &o) const {
    if (auto c = m <=> o.m; c != 0) return c;
    return j <=> o.j;
  }
  bool operator==(const TermKey &) const = default;
};

struct BivariateDirichletPolynomial {
  std::uint64_t base_q = 0;
  std::map<TermKey, std::uint64_t> terms;

  std::uint64_t coeff(int j, int m) const;
  bool operator==(const BivariateDirichletPolynomial &) const = default;
};

struct UnivariateDirichletPolynomial {
  std::uint64_t base_q = 0;
  std::map<int, std::uint64_t> terms;  // m -> coefficient of q^{-m s}
  bool operator==(const UnivariateDirichletPolynomial &) const = default;
};

struct LocalFactorRequest {
  std::uint64_t p = 0;
  int f = 1;
  int N_max = 1;
  ZetaKind kind = ZetaKind::Cc;
  Method method = Method::Brute;
  std::uint64_t group_bound = default_group_bound();
  std::uint64_t character_bound = kCharacterBound;
};

// Zeta data of one finite quotient G(o/p^N) as a map class size/degree -> count.
std::map<std::uint64_t, std::uint64_t> quotient_zeta(const LatticeProfile &profile, const GaloisRing &R,
                                                     ZetaKind kind, Method method, std::uint64_t group_bound,
                                                     std::uint64_t character_bound);

BivariateDirichletPolynomial local_factor_truncated(const LieLattice &lattice, const LocalFactorRequest &req);
BivariateDirichletPolynomial local_factor_truncated(const LatticeProfile &profile, const LocalFactorRequest &req);

UnivariateDirichletPolynomial specialize_class_number(const BivariateDirichletPolynomial &z);

// Series over positive integers: sum a_{d,n} d^{-s1} n^{-s2}.
struct GlobalKey {
  BigInt d;     // degree / class-size integer
  BigInt norm;  // ideal norm
  auto operator<=>(const GlobalKey &o) const {
    if (norm != o.norm) return norm < o.norm ? std::strong_ordering::less : std::strong_ordering::greater;
    if (d != o.d) return d < o.d ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const GlobalKey &o) const { return d == o.d && norm == o.norm; }
};

struct GlobalSeries {
  std::map<GlobalKey, BigInt> terms;
  std::vector<std::uint64_t> primes;      // primes whose factors were multiplied in
  std::vector<PrimeStatus> skipped;       // excluded primes with reasons
  BigInt exact_up_to = 0;                 // coefficients with norm <= this are exact
  bool operator==(const GlobalSeries &o) const { return terms == o.terms; }
};

GlobalSeries series_one();
GlobalSeries to_global(const BivariateDirichletPolynomial &local, std::uint64_t p);
// Product of two series over coprime supports.
GlobalSeries multiply(const GlobalSeries &a, const GlobalSeries &b);

struct EulerRequest {
  ZetaKind kind = ZetaKind::Cc;
  Method method = Method::Brute;
  int N_max = 1;
  std::uint64_t group_bound = default_group_bound();
  std::uint64_t character_bound = kCharacterBound;
};

GlobalSeries euler_assemble(const LieLattice &lattice, const std::vector<std::uint64_t> &primes,
                            const EulerRequest &req);
GlobalSeries euler_assemble(const LieLattice &lattice, std::uint64_t bound, const EulerRequest &req);

// Polynomial in q with rational coefficients, low degree first.
struct QPolynomial {
  std::vector<Rational> c;
  Rational operator()(const Rational &q) const;
  std::string to_string() const;
  bool operator==(const QPolynomial &) const = default;
};

// Exact interpolation through (x_i, y_i); Newton form converted to monomials.
QPolynomial interpolate(const std::vector<Rational> &x, const std::vector<Rational> &y);

struct CoefficientLaw {
  std::vector<std::uint64_t> fit_primes, holdout_primes;
  int f = 1;
  int degree = 0;
  std::map<TermKey, QPolynomial> laws;
  std::map<int, QPolynomial> specialized;  // level m -> law of sum_j a_{j,m}

  std::map<TermKey, Rational> evaluate(const Rational &q) const;
};

struct FitRequest {
  ZetaKind kind = ZetaKind::Cc;
  Method method = Method::Brute;
  int f = 1;
  int N_max = 1;
  std::optional<int> degree;
  std::uint64_t group_bound = default_group_bound();
  std::uint64_t character_bound = kCharacterBound;
};

CoefficientLaw fit_coefficient_law(const LieLattice &lattice, const std::vector<std::uint64_t> &primes,
                                   const FitRequest &req);
// Fitting from precomputed local factors (one per prime, same f).
CoefficientLaw fit_coefficient_law(const std::vector<BivariateDirichletPolynomial> &factors,
                                   const std::vector<std::uint64_t> &primes, int f, std::optional<int> degree,
                                   int default_degree);

nlohmann::ordered_json series_to_json(const BivariateDirichletPolynomial &z);
nlohmann::ordered_json series_to_json(const UnivariateDirichletPolynomial &z);
nlohmann::ordered_json series_to_json(const GlobalSeries &g);
nlohmann::ordered_json law_to_json(const CoefficientLaw &law);
std::string render_text(const BivariateDirichletPolynomial &z);
std::string render_text(const UnivariateDirichletPolynomial &z);
std::string render_text(const GlobalSeries &g);

// Big integers are emitted as JSON numbers when they fit in 64 bits, else strings.
nlohmann::ordered_json big_to_json(const BigInt &v);

}  // namespace bizeta

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bizeta/numeric.hpp"
#include "json.hpp"

namespace bizeta {

// Open half-plane {Re(a1 s1 + a2 s2) > b}. With a1 = a2 = 0 the plane is
// trivial: everything when b < 0, nothing otherwise.
struct HalfPlane {
  Rational a1, a2, b;

  bool trivial() const { return a1 == 0 && a2 == 0; }
  bool contains(const Rational &s1, const Rational &s2) const { return a1 * s1 + a2 * s2 > b; }
  // Positive rescaling to coprime integers.
  HalfPlane normalized() const;
  bool operator==(const HalfPlane &) const = default;
};

bool operator<(const HalfPlane &x, const HalfPlane &y);

// Intersection of open half-planes in the (Re s1, Re s2) plane. The empty
// list is the whole plane; canonical empty domains are {0 > 0}.
struct PolyhedralDomain {
  std::vector<HalfPlane> planes;
  bool canonical = false;

  bool contains(const Rational &s1, const Rational &s2) const;
  bool operator==(const PolyhedralDomain &o) const { return planes == o.planes; }
};

// Exact decisions by two-variable Fourier-Motzkin elimination.
bool is_empty(const PolyhedralDomain &d);
// d lies inside the half-plane h.
bool implies(const PolyhedralDomain &d, const HalfPlane &h);
bool contains(const PolyhedralDomain &outer, const PolyhedralDomain &inner);
bool same_set(const PolyhedralDomain &x, const PolyhedralDomain &y);
PolyhedralDomain intersect(const PolyhedralDomain &x, const PolyhedralDomain &y);

PolyhedralDomain canonicalize(const PolyhedralDomain &d);

struct RSet {
  std::vector<int> indices;               // 1-based
  std::vector<std::vector<int>> groups;   // R_i classes of identical half-planes, members of the set only
};
RSet r_set(const std::vector<HalfPlane> &planes);

// h = 1 + sum a_j X1^e1 X2^e2 X3^e3.
struct SparseExponentPolynomial {
  struct Term {
    BigInt coeff;
    std::array<int, 3> e{};
    bool operator==(const Term &) const = default;
  };
  std::vector<Term> terms;
  std::optional<std::int64_t> c;  // optional exponent scale carried by the input file

  void validate() const;
  bool operator==(const SparseExponentPolynomial &o) const { return terms == o.terms; }
};

using Monomial = std::array<int, 3>;
// Full polynomial with constant term, all coefficients nonzero.
using ExpandedPolynomial = std::map<Monomial, BigInt>;

ExpandedPolynomial expand(const SparseExponentPolynomial &h);
SparseExponentPolynomial from_expanded(const ExpandedPolynomial &p);  // constant term must be 1
ExpandedPolynomial multiply(const ExpandedPolynomial &x, const ExpandedPolynomial &y);
ExpandedPolynomial cyclotomic_product(const std::map<Monomial, int> &factors);

struct CyclotomicFactorization {
  std::map<Monomial, int> factors;  // lambda -> gamma for factors (1 - X^lambda)^gamma
  ExpandedPolynomial residual;
  bool cyclotomic() const;          // residual == 1
  bool cyclotomic_free() const { return factors.empty(); }
};
CyclotomicFactorization detect_cyclotomic(const SparseExponentPolynomial &h);

// W_c(delta); `inertia` lists residue degrees of the primes above p (must contain 1).
PolyhedralDomain wc_domain(const SparseExponentPolynomial &h, std::int64_t c, const Rational &delta);
PolyhedralDomain wc_domain(const SparseExponentPolynomial &h, std::int64_t c, const Rational &delta,
                           const std::vector<int> &inertia);

struct ProbeRequest {
  Rational sigma1, sigma2;
  std::int64_t c = 1;
  std::uint64_t prime_bound = 100000;
  std::vector<int> inertia{1};
  Rational margin{1, 1000};
  double tolerance = 1e-6;
};

struct ProbeTracePoint {
  std::uint64_t bound;
  double partial_sum;
  double tail_bound;  // +inf when no convergent comparison exists
};

struct ProbeResult {
  std::string verdict;             // "converges" or "diverges"
  Rational dominant_exponent;      // smallest exponent with nonzero grouped coefficient
  bool in_wc1 = false;             // exact membership of the point in W_c(1)
  bool empty = false;              // h = 1
  bool cyclotomic = false;         // h has a factor 1 - X^lambda
  std::vector<ProbeTracePoint> trace;
  std::optional<std::uint64_t> cauchy_by;  // first checkpoint whose tail bound meets the tolerance
  double last_increment = 0;               // sum over the final prime block
  // Zero-freeness of the local factors h(q^{-s1}, q^{-s2}, q^{-c}) on Re s = (sigma1, sigma2):
  // for q >= zero_free_from the bound |h| >= 1 - sum |a_j| q^{-e_j} > 0 proves it; the
  // remaining q up to the prime bound are only sampled on a torus grid.
  std::optional<std::uint64_t> zero_free_from;
  std::vector<std::uint64_t> unresolved;  // prime powers q below that threshold
  double grid_min = 0;                    // smallest sampled |h| over them
};

ProbeResult probe_convergence(const SparseExponentPolynomial &h, const ProbeRequest &req);

// Rays (A1j, A2j, Bj) and cones M_i of a triangulated summation domain.
struct Ray {
  Rational A1, A2, B;
};
struct Cone {
  std::vector<int> members;  // 0-based ray indices
  Rational weight{1};        // c_i (q - 1)^{|U_i|} at the evaluation prime
};
struct RayData {
  std::vector<Ray> rays;
  std::vector<Cone> cones;  // the full cone family W; single-ray cones are listed explicitly
  bool require_integral = false;

  bool ray_in_wprime(int j) const { return rays[j].A1 != 0 || rays[j].A2 != 0; }
  bool cone_in_wprime(int i) const;
  void validate() const;
};

// D_{j,delta} = {Re(A1j s1 + A2j s2) > 1 - Bj - delta}.
HalfPlane ray_domain(const Ray &r, const Rational &delta);
// Domain of absolute convergence of the product attached to cone k.
PolyhedralDomain composite_domain(const RayData &rd, int k);
// Intersection of the ray domains D_{j,0} over rays with nonzero A-vector.
PolyhedralDomain ray_intersection(const RayData &rd);

// Deterministic test-instance generators.
SparseExponentPolynomial random_cyclotomic_free(std::mt19937_64 &rng, int max_terms = 4, int max_exp = 3);
std::map<Monomial, int> random_cyclotomic_factors(std::mt19937_64 &rng, int max_factors = 4, int max_exp = 2);
RayData random_ray_data(std::mt19937_64 &rng);

nlohmann::ordered_json rational_to_json(const Rational &r);
Rational rational_from_json(const nlohmann::json &j);
nlohmann::ordered_json domain_to_json(const PolyhedralDomain &d);
PolyhedralDomain domain_from_json(const nlohmann::json &j);
nlohmann::ordered_json poly_to_json(const SparseExponentPolynomial &h);
SparseExponentPolynomial poly_from_json(const nlohmann::json &j);
nlohmann::ordered_json factorization_to_json(const CyclotomicFactorization &f);
nlohmann::ordered_json rset_to_json(const RSet &r);
nlohmann::ordered_json probe_to_json(const ProbeResult &r);
RayData ray_data_from_json(const nlohmann::json &j);
nlohmann::ordered_json ray_data_to_json(const RayData &rd);
std::string render_text(const PolyhedralDomain &d);

}  // namespace bizeta

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace bizeta {

// GR(p^N, f) = (Z/p^N)[t]/(g), g monic of degree f and irreducible mod p.
// Elements are packed codes: sum of c_i * (p^N)^i with 0 <= c_i < p^N.
class GaloisRing {
 public:
  using Elem = std::uint32_t;

  static GaloisRing make(std::uint64_t p, int N, int f);

  std::uint64_t p() const { return d_->p; }
  int N() const { return d_->N; }
  int f() const { return d_->f; }
  std::uint64_t q() const { return d_->q; }        // residue field size p^f
  std::uint64_t pN() const { return d_->pN; }      // p^N
  std::uint64_t size() const { return d_->size; }  // p^{Nf}
  std::uint64_t unit_count() const;
  // Coefficients c_0..c_{f-1} of the modulus (leading 1 omitted).
  const std::vector<std::uint64_t> &modulus() const { return d_->modulus; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;
  Elem t_power(int i) const;  // t^i, i < f
  Elem p_power(int k) const;  // p^k (0 when k >= N)

  Elem add(Elem x, Elem y) const;
  Elem sub(Elem x, Elem y) const;
  Elem neg(Elem x) const;
  Elem mul(Elem x, Elem y) const;
  Elem scale(std::int64_t c, Elem x) const { return mul(from_int(c), x); }
  Elem pow(Elem x, std::uint64_t e) const;

  int valuation(Elem x) const;
  bool is_unit(Elem x) const { return valuation(x) == 0; }
  Elem inverse(Elem unit) const;
  // For x with valuation >= k: some y with p^k * y = x.
  Elem divide_by_p_power(Elem x, int k) const;

  std::vector<std::uint64_t> coeffs(Elem x) const;
  Elem from_coeffs(const std::vector<std::uint64_t> &c) const;
  std::string to_string(Elem x) const;

  bool operator==(const GaloisRing &o) const { return p() == o.p() && N() == o.N() && f() == o.f(); }

 private:
  struct Data {
    std::uint64_t p = 0, q = 0, pN = 0, size = 0;
    int N = 0, f = 0;
    std::vector<std::uint64_t> modulus;
    std::vector<Elem> add_table, mul_table;  // filled for small rings
  };
  Elem mul_direct(Elem x, Elem y) const;
  Elem add_direct(Elem x, Elem y) const;
  std::shared_ptr<const Data> d_;
};

// First monic irreducible polynomial of degree f mod p in lexicographic
// order of (c_{f-1}, ..., c_0). Returns c_0..c_{f-1}.
std::vector<std::uint64_t> first_irreducible(std::uint64_t p, int f);

struct RingMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<GaloisRing::Elem> a;

  RingMatrix() = default;
  RingMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  GaloisRing::Elem &operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  GaloisRing::Elem operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const RingMatrix &) const = default;
};

RingMatrix identity_matrix(const GaloisRing &R, std::size_t n);
RingMatrix multiply(const GaloisRing &R, const RingMatrix &x, const RingMatrix &y);
// Determinant by fraction-free elimination is not available over a ring
// with zero divisors; invertibility is tested modulo p instead.
bool is_invertible(const GaloisRing &R, const RingMatrix &m);

struct ElementaryDivisorType {
  std::vector<int> valuations;  // sorted, each < N
  int deficiency = 0;           // diagonal slots equal to zero

  std::vector<int> saturated(int N) const;  // valuations padded with N
  auto operator<=>(const ElementaryDivisorType &) const = default;
  std::string to_string() const;
};

struct SmithForm {
  ElementaryDivisorType type;
  RingMatrix U, V, D;  // U * M * V = D
};

SmithForm smith_normal_form(const GaloisRing &R, const RingMatrix &m);
// Type only; skips the transform bookkeeping.
ElementaryDivisorType elementary_divisor_type(const GaloisRing &R, RingMatrix m);
// log_q of the image size of the map R^cols -> R^rows given by the type.
int image_exponent(const ElementaryDivisorType &t, int N);

nlohmann::ordered_json matrix_to_json(const GaloisRing &R, const RingMatrix &m);
RingMatrix matrix_from_json(const GaloisRing &R, const nlohmann::json &doc);

}  // namespace bizeta

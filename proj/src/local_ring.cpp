#include "bizeta/local_ring.hpp"

#include <algorithm>

#include "bizeta/error.hpp"
#include "bizeta/numeric.hpp"

namespace bizeta {

namespace {

constexpr std::uint64_t kTableLimit = 729;

// Remainder of a modulo the monic polynomial with low coefficients g, over Z/m.
std::vector<std::uint64_t> poly_mod(std::vector<std::uint64_t> a, const std::vector<std::uint64_t> &g,
                                    std::uint64_t m) {
  const std::size_t f = g.size();
  for (std::size_t d = a.size(); d-- > f;) {
    std::uint64_t c = a[d] % m;
    if (c == 0) continue;
    a[d] = 0;
    for (std::size_t i = 0; i < f; ++i) a[d - f + i] = (a[d - f + i] + (m - g[i]) % m * c) % m;
  }
  a.resize(f);
  return a;
}

bool has_monic_factor(const std::vector<std::uint64_t> &g, std::uint64_t p, int deg) {
  // Exhaust monic divisors of degree deg.
  std::vector<std::uint64_t> low(deg, 0);
  while (true) {
    // Divide g (monic, degree f) by t^deg + low, check the remainder.
    const int f = static_cast<int>(g.size());
    std::vector<std::uint64_t> r(g.begin(), g.end());
    r.push_back(1);
    for (int d = f; d >= deg; --d) {
      std::uint64_t c = r[d] % p;
      if (c == 0) continue;
      r[d] = 0;
      for (int i = 0; i < deg; ++i) r[d - deg + i] = (r[d - deg + i] + (p - low[i]) % p * c) % p;
    }
    bool zero = std::all_of(r.begin(), r.begin() + deg, [p](std::uint64_t x) { return x % p == 0; });
    if (zero) return true;
    int k = 0;
    while (k < deg && low[k] == p - 1) low[k++] = 0;
    if (k == deg) return false;
    ++low[k];
  }
}

}  // namespace

std::vector<std::uint64_t> first_irreducible(std::uint64_t p, int f) {
  if (f == 1) return {0};
  // Enumerate (c_{f-1}, ..., c_0) lexicographically: c_0 is the fastest digit.
  std::vector<std::uint64_t> g(f, 0);
  while (true) {
    bool irreducible = true;
    for (int d = 1; d <= f / 2 && irreducible; ++d)
      if (has_monic_factor(g, p, d)) irreducible = false;
    if (irreducible) return g;
    int k = 0;
    while (k < f && g[k] == p - 1) g[k++] = 0;
    if (k == f) throw std::logic_error("first_irreducible: exhausted");
    ++g[k];
  }
}

GaloisRing GaloisRing::make(std::uint64_t p, int N, int f) {
  if (!is_prime(p)) throw validation_error("NotPrime", std::to_string(p) + " is not prime");
  if (N < 1 || f < 1) throw validation_error("BadRing", "ring level N and degree f must be positive");
  auto d = std::make_shared<Data>();
  d->p = p;
  d->N = N;
  d->f = f;
  d->q = checked_pow(p, static_cast<unsigned>(f));
  d->pN = checked_pow(p, static_cast<unsigned>(N));
  d->size = checked_pow(d->pN, static_cast<unsigned>(f));
  if (d->size > (std::uint64_t{1} << 31)) throw size_bound_error("Galois ring too large for packed codes");
  d->modulus = first_irreducible(p, f);
  for (auto &c : d->modulus) c %= d->pN;
  GaloisRing R;
  R.d_ = d;
  if (d->size <= kTableLimit) {
    d->add_table.resize(d->size * d->size);
    d->mul_table.resize(d->size * d->size);
    for (Elem x = 0; x < d->size; ++x)
      for (Elem y = 0; y < d->size; ++y) {
        d->add_table[x * d->size + y] = R.add_direct(x, y);
        d->mul_table[x * d->size + y] = R.mul_direct(x, y);
      }
  }
  return R;
}

std::uint64_t GaloisRing::unit_count() const {
  return size() - checked_pow(p(), static_cast<unsigned>((N() - 1) * f()));
}

std::vector<std::uint64_t> GaloisRing::coeffs(Elem x) const {
  std::vector<std::uint64_t> c(f());
  std::uint64_t v = x;
  for (int i = 0; i < f(); ++i) {
    c[i] = v % pN();
    v /= pN();
  }
  return c;
}

GaloisRing::Elem GaloisRing::from_coeffs(const std::vector<std::uint64_t> &c) const {
  std::uint64_t v = 0;
  for (int i = f(); i-- > 0;) v = v * pN() + (i < static_cast<int>(c.size()) ? c[i] % pN() : 0);
  return static_cast<Elem>(v);
}

GaloisRing::Elem GaloisRing::from_int(std::int64_t v) const {
  std::int64_t m = static_cast<std::int64_t>(pN());
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<Elem>(r);
}

GaloisRing::Elem GaloisRing::t_power(int i) const {
  std::vector<std::uint64_t> c(f(), 0);
  c[i] = 1;
  return from_coeffs(c);
}

GaloisRing::Elem GaloisRing::p_power(int k) const {
  if (k >= N()) return 0;
  return static_cast<Elem>(checked_pow(p(), static_cast<unsigned>(k)));
}

GaloisRing::Elem GaloisRing::add_direct(Elem x, Elem y) const {
  if (f() == 1) return static_cast<Elem>((std::uint64_t{x} + y) % pN());
  auto a = coeffs(x), b = coeffs(y);
  for (int i = 0; i < f(); ++i) a[i] = (a[i] + b[i]) % pN();
  return from_coeffs(a);
}

GaloisRing::Elem GaloisRing::mul_direct(Elem x, Elem y) const {
  if (f() == 1) return static_cast<Elem>(std::uint64_t{x} * y % pN());
  auto a = coeffs(x), b = coeffs(y);
  std::vector<std::uint64_t> prod(2 * f() - 1, 0);
  for (int i = 0; i < f(); ++i)
    for (int j = 0; j < f(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % pN();
  return from_coeffs(poly_mod(std::move(prod), modulus(), pN()));
}

GaloisRing::Elem GaloisRing::add(Elem x, Elem y) const {
  if (!d_->add_table.empty()) return d_->add_table[x * d_->size + y];
  return add_direct(x, y);
}

GaloisRing::Elem GaloisRing::neg(Elem x) const {
  if (f() == 1) return static_cast<Elem>((pN() - x) % pN());
  auto a = coeffs(x);
  for (auto &c : a) c = (pN() - c) % pN();
  return from_coeffs(a);
}

GaloisRing::Elem GaloisRing::sub(Elem x, Elem y) const { return add(x, neg(y)); }

GaloisRing::Elem GaloisRing::mul(Elem x, Elem y) const {
  if (!d_->mul_table.empty()) return d_->mul_table[x * d_->size + y];
  return mul_direct(x, y);
}

GaloisRing::Elem GaloisRing::pow(Elem x, std::uint64_t e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

int GaloisRing::valuation(Elem x) const {
  if (x == 0) return N();
  int v = N();
  for (auto c : coeffs(x)) {
    if (c == 0) continue;
    int k = 0;
    while (c % p() == 0) {
      c /= p();
      ++k;
    }
    v = std::min(v, k);
  }
  return v;
}

GaloisRing::Elem GaloisRing::inverse(Elem unit) const {
  if (!is_unit(unit)) throw std::domain_error("GaloisRing::inverse: not a unit");
  return pow(unit, unit_count() - 1);
}

GaloisRing::Elem GaloisRing::divide_by_p_power(Elem x, int k) const {
  if (k == 0) return x;
  std::uint64_t pk = checked_pow(p(), static_cast<unsigned>(k));
  auto c = coeffs(x);
  for (auto &v : c) {
    if (v % pk) throw std::domain_error("divide_by_p_power: valuation too small");
    v /= pk;
  }
  return from_coeffs(c);
}

std::string GaloisRing::to_string(Elem x) const {
  if (f() == 1) return std::to_string(x);
  auto c = coeffs(x);
  std::string s;
  for (int i = f(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += "+";
    std::string mono = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
    if (mono.empty()) s += std::to_string(c[i]);
    else s += (c[i] == 1 ? "" : std::to_string(c[i]) + "*") + mono;
  }
  return s.empty() ? "0" : s;
}

RingMatrix identity_matrix(const GaloisRing &R, std::size_t n) {
  RingMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = R.one();
  return m;
}

RingMatrix multiply(const GaloisRing &R, const RingMatrix &x, const RingMatrix &y) {
  if (x.cols != y.rows) throw std::invalid_argument("RingMatrix multiply: shape mismatch");
  RingMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      auto a = x(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) = R.add(out(i, j), R.mul(a, y(k, j)));
    }
  return out;
}

bool is_invertible(const GaloisRing &R, const RingMatrix &m) {
  if (m.rows != m.cols) return false;
  GaloisRing F = GaloisRing::make(R.p(), 1, R.f());
  RingMatrix red(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) red.a[i] = F.from_coeffs(R.coeffs(m.a[i]));
  auto t = elementary_divisor_type(F, red);
  return t.deficiency == 0;
}

std::vector<int> ElementaryDivisorType::saturated(int N) const {
  std::vector<int> out = valuations;
  out.insert(out.end(), static_cast<std::size_t>(deficiency), N);
  return out;
}

std::string ElementaryDivisorType::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < valuations.size(); ++i) s += (i ? "," : "") + std::to_string(valuations[i]);
  s += ")";
  if (deficiency) s += "+" + std::to_string(deficiency) + "z";
  return s;
}

int image_exponent(const ElementaryDivisorType &t, int N) {
  int e = 0;
  for (int m : t.valuations) e += N - m;
  return e;
}

namespace {

template <bool Track>
ElementaryDivisorType snf_core(const GaloisRing &R, RingMatrix &m, RingMatrix *U, RingMatrix *V) {
  ElementaryDivisorType type;
  const std::size_t rows = m.rows, cols = m.cols, n = std::min(rows, cols);
  const int N = R.N();
  std::size_t k = 0;
  for (; k < n; ++k) {
    int best = N;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = k; i < rows && best > 0; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        int v = R.valuation(m(i, j));
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
          if (v == 0) break;
        }
      }
    if (best == N) break;
    if (pi != k) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pi, j), m(k, j));
      if constexpr (Track)
        for (std::size_t j = 0; j < rows; ++j) std::swap((*U)(pi, j), (*U)(k, j));
    }
    if (pj != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, pj), m(i, k));
      if constexpr (Track)
        for (std::size_t i = 0; i < cols; ++i) std::swap((*V)(i, pj), (*V)(i, k));
    }
    // Normalise the pivot to exactly p^best.
    auto w = R.divide_by_p_power(m(k, k), best);
    auto winv = R.inverse(w);
    for (std::size_t j = 0; j < cols; ++j) m(k, j) = R.mul(winv, m(k, j));
    if constexpr (Track)
      for (std::size_t j = 0; j < rows; ++j) (*U)(k, j) = R.mul(winv, (*U)(k, j));
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (m(i, k) == 0) continue;
      auto c = R.divide_by_p_power(m(i, k), best);
      for (std::size_t j = k; j < cols; ++j) m(i, j) = R.sub(m(i, j), R.mul(c, m(k, j)));
      if constexpr (Track)
        for (std::size_t j = 0; j < rows; ++j) (*U)(i, j) = R.sub((*U)(i, j), R.mul(c, (*U)(k, j)));
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (m(k, j) == 0) continue;
      auto c = R.divide_by_p_power(m(k, j), best);
      for (std::size_t i = k; i < rows; ++i) m(i, j) = R.sub(m(i, j), R.mul(c, m(i, k)));
      if constexpr (Track)
        for (std::size_t i = 0; i < cols; ++i) (*V)(i, j) = R.sub((*V)(i, j), R.mul(c, (*V)(i, k)));
    }
    type.valuations.push_back(best);
  }
  type.deficiency = static_cast<int>(n - type.valuations.size());
  return type;
}

}  // namespace

SmithForm smith_normal_form(const GaloisRing &R, const RingMatrix &m) {
  SmithForm out;
  out.D = m;
  out.U = identity_matrix(R, m.rows);
  out.V = identity_matrix(R, m.cols);
  out.type = snf_core<true>(R, out.D, &out.U, &out.V);
  return out;
}

ElementaryDivisorType elementary_divisor_type(const GaloisRing &R, RingMatrix m) {
  return snf_core<false>(R, m, nullptr, nullptr);
}

nlohmann::ordered_json matrix_to_json(const GaloisRing &R, const RingMatrix &m) {
  nlohmann::ordered_json doc;
  doc["ring"] = nlohmann::ordered_json{{"p", R.p()}, {"N", R.N()}, {"f", R.f()}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (R.f() == 1) row.push_back(m(i, j));
      else row.push_back(R.coeffs(m(i, j)));
    }
    rows.push_back(row);
  }
  doc["entries"] = rows;
  return doc;
}

RingMatrix matrix_from_json(const GaloisRing &R, const nlohmann::json &doc) {
  const auto &rows = doc.at("entries");
  RingMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (rows[i].size() != m.cols) throw validation_error("BadMatrix", "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols; ++j) {
      const auto &e = rows[i][j];
      if (e.is_array()) {
        std::vector<std::uint64_t> c;
        for (const auto &x : e) c.push_back(R.from_int(x.get<std::int64_t>()));
        m(i, j) = R.from_coeffs(c);
      } else {
        m(i, j) = R.from_int(e.get<std::int64_t>());
      }
    }
  }
  return m;
}

}  // namespace bizeta

#include "bizeta/zeta_series.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <sstream>

#include "bizeta/error.hpp"
#include "bizeta/orbit_linear.hpp"
#include "bizeta/parallel.hpp"

namespace bizeta {

ZetaKind parse_kind(const std::string &s) {
  if (s == "irr") return ZetaKind::Irr;
  if (s == "cc") return ZetaKind::Cc;
  throw validation_error("BadKind", "kind must be irr or cc, got '" + s + "'");
}

Method parse_method(const std::string &s) {
  if (s == "brute") return Method::Brute;
  if (s == "linear") return Method::Linear;
  throw validation_error("BadMethod", "method must be brute or linear, got '" + s + "'");
}

std::string to_string(ZetaKind k) { return k == ZetaKind::Irr ? "irr" : "cc"; }
std::string to_string(Method m) { return m == Method::Brute ? "brute" : "linear"; }

std::uint64_t BivariateDirichletPolynomial::coeff(int j, int m) const {
  auto it = terms.find(TermKey{j, m});
  return it == terms.end() ? 0 : it->second;
}

std::map<std::uint64_t, std::uint64_t> quotient_zeta(const LatticeProfile &profile, const GaloisRing &R,
                                                     ZetaKind kind, Method method, std::uint64_t group_bound,
                                                     std::uint64_t character_bound) {
  require_admissible(profile, R.p());
  if (method == Method::Brute) {
    FiniteQuotientGroup G = build_group(profile, R, group_bound);
    if (kind == ZetaKind::Cc) return conjugacy_classes(G, group_bound).counts;
    return character_degrees(G, character_bound).degrees.counts;
  }
  CommutatorMatrices cm = commutator_matrices(profile);
  if (kind == ZetaKind::Cc) return cc_zeta_from_A(divisor_distribution(cm, Which::A, R, group_bound), profile).counts;
  return irr_zeta_from_B(divisor_distribution(cm, Which::B, R, group_bound), profile).counts;
}

namespace {

int q_exponent(std::uint64_t n, std::uint64_t q) {
  int j = 0;
  while (n > 1) {
    if (n % q != 0) throw mismatch_error("NonQPower", std::to_string(n) + " is not a power of q = " + std::to_string(q));
    n /= q;
    ++j;
  }
  return j;
}

}  // namespace

BivariateDirichletPolynomial local_factor_truncated(const LatticeProfile &profile, const LocalFactorRequest &req) {
  if (req.N_max < 0) throw validation_error("BadLevel", "N_max must be nonnegative");
  require_admissible(profile, req.p);
  BivariateDirichletPolynomial z;
  z.base_q = checked_pow(req.p, static_cast<unsigned>(req.f));
  z.terms[TermKey{0, 0}] = 1;
  for (int N = 1; N <= req.N_max; ++N) {
    GaloisRing R = GaloisRing::make(req.p, N, req.f);
    for (const auto &[n, c] : quotient_zeta(profile, R, req.kind, req.method, req.group_bound, req.character_bound))
      z.terms[TermKey{q_exponent(n, z.base_q), N}] += c;
  }
  return z;
}

BivariateDirichletPolynomial local_factor_truncated(const LieLattice &lattice, const LocalFactorRequest &req) {
  require_valid(lattice);
  return local_factor_truncated(profile(lattice), req);
}

UnivariateDirichletPolynomial specialize_class_number(const BivariateDirichletPolynomial &z) {
  UnivariateDirichletPolynomial u;
  u.base_q = z.base_q;
  for (const auto &[k, c] : z.terms) u.terms[k.m] += c;
  return u;
}

GlobalSeries series_one() {
  GlobalSeries g;
  g.terms[GlobalKey{1, 1}] = 1;
  g.exact_up_to = 0;
  return g;
}

GlobalSeries to_global(const BivariateDirichletPolynomial &local, std::uint64_t p) {
  GlobalSeries g;
  const BigInt q = local.base_q;
  for (const auto &[k, c] : local.terms) {
    GlobalKey key{boost::multiprecision::pow(q, static_cast<unsigned>(k.j)),
                  boost::multiprecision::pow(q, static_cast<unsigned>(k.m))};
    g.terms[key] += c;
  }
  g.primes = {p};
  return g;
}

GlobalSeries multiply(const GlobalSeries &a, const GlobalSeries &b) {
  GlobalSeries out;
  for (const auto &[ka, ca] : a.terms)
    for (const auto &[kb, cb] : b.terms) out.terms[GlobalKey{ka.d * kb.d, ka.norm * kb.norm}] += ca * cb;
  out.primes = a.primes;
  out.primes.insert(out.primes.end(), b.primes.begin(), b.primes.end());
  std::sort(out.primes.begin(), out.primes.end());
  out.skipped = a.skipped;
  out.skipped.insert(out.skipped.end(), b.skipped.begin(), b.skipped.end());
  return out;
}

GlobalSeries euler_assemble(const LieLattice &lattice, const std::vector<std::uint64_t> &primes_in,
                            const EulerRequest &req) {
  require_valid(lattice);
  LatticeProfile prof = profile(lattice);
  std::vector<std::uint64_t> primes = primes_in;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<std::uint64_t> used;
  std::vector<PrimeStatus> skipped;
  for (auto p : primes) {
    if (!is_prime(p)) throw validation_error("NotPrime", std::to_string(p) + " is not prime");
    auto st = admissible_primes(prof, p).back();
    if (st.admissible) used.push_back(p);
    else skipped.push_back(st);
  }
  // Local factors in parallel; the fold below is sequential in prime order.
  std::vector<GlobalSeries> locals(used.size());
  std::vector<std::exception_ptr> errors(used.size());
  const auto n = static_cast<std::int64_t>(used.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      LocalFactorRequest lr{used[i], 1, req.N_max, req.kind, req.method, req.group_bound, req.character_bound};
      locals[i] = to_global(local_factor_truncated(prof, lr), used[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  GlobalSeries out = series_one();
  for (const auto &l : locals) out = multiply(out, l);
  out.skipped = skipped;
  // Exact below the first missing prime and below p^(N_max+1) for each used prime.
  std::uint64_t next = 2;
  while (std::binary_search(primes.begin(), primes.end(), next) || !is_prime(next)) ++next;
  BigInt cap = next;
  for (auto p : used) cap = std::min(cap, BigInt(boost::multiprecision::pow(BigInt(p), req.N_max + 1)));
  out.exact_up_to = cap - 1;
  return out;
}

GlobalSeries euler_assemble(const LieLattice &lattice, std::uint64_t bound, const EulerRequest &req) {
  return euler_assemble(lattice, primes_up_to(bound), req);
}

Rational QPolynomial::operator()(const Rational &q) const {
  Rational r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * q + c[i];
  return r;
}

std::string QPolynomial::to_string() const {
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    Rational a = c[i];
    bool negative = a < 0;
    if (negative) a = -a;
    std::string mono = i == 0 ? "" : (i == 1 ? "q" : "q^" + std::to_string(i));
    std::string coef = bizeta::to_string(a);
    std::string term = mono.empty() ? coef : (a == 1 ? mono : coef + "*" + mono);
    if (s.empty()) s = negative ? "-" + term : term;
    else s += (negative ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

QPolynomial interpolate(const std::vector<Rational> &x, const std::vector<Rational> &y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("interpolate: size mismatch");
  std::vector<Rational> dd = y;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = n - 1; i >= k; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - k]);
      if (i == k) break;
    }
  // Horner on the Newton form.
  QPolynomial p;
  p.c.assign(1, n ? dd[n - 1] : Rational(0));
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<Rational> next(p.c.size() + 1, 0);
    for (std::size_t i = 0; i < p.c.size(); ++i) {
      next[i + 1] += p.c[i];
      next[i] -= p.c[i] * x[k];
    }
    next[0] += dd[k];
    p.c = std::move(next);
  }
  while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
  return p;
}

std::map<TermKey, Rational> CoefficientLaw::evaluate(const Rational &q) const {
  std::map<TermKey, Rational> out;
  for (const auto &[k, law] : laws) out[k] = law(q);
  return out;
}

CoefficientLaw fit_coefficient_law(const std::vector<BivariateDirichletPolynomial> &factors,
                                   const std::vector<std::uint64_t> &primes, int f, std::optional<int> degree,
                                   int default_degree) {
  const int np = static_cast<int>(primes.size());
  if (static_cast<int>(factors.size()) != np) throw std::invalid_argument("fit: one factor per prime required");
  int deg;
  if (degree) {
    deg = *degree;
    if (np < deg + 2)
      throw validation_error("TooFewPrimes", "degree " + std::to_string(deg) + " needs at least " +
                                                 std::to_string(deg + 2) + " primes (one is held out)");
  } else {
    if (np < 2) throw validation_error("TooFewPrimes", "fitting needs at least two primes (one is held out)");
    deg = std::min(default_degree, np - 2);
  }
  CoefficientLaw law;
  law.f = f;
  law.degree = deg;
  law.fit_primes.assign(primes.begin(), primes.begin() + deg + 1);
  law.holdout_primes.assign(primes.begin() + deg + 1, primes.end());
  std::vector<Rational> xs;
  for (auto p : primes) xs.push_back(Rational(BigInt(checked_pow(p, static_cast<unsigned>(f)))));
  std::vector<Rational> xfit(xs.begin(), xs.begin() + deg + 1);

  std::vector<TermKey> keys;
  for (const auto &z : factors)
    for (const auto &[k, c] : z.terms) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  auto check = [&](const QPolynomial &poly, const std::vector<Rational> &ys, const std::string &what) {
    for (int i = deg + 1; i < np; ++i)
      if (poly(xs[i]) != ys[i])
        throw mismatch_error("InterpolationInconsistent",
                             what + ": law " + poly.to_string() + " predicts " + bizeta::to_string(poly(xs[i])) +
                                 " at p = " + std::to_string(primes[i]) + " but the data give " +
                                 bizeta::to_string(ys[i]));
  };
  std::map<int, std::vector<Rational>> level_sums;
  for (const auto &k : keys) {
    std::vector<Rational> ys;
    for (const auto &z : factors) ys.push_back(Rational(BigInt(z.coeff(k.j, k.m))));
    auto &acc = level_sums[k.m];
    if (acc.empty()) acc.assign(np, 0);
    for (int i = 0; i < np; ++i) acc[i] += ys[i];
    std::vector<Rational> yfit(ys.begin(), ys.begin() + deg + 1);
    QPolynomial poly = interpolate(xfit, yfit);
    check(poly, ys, "coefficient (j=" + std::to_string(k.j) + ", m=" + std::to_string(k.m) + ")");
    law.laws[k] = std::move(poly);
  }
  for (const auto &[m, ys] : level_sums) {
    std::vector<Rational> yfit(ys.begin(), ys.begin() + deg + 1);
    QPolynomial poly = interpolate(xfit, yfit);
    check(poly, ys, "class number at m=" + std::to_string(m));
    law.specialized[m] = std::move(poly);
  }
  return law;
}

CoefficientLaw fit_coefficient_law(const LieLattice &lattice, const std::vector<std::uint64_t> &primes,
                                   const FitRequest &req) {
  require_valid(lattice);
  LatticeProfile prof = profile(lattice);
  std::vector<BivariateDirichletPolynomial> factors;
  for (auto p : primes) {
    LocalFactorRequest lr{p, req.f, req.N_max, req.kind, req.method, req.group_bound, req.character_bound};
    factors.push_back(local_factor_truncated(prof, lr));
  }
  return fit_coefficient_law(factors, primes, req.f, req.degree, 2 * prof.h * req.N_max);
}

nlohmann::ordered_json big_to_json(const BigInt &v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

nlohmann::ordered_json series_to_json(const BivariateDirichletPolynomial &z) {
  nlohmann::ordered_json doc;
  doc["base_q"] = z.base_q;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto &[k, c] : z.terms) terms.push_back(nlohmann::ordered_json{{"j", k.j}, {"m", k.m}, {"coeff", c}});
  doc["terms"] = terms;
  return doc;
}

nlohmann::ordered_json series_to_json(const UnivariateDirichletPolynomial &z) {
  nlohmann::ordered_json doc;
  doc["base_q"] = z.base_q;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto &[m, c] : z.terms) terms.push_back(nlohmann::ordered_json{{"m", m}, {"coeff", c}});
  doc["terms"] = terms;
  return doc;
}

nlohmann::ordered_json series_to_json(const GlobalSeries &g) {
  nlohmann::ordered_json doc;
  doc["base_q"] = "global";
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto &[k, c] : g.terms)
    terms.push_back(nlohmann::ordered_json{{"j", big_to_json(k.d)}, {"norm", big_to_json(k.norm)}, {"coeff", big_to_json(c)}});
  doc["terms"] = terms;
  doc["primes"] = g.primes;
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const auto &s : g.skipped) skipped.push_back(nlohmann::ordered_json{{"p", s.p}, {"reason", s.reason}});
  doc["skipped"] = skipped;
  doc["exact_up_to"] = big_to_json(g.exact_up_to);
  return doc;
}

nlohmann::ordered_json law_to_json(const CoefficientLaw &law) {
  nlohmann::ordered_json doc;
  doc["f"] = law.f;
  doc["degree"] = law.degree;
  doc["fit_primes"] = law.fit_primes;
  doc["holdout_primes"] = law.holdout_primes;
  nlohmann::ordered_json laws = nlohmann::ordered_json::array();
  for (const auto &[k, poly] : law.laws) {
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto &c : poly.c) coeffs.push_back(bizeta::to_string(c));
    laws.push_back(nlohmann::ordered_json{{"j", k.j}, {"m", k.m}, {"law", poly.to_string()}, {"coeffs", coeffs}});
  }
  doc["laws"] = laws;
  nlohmann::ordered_json class_laws = nlohmann::ordered_json::array();
  for (const auto &[m, poly] : law.specialized) class_laws.push_back(nlohmann::ordered_json{{"m", m}, {"law", poly.to_string()}});
  doc["class_number_laws"] = class_laws;
  return doc;
}

namespace {

std::string pad_right(const std::string &s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string render_text(const BivariateDirichletPolynomial &z) {
  std::map<int, std::string> lines;
  const BigInt q = z.base_q;
  for (const auto &[k, c] : z.terms) {
    std::string term =
        k.j == 0 ? std::to_string(c)
                 : std::to_string(c) + "*" + BigInt(boost::multiprecision::pow(q, static_cast<unsigned>(k.j))).str() + "^{-s1}";
    auto &l = lines[k.m];
    l += (l.empty() ? "" : " + ") + term;
  }
  std::size_t w = 0;
  for (const auto &[m, l] : lines) w = std::max(w, ("m=" + std::to_string(m)).size());
  std::ostringstream os;
  os << "base q = " << z.base_q << "\n";
  for (const auto &[m, l] : lines) os << pad_right("m=" + std::to_string(m), w) << " | " << l << "\n";
  return os.str();
}

std::string render_text(const UnivariateDirichletPolynomial &z) {
  std::ostringstream os;
  os << "base q = " << z.base_q << "\n";
  std::size_t w = 0;
  for (const auto &[m, c] : z.terms) w = std::max(w, ("m=" + std::to_string(m)).size());
  for (const auto &[m, c] : z.terms) os << pad_right("m=" + std::to_string(m), w) << " | " << c << "\n";
  return os.str();
}

std::string render_text(const GlobalSeries &g) {
  std::map<BigInt, std::string> lines;
  for (const auto &[k, c] : g.terms) {
    std::string term = k.d == 1 ? c.str() : c.str() + "*" + k.d.str() + "^{-s1}";
    auto &l = lines[k.norm];
    l += (l.empty() ? "" : " + ") + term;
  }
  std::size_t w = 0;
  for (const auto &[n, l] : lines) w = std::max(w, ("n=" + n.str()).size());
  std::ostringstream os;
  os << "global series, exact for norms <= " << g.exact_up_to.str() << "\n";
  for (const auto &[n, l] : lines) os << pad_right("n=" + n.str(), w) << " | " << l << "\n";
  for (const auto &s : g.skipped) os << "skipped p=" << s.p << " (" << s.reason << ")\n";
  return os.str();
}

}  // namespace bizeta

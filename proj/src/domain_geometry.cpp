#include "bizeta/domain_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "bizeta/error.hpp"
#include "bizeta/parallel.hpp"

namespace bizeta {

namespace {

namespace mp = boost::multiprecision;

// a1 x + a2 y > b (strict) or >= b.
struct Ineq {
  Rational a1, a2, b;
  bool strict;
};

Ineq open_ineq(const HalfPlane &h) { return {h.a1, h.a2, h.b, true}; }
// Closed complement a1 x + a2 y <= b.
Ineq complement(const HalfPlane &h) { return {-h.a1, -h.a2, -h.b, false}; }

bool constant_ok(const Rational &b, bool strict) { return strict ? b < 0 : b <= 0; }

bool feasible_1d(const std::vector<Ineq> &cs) {
  std::optional<std::pair<Rational, bool>> lo, hi;  // bound, strict
  for (const auto &c : cs) {
    if (c.a1 == 0) {
      if (!constant_ok(c.b, c.strict)) return false;
      continue;
    }
    Rational v = c.b / c.a1;
    if (c.a1 > 0) {
      if (!lo || v > lo->first || (v == lo->first && c.strict)) lo = {v, c.strict};
    } else {
      if (!hi || v < hi->first || (v == hi->first && c.strict)) hi = {v, c.strict};
    }
  }
  if (!lo || !hi) return true;
  if (lo->first < hi->first) return true;
  return lo->first == hi->first && !lo->second && !hi->second;
}

// Fourier-Motzkin: eliminate the second coordinate, then decide the first.
bool feasible(const std::vector<Ineq> &cs) {
  std::vector<Ineq> lower, upper, rest;
  for (const auto &c : cs) {
    if (c.a2 > 0)
      lower.push_back(c);
    else if (c.a2 < 0)
      upper.push_back(c);
    else
      rest.push_back(c);
  }
  for (const auto &l : lower)
    for (const auto &u : upper) {
      Rational sl = 1 / l.a2, su = -1 / u.a2;
      rest.push_back({l.a1 * sl + u.a1 * su, 0, l.b * sl + u.b * su, l.strict || u.strict});
    }
  return feasible_1d(rest);
}

std::vector<Ineq> to_ineqs(const PolyhedralDomain &d) {
  std::vector<Ineq> cs;
  cs.reserve(d.planes.size() + 1);
  for (const auto &h : d.planes) cs.push_back(open_ineq(h));
  return cs;
}

const HalfPlane kEmptyMarker{0, 0, 0};

int degree(const Monomial &m) { return m[0] + m[1] + m[2]; }

bool graded_less(const Monomial &x, const Monomial &y) {
  if (degree(x) != degree(y)) return degree(x) < degree(y);
  return x < y;
}

const Monomial kOne{0, 0, 0};

bool is_one(const ExpandedPolynomial &p) { return p.size() == 1 && p.begin()->first == kOne && p.begin()->second == 1; }

// Exact division by (1 - X^lambda), if it divides p.
std::optional<ExpandedPolynomial> divide_cyclotomic(const ExpandedPolynomial &p, const Monomial &lambda) {
  // Monomials mu + t*lambda form lines; along a line p_t = q_t - q_{t-1}.
  std::map<Monomial, std::map<int, BigInt>> lines;
  for (const auto &[mu, c] : p) {
    int t = std::numeric_limits<int>::max();
    for (int i = 0; i < 3; ++i)
      if (lambda[i] > 0) t = std::min(t, mu[i] / lambda[i]);
    Monomial base{mu[0] - t * lambda[0], mu[1] - t * lambda[1], mu[2] - t * lambda[2]};
    lines[base][t] = c;
  }
  ExpandedPolynomial q;
  for (const auto &[base, line] : lines) {
    BigInt run = 0;
    int last = line.rbegin()->first;
    for (int t = 0; t <= last; ++t) {
      auto it = line.find(t);
      if (it != line.end()) run += it->second;
      if (t == last) {
        if (run != 0) return std::nullopt;
      } else if (run != 0) {
        q[{base[0] + t * lambda[0], base[1] + t * lambda[1], base[2] + t * lambda[2]}] = run;
      }
    }
  }
  return q;
}

}  // namespace

HalfPlane HalfPlane::normalized() const {
  if (trivial()) return {0, 0, b < 0 ? Rational(-1) : Rational(0)};
  BigInt l = 1;
  for (const Rational *v : {&a1, &a2, &b}) l = mp::lcm(l, mp::denominator(*v));
  const Rational L(l);
  BigInt n1 = mp::numerator(Rational(a1 * L)), n2 = mp::numerator(Rational(a2 * L)),
         nb = mp::numerator(Rational(b * L));
  BigInt g = mp::gcd(mp::gcd(mp::abs(n1), mp::abs(n2)), mp::abs(nb));
  return {Rational(BigInt(n1 / g)), Rational(BigInt(n2 / g)), Rational(BigInt(nb / g))};
}

bool operator<(const HalfPlane &x, const HalfPlane &y) {
  if (x.a1 != y.a1) return x.a1 < y.a1;
  if (x.a2 != y.a2) return x.a2 < y.a2;
  return x.b < y.b;
}

bool PolyhedralDomain::contains(const Rational &s1, const Rational &s2) const {
  return std::all_of(planes.begin(), planes.end(), [&](const HalfPlane &h) { return h.contains(s1, s2); });
}

bool is_empty(const PolyhedralDomain &d) { return !feasible(to_ineqs(d)); }

bool implies(const PolyhedralDomain &d, const HalfPlane &h) {
  auto cs = to_ineqs(d);
  cs.push_back(complement(h));
  return !feasible(cs);
}

bool contains(const PolyhedralDomain &outer, const PolyhedralDomain &inner) {
  if (is_empty(inner)) return true;
  return std::all_of(outer.planes.begin(), outer.planes.end(), [&](const HalfPlane &h) { return implies(inner, h); });
}

bool same_set(const PolyhedralDomain &x, const PolyhedralDomain &y) { return contains(x, y) && contains(y, x); }

PolyhedralDomain intersect(const PolyhedralDomain &x, const PolyhedralDomain &y) {
  PolyhedralDomain out = x;
  out.canonical = false;
  out.planes.insert(out.planes.end(), y.planes.begin(), y.planes.end());
  return out;
}

PolyhedralDomain canonicalize(const PolyhedralDomain &d) {
  PolyhedralDomain out;
  out.canonical = true;
  std::vector<HalfPlane> ps;
  for (const auto &h : d.planes) {
    HalfPlane n = h.normalized();
    if (n.trivial()) {
      if (n.b < 0) continue;
      out.planes = {kEmptyMarker};
      return out;
    }
    ps.push_back(n);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  if (is_empty(PolyhedralDomain{ps})) {
    out.planes = {kEmptyMarker};
    return out;
  }
  for (std::size_t i = 0; i < ps.size();) {
    PolyhedralDomain others;
    for (std::size_t k = 0; k < ps.size(); ++k)
      if (k != i) others.planes.push_back(ps[k]);
    if (implies(others, ps[i]))
      ps.erase(ps.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  out.planes = std::move(ps);
  return out;
}

RSet r_set(const std::vector<HalfPlane> &planes) {
  std::vector<HalfPlane> norm;
  for (const auto &h : planes) norm.push_back(h.normalized());
  std::vector<int> group(planes.size(), -1);
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (group[i] >= 0) continue;
    group[i] = static_cast<int>(groups.size());
    groups.push_back({static_cast<int>(i)});
    for (std::size_t k = i + 1; k < norm.size(); ++k)
      if (group[k] < 0 && norm[k] == norm[i]) {
        group[k] = group[i];
        groups.back().push_back(static_cast<int>(k));
      }
  }
  RSet out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    PolyhedralDomain others;
    for (std::size_t k = 0; k < norm.size(); ++k)
      if (group[k] != static_cast<int>(g)) others.planes.push_back(norm[k]);
    if (implies(others, norm[static_cast<std::size_t>(groups[g][0])])) continue;
    std::vector<int> members;
    for (int k : groups[g]) members.push_back(k + 1);
    out.groups.push_back(members);
    out.indices.insert(out.indices.end(), members.begin(), members.end());
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

void SparseExponentPolynomial::validate() const {
  std::set<Monomial> seen;
  for (const auto &t : terms) {
    if (t.coeff == 0) throw validation_error("BadPolynomial", "term coefficients must be nonzero");
    if (t.e[0] < 0 || t.e[1] < 0 || t.e[2] < 0)
      throw validation_error("BadPolynomial", "exponents must be nonnegative");
    if (t.e == kOne) throw validation_error("BadPolynomial", "exponent triple (0,0,0) is the constant term");
    if (!seen.insert(t.e).second) throw validation_error("BadPolynomial", "exponent triples must be distinct");
  }
}

ExpandedPolynomial expand(const SparseExponentPolynomial &h) {
  h.validate();
  ExpandedPolynomial p{{kOne, 1}};
  for (const auto &t : h.terms) p[t.e] = t.coeff;
  return p;
}

SparseExponentPolynomial from_expanded(const ExpandedPolynomial &p) {
  auto it = p.find(kOne);
  if (it == p.end() || it->second != 1) throw validation_error("BadPolynomial", "constant term must be 1");
  SparseExponentPolynomial h;
  for (const auto &[m, c] : p)
    if (m != kOne && c != 0) h.terms.push_back({c, m});
  return h;
}

ExpandedPolynomial multiply(const ExpandedPolynomial &x, const ExpandedPolynomial &y) {
  ExpandedPolynomial out;
  for (const auto &[mx, cx] : x)
    for (const auto &[my, cy] : y) out[{mx[0] + my[0], mx[1] + my[1], mx[2] + my[2]}] += cx * cy;
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return out;
}

ExpandedPolynomial cyclotomic_product(const std::map<Monomial, int> &factors) {
  ExpandedPolynomial p{{kOne, 1}};
  for (const auto &[lambda, gamma] : factors)
    for (int k = 0; k < gamma; ++k) p = multiply(p, ExpandedPolynomial{{kOne, 1}, {lambda, -1}});
  return p;
}

bool CyclotomicFactorization::cyclotomic() const { return is_one(residual); }

CyclotomicFactorization detect_cyclotomic(const SparseExponentPolynomial &h) {
  CyclotomicFactorization out;
  out.residual = expand(h);
  auto peel = [&](const Monomial &lambda) {
    auto q = divide_cyclotomic(out.residual, lambda);
    if (!q) return false;
    out.residual = std::move(*q);
    ++out.factors[lambda];
    return true;
  };
  while (!is_one(out.residual)) {
    // The graded-least monomial of a cyclotomic product is one of its lambdas.
    Monomial least{};
    bool have = false;
    Monomial box{0, 0, 0};
    for (const auto &[m, c] : out.residual) {
      if (m == kOne) continue;
      if (!have || graded_less(m, least)) least = m;
      have = true;
      for (int i = 0; i < 3; ++i) box[i] = std::max(box[i], m[i]);
    }
    if (!have || peel(least)) continue;
    std::vector<Monomial> cands;
    for (int a = 0; a <= box[0]; ++a)
      for (int b = 0; b <= box[1]; ++b)
        for (int c = 0; c <= box[2]; ++c)
          if (a || b || c) cands.push_back({a, b, c});
    std::sort(cands.begin(), cands.end(), graded_less);
    bool found = false;
    for (const auto &lambda : cands)
      if (peel(lambda)) {
        found = true;
        break;
      }
    if (!found) break;
  }
  return out;
}

PolyhedralDomain wc_domain(const SparseExponentPolynomial &h, std::int64_t c, const Rational &delta) {
  return wc_domain(h, c, delta, {1});
}

PolyhedralDomain wc_domain(const SparseExponentPolynomial &h, std::int64_t c, const Rational &delta,
                           const std::vector<int> &inertia) {
  if (c == 0) throw validation_error("BadParameter", "c must be nonzero");
  if (delta < 0) throw validation_error("BadParameter", "delta must be nonnegative");
  if (inertia.empty() || std::find(inertia.begin(), inertia.end(), 1) == inertia.end() ||
      std::any_of(inertia.begin(), inertia.end(), [](int f) { return f < 1; }))
    throw validation_error("BadParameter", "inertia degrees must be positive and include 1");
  h.validate();
  if (h.terms.empty()) throw validation_error("ConstantPolynomial", "h must be non-constant");
  auto fac = detect_cyclotomic(h);
  if (!fac.cyclotomic_free()) throw validation_error("CyclotomicInput", "h has a factor of the form 1 - X^lambda");
  PolyhedralDomain d;
  for (int f : inertia)
    for (const auto &t : h.terms)
      d.planes.push_back({Rational(f * t.e[0]), Rational(f * t.e[1]), delta - Rational(c) * f * t.e[2]});
  return canonicalize(d);
}

namespace {

void zero_scan(const SparseExponentPolynomial &h, const ProbeRequest &req, const std::vector<std::uint64_t> &primes,
               ProbeResult &out) {
  std::vector<std::pair<double, double>> ae;  // |a_j|, e_j
  double emin = std::numeric_limits<double>::infinity();
  for (const auto &t : h.terms) {
    double e = static_cast<double>(Rational(t.e[0] * req.sigma1 + t.e[1] * req.sigma2 + Rational(req.c * t.e[2])));
    ae.push_back({std::fabs(static_cast<double>(t.coeff)), e});
    emin = std::min(emin, e);
  }
  auto bound = [&](double q) {
    double s = 0;
    for (auto [a, e] : ae) s += a * std::pow(q, -e);
    return s;
  };
  constexpr std::size_t kMaxUnresolved = 200;
  constexpr int kGrid = 32;
  out.grid_min = std::numeric_limits<double>::infinity();
  bool certified = true;
  for (int f : req.inertia)
    for (auto p : primes) {
      double q = std::pow(static_cast<double>(p), f);
      if (bound(q) < 1) {
        // With every e_j > 0 the bound decreases in q, so all larger q are covered.
        if (emin > 0) {
          auto qq = static_cast<std::uint64_t>(q);
          if (!out.zero_free_from || qq > *out.zero_free_from) out.zero_free_from = qq;
          break;
        }
        continue;
      }
      certified = certified && emin > 0;
      if (out.unresolved.size() >= kMaxUnresolved) continue;
      out.unresolved.push_back(static_cast<std::uint64_t>(q));
      const double r1 = std::pow(q, -static_cast<double>(req.sigma1)), r2 = std::pow(q, -static_cast<double>(req.sigma2));
      const double x3 = std::pow(q, -static_cast<double>(req.c));
      for (int a = 0; a < kGrid; ++a)
        for (int b = 0; b < kGrid; ++b) {
          std::complex<double> x1 = std::polar(r1, 2 * M_PI * a / kGrid), x2 = std::polar(r2, 2 * M_PI * b / kGrid);
          std::complex<double> v = 1;
          for (const auto &t : h.terms)
            v += static_cast<double>(t.coeff) * std::pow(x1, t.e[0]) * std::pow(x2, t.e[1]) * std::pow(x3, t.e[2]);
          out.grid_min = std::min(out.grid_min, std::abs(v));
        }
    }
  if (emin <= 0 || !certified) out.zero_free_from.reset();
  std::sort(out.unresolved.begin(), out.unresolved.end());
  out.unresolved.erase(std::unique(out.unresolved.begin(), out.unresolved.end()), out.unresolved.end());
  if (out.unresolved.empty()) out.grid_min = 0;
}

}  // namespace

ProbeResult probe_convergence(const SparseExponentPolynomial &h, const ProbeRequest &req) {
  h.validate();
  if (req.c == 0) throw validation_error("BadParameter", "c must be nonzero");
  if (req.prime_bound < 2) throw validation_error("BadParameter", "prime bound must be at least 2");
  ProbeResult out;
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t b = 10; b < req.prime_bound; b *= 10) checkpoints.push_back(b);
  checkpoints.push_back(req.prime_bound);

  // Grouped exponents per inertia degree: |h^(q)| <= sum_g |A_g| p^{-e_g}.
  std::vector<std::map<Rational, BigInt>> groups;
  if (!h.terms.empty()) {
    // Cyclotomic inputs are probed too: the comparison argument only needs |h^|.
    out.cyclotomic = !detect_cyclotomic(h).cyclotomic_free();
    for (int f : req.inertia) {
      if (f < 1) throw validation_error("BadParameter", "inertia degrees must be positive");
      std::map<Rational, BigInt> g;
      for (const auto &t : h.terms)
        g[Rational(f) * (t.e[0] * req.sigma1 + t.e[1] * req.sigma2 + Rational(req.c * t.e[2]))] += t.coeff;
      std::erase_if(g, [](const auto &kv) { return kv.second == 0; });
      if (!g.empty()) groups.push_back(std::move(g));
    }
    out.in_wc1 = std::all_of(h.terms.begin(), h.terms.end(), [&](const auto &t) {
      return t.e[0] * req.sigma1 + t.e[1] * req.sigma2 > 1 - Rational(req.c * t.e[2]);
    });
  }
  if (groups.empty()) {
    out.empty = h.terms.empty();
    out.in_wc1 = true;
    out.verdict = "converges";
    for (auto b : checkpoints) out.trace.push_back({b, 0.0, 0.0});
    out.cauchy_by = checkpoints.front();
    return out;
  }
  Rational emin = groups.front().begin()->first;
  for (const auto &g : groups) emin = std::min(emin, g.begin()->first);
  out.dominant_exponent = emin;
  if (mp::abs(emin - 1) <= req.margin)
    throw validation_error("InconclusiveBoundary",
                           "dominant exponent " + to_string(emin) + " is within the margin of 1");
  out.verdict = emin > 1 ? "converges" : "diverges";

  struct Group {
    double e, a;
  };
  std::vector<std::vector<Group>> gs;
  for (const auto &g : groups) {
    std::vector<Group> v;
    for (const auto &[e, a] : g) v.push_back({static_cast<double>(e), static_cast<double>(a)});
    gs.push_back(std::move(v));
  }
  const auto primes = primes_up_to(req.prime_bound);
  std::vector<double> term(primes.size());
  const auto n = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (std::int64_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(primes[static_cast<std::size_t>(i)]);
    double s = 0;
    for (const auto &g : gs) {
      double v = 0;
      for (const auto &x : g) v += x.a * std::pow(p, -x.e);
      s += std::fabs(v);
    }
    term[static_cast<std::size_t>(i)] = s;
  }
  constexpr std::size_t kBlock = 8192;
  auto tail = [&](std::uint64_t b) {
    double t = 0;
    for (const auto &g : gs)
      for (const auto &x : g) {
        if (x.e <= 1) return std::numeric_limits<double>::infinity();
        t += std::fabs(x.a) * std::pow(static_cast<double>(b), 1 - x.e) / (x.e - 1);
      }
    return t;
  };
  double sum = 0;
  std::size_t i = 0;
  for (auto b : checkpoints) {
    // Block sums in fixed order keep the rounding independent of the schedule.
    while (i < primes.size() && primes[i] <= b) {
      std::size_t end = std::min(primes.size(), (i / kBlock + 1) * kBlock);
      double block = 0;
      std::size_t k = i;
      for (; k < end && primes[k] <= b; ++k) block += term[k];
      sum += block;
      i = k;
    }
    double tb = tail(b);
    out.trace.push_back({b, sum, tb});
    if (!out.cauchy_by && tb <= req.tolerance) out.cauchy_by = b;
  }
  std::size_t start = primes.size() > kBlock ? primes.size() - kBlock : 0;
  for (std::size_t k = start; k < primes.size(); ++k) out.last_increment += term[k];
  zero_scan(h, req, primes, out);
  return out;
}

bool RayData::cone_in_wprime(int i) const {
  Rational s1 = 0, s2 = 0;
  for (int j : cones[static_cast<std::size_t>(i)].members) {
    s1 += rays[static_cast<std::size_t>(j)].A1;
    s2 += rays[static_cast<std::size_t>(j)].A2;
  }
  return s1 != 0 || s2 != 0;
}

void RayData::validate() const {
  for (const auto &r : rays) {
    if (r.B < 0) throw validation_error("NegativeB", "ray constants B_j must be nonnegative");
    if (require_integral)
      for (const Rational *v : {&r.A1, &r.A2, &r.B})
        if (mp::denominator(*v) != 1) throw validation_error("NonIntegralRay", "ray data must be integral");
  }
  for (const auto &c : cones) {
    if (c.members.empty()) throw validation_error("BadCone", "cones must be nonempty");
    std::set<int> seen;
    for (int j : c.members) {
      if (j < 0 || j >= static_cast<int>(rays.size()))
        throw validation_error("IndexOutOfRange", "cone member " + std::to_string(j + 1) + " is not a ray");
      if (!seen.insert(j).second) throw validation_error("BadCone", "cone members must be distinct");
    }
  }
}

HalfPlane ray_domain(const Ray &r, const Rational &delta) { return {r.A1, r.A2, 1 - r.B - delta}; }

PolyhedralDomain composite_domain(const RayData &rd, int k) {
  const Cone &cone = rd.cones[static_cast<std::size_t>(k)];
  HalfPlane total{0, 0, 1};
  PolyhedralDomain d;
  for (int j : cone.members) {
    const Ray &r = rd.rays[static_cast<std::size_t>(j)];
    total.a1 += r.A1;
    total.a2 += r.A2;
    total.b -= r.B;
    if (rd.ray_in_wprime(j)) d.planes.push_back({r.A1, r.A2, -r.B});
  }
  d.planes.push_back(total);
  return canonicalize(d);
}

PolyhedralDomain ray_intersection(const RayData &rd) {
  PolyhedralDomain d;
  for (std::size_t j = 0; j < rd.rays.size(); ++j)
    if (rd.ray_in_wprime(static_cast<int>(j))) d.planes.push_back(ray_domain(rd.rays[j], 0));
  return canonicalize(d);
}

SparseExponentPolynomial random_cyclotomic_free(std::mt19937_64 &rng, int max_terms, int max_exp) {
  std::uniform_int_distribution<int> nterms(1, max_terms), ex(0, max_exp), co(-3, 3);
  for (;;) {
    SparseExponentPolynomial h;
    std::set<Monomial> seen;
    int n = nterms(rng);
    while (static_cast<int>(h.terms.size()) < n) {
      Monomial m{ex(rng), ex(rng), ex(rng)};
      int a = co(rng);
      if (m == kOne || a == 0 || !seen.insert(m).second) continue;
      h.terms.push_back({a, m});
    }
    if (detect_cyclotomic(h).cyclotomic_free()) return h;
  }
}

std::map<Monomial, int> random_cyclotomic_factors(std::mt19937_64 &rng, int max_factors, int max_exp) {
  std::uniform_int_distribution<int> nf(1, max_factors), ex(0, max_exp);
  std::map<Monomial, int> f;
  int n = nf(rng);
  for (int k = 0; k < n;) {
    Monomial m{ex(rng), ex(rng), ex(rng)};
    if (m == kOne) continue;
    ++f[m];
    ++k;
  }
  return f;
}

RayData random_ray_data(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> nz(1, 5), a(-3, 3), bn(0, 6), bd(1, 3), coin(0, 3), ncones(1, 5);
  RayData rd;
  int z = nz(rng);
  for (int j = 0; j < z; ++j) {
    Ray r;
    if (coin(rng) != 0) {
      do {
        r.A1 = a(rng);
        r.A2 = a(rng);
      } while (r.A1 == 0 && r.A2 == 0);
    }
    r.B = Rational(bn(rng), bd(rng));
    rd.rays.push_back(r);
  }
  int nc = ncones(rng);
  std::uniform_int_distribution<int> pick(0, z - 1);
  for (int i = 0; i < nc; ++i) {
    Cone c;
    std::set<int> mem;
    int size = std::uniform_int_distribution<int>(1, z)(rng);
    while (static_cast<int>(mem.size()) < size) mem.insert(pick(rng));
    c.members.assign(mem.begin(), mem.end());
    rd.cones.push_back(c);
  }
  return rd;
}

nlohmann::ordered_json rational_to_json(const Rational &r) {
  if (mp::denominator(r) == 1) {
    const BigInt &n = mp::numerator(r);
    if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
      return static_cast<std::int64_t>(n);
  }
  return to_string(r);
}

Rational rational_from_json(const nlohmann::json &j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw validation_error("ParseError", "expected an integer or a rational string, got " + j.dump());
}

nlohmann::ordered_json domain_to_json(const PolyhedralDomain &d) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto &h : d.planes)
    out.push_back({{"a1", rational_to_json(h.a1)}, {"a2", rational_to_json(h.a2)}, {"b", rational_to_json(h.b)}});
  return out;
}

PolyhedralDomain domain_from_json(const nlohmann::json &j) {
  const nlohmann::json &list = j.is_object() && j.contains("halfplanes") ? j.at("halfplanes") : j;
  if (!list.is_array()) throw validation_error("ParseError", "a domain is a list of {a1, a2, b}");
  PolyhedralDomain d;
  try {
    for (const auto &h : list)
      d.planes.push_back({rational_from_json(h.at("a1")), rational_from_json(h.at("a2")), rational_from_json(h.at("b"))});
  } catch (const nlohmann::json::exception &e) {
    throw validation_error("ParseError", e.what());
  }
  return d;
}

nlohmann::ordered_json poly_to_json(const SparseExponentPolynomial &h) {
  nlohmann::ordered_json doc;
  if (h.c) doc["c"] = *h.c;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto &t : h.terms)
    terms.push_back({{"coeff", rational_to_json(Rational(t.coeff))}, {"e1", t.e[0]}, {"e2", t.e[1]}, {"e3", t.e[2]}});
  doc["terms"] = terms;
  return doc;
}

SparseExponentPolynomial poly_from_json(const nlohmann::json &j) {
  SparseExponentPolynomial h;
  try {
    if (j.contains("c")) h.c = j.at("c").get<std::int64_t>();
    for (const auto &t : j.at("terms")) {
      Rational a = rational_from_json(t.at("coeff"));
      if (mp::denominator(a) != 1) throw validation_error("BadPolynomial", "coefficients must be integers");
      h.terms.push_back({mp::numerator(a), {t.at("e1").get<int>(), t.at("e2").get<int>(), t.at("e3").get<int>()}});
    }
  } catch (const nlohmann::json::exception &e) {
    throw validation_error("ParseError", e.what());
  }
  h.validate();
  return h;
}

nlohmann::ordered_json factorization_to_json(const CyclotomicFactorization &f) {
  nlohmann::ordered_json doc;
  doc["cyclotomic"] = f.cyclotomic();
  doc["cyclotomic_free"] = f.cyclotomic_free();
  nlohmann::ordered_json fs = nlohmann::ordered_json::array();
  for (const auto &[l, g] : f.factors) fs.push_back({{"lambda", l}, {"gamma", g}});
  doc["factors"] = fs;
  if (!f.cyclotomic()) doc["residual"] = poly_to_json(from_expanded(f.residual));
  return doc;
}

nlohmann::ordered_json rset_to_json(const RSet &r) {
  return {{"indices", r.indices}, {"groups", r.groups}};
}

nlohmann::ordered_json probe_to_json(const ProbeResult &r) {
  nlohmann::ordered_json doc;
  doc["heuristic"] = true;
  doc["verdict"] = r.verdict;
  doc["empty"] = r.empty;
  if (!r.empty) doc["dominant_exponent"] = rational_to_json(r.dominant_exponent);
  doc["in_wc1"] = r.in_wc1;
  doc["cyclotomic"] = r.cyclotomic;
  nlohmann::ordered_json tr = nlohmann::ordered_json::array();
  for (const auto &t : r.trace) {
    nlohmann::ordered_json e{{"bound", t.bound}, {"partial_sum", t.partial_sum}};
    if (std::isfinite(t.tail_bound))
      e["tail_bound"] = t.tail_bound;
    else
      e["tail_bound"] = nullptr;
    tr.push_back(e);
  }
  doc["trace"] = tr;
  if (r.cauchy_by)
    doc["cauchy_by"] = *r.cauchy_by;
  else
    doc["cauchy_by"] = nullptr;
  doc["last_increment"] = r.last_increment;
  nlohmann::ordered_json zs;
  if (r.zero_free_from)
    zs["certified_from"] = *r.zero_free_from;
  else
    zs["certified_from"] = nullptr;
  zs["unresolved"] = r.unresolved;
  if (!r.unresolved.empty()) zs["grid_min_abs"] = r.grid_min;
  doc["zero_scan"] = zs;
  return doc;
}

RayData ray_data_from_json(const nlohmann::json &j) {
  RayData rd;
  try {
    for (const auto &r : j.at("rays"))
      rd.rays.push_back({rational_from_json(r.at("A1")), rational_from_json(r.at("A2")), rational_from_json(r.at("B"))});
    for (const auto &c : j.value("cones", nlohmann::json::array())) {
      Cone cone;
      for (int m : c.at("members")) cone.members.push_back(m - 1);
      if (c.contains("weight")) cone.weight = rational_from_json(c.at("weight"));
      rd.cones.push_back(cone);
    }
    rd.require_integral = j.value("integral", false);
  } catch (const nlohmann::json::exception &e) {
    throw validation_error("ParseError", e.what());
  }
  rd.validate();
  if (j.contains("wprime")) {
    const auto &flags = j.at("wprime");
    if (!flags.is_array() || flags.size() != rd.cones.size())
      throw validation_error("ParseError", "wprime needs one flag per cone");
    for (std::size_t i = 0; i < rd.cones.size(); ++i)
      if (flags[i].get<bool>() != rd.cone_in_wprime(static_cast<int>(i)))
        throw validation_error("WPrimeInconsistent",
                               "cone " + std::to_string(i + 1) + ": W' flag disagrees with its summed A-vector");
  }
  return rd;
}

nlohmann::ordered_json ray_data_to_json(const RayData &rd) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json rays = nlohmann::ordered_json::array();
  for (const auto &r : rd.rays)
    rays.push_back({{"A1", rational_to_json(r.A1)}, {"A2", rational_to_json(r.A2)}, {"B", rational_to_json(r.B)}});
  doc["rays"] = rays;
  nlohmann::ordered_json cones = nlohmann::ordered_json::array();
  for (const auto &c : rd.cones) {
    std::vector<int> m;
    for (int j : c.members) m.push_back(j + 1);
    cones.push_back({{"members", m}, {"weight", rational_to_json(c.weight)}});
  }
  doc["cones"] = cones;
  doc["integral"] = rd.require_integral;
  return doc;
}

std::string render_text(const PolyhedralDomain &d) {
  if (d.planes.empty()) return "whole plane\n";
  if (d.planes.size() == 1 && d.planes[0].trivial() && d.planes[0].b >= 0) return "empty\n";
  std::ostringstream os;
  for (const auto &h : d.planes) {
    std::string lhs;
    auto add = [&](const Rational &a, const char *v) {
      if (a == 0) return;
      std::string mag = mp::abs(a) == 1 ? std::string() : to_string(mp::abs(a)) + "*";
      if (lhs.empty())
        lhs = (a < 0 ? "-" : "") + mag + v;
      else
        lhs += (a < 0 ? " - " : " + ") + mag + v;
    };
    add(h.a1, "s1");
    add(h.a2, "s2");
    os << "Re(" << lhs << ") > " << to_string(h.b) << "\n";
  }
  return os.str();
}

}  // namespace bizeta

#include "bizeta/finite_quotient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "bizeta/error.hpp"
#include "bizeta/numeric.hpp"
#include "bizeta/parallel.hpp"

namespace bizeta {

std::uint64_t default_group_bound() {
  if (const char *env = std::getenv("BIZETA_MAX_GROUP_ORDER")) {
    char *end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw validation_error("BadEnvironment", "BIZETA_MAX_GROUP_ORDER must be a positive integer");
  }
  return 59049;  // 3^10
}

FiniteQuotientGroup::FiniteQuotientGroup(const LatticeProfile &profile, const GaloisRing &ring, std::uint64_t bound)
    : profile_(std::make_shared<const LatticeProfile>(profile)), R_(ring), h_(profile.h) {
  const int c = profile.class_c;
  if (ring.p() <= static_cast<std::uint64_t>(c))
    throw validation_error("InadmissiblePrime", "p = " + std::to_string(ring.p()) + " must exceed the class c = " +
                                                    std::to_string(c));
  if (c > 3) throw validation_error("ClassTooHigh", "BCH product is implemented for class at most 3");
  std::uint64_t order = 1;
  for (int i = 0; i < h_; ++i) {
    if (__builtin_mul_overflow(order, ring.size(), &order) || order > bound)
      throw size_bound_error("group order q^(hN) exceeds the bound " + std::to_string(bound));
  }
  order_ = order;
  const LieLattice &w = profile.working;
  for (int i = 0; i < h_; ++i)
    for (int j = i + 1; j < h_; ++j) {
      Vec v = w.bracket(i, j);
      for (int l = 0; l < h_; ++l)
        if (v[l] != 0) terms_.push_back({i, j, l, R_.from_int(v[l])});
    }
  if (c >= 2) half_ = R_.inverse(R_.from_int(2));
  if (c >= 3) twelfth_ = R_.inverse(R_.from_int(12));
  for (int i = 0; i < h_; ++i)
    for (int k = 0; k < R_.f(); ++k) {
      std::vector<Elem> v(h_, 0);
      v[i] = R_.t_power(k);
      gens_.push_back(encode(v));
    }
}

FiniteQuotientGroup build_group(const LatticeProfile &profile, const GaloisRing &ring, std::uint64_t bound) {
  return FiniteQuotientGroup(profile, ring, bound);
}

std::vector<FiniteQuotientGroup::Elem> FiniteQuotientGroup::decode(Code x) const {
  std::vector<Elem> v(h_);
  const std::uint64_t s = R_.size();
  for (int i = 0; i < h_; ++i) {
    v[i] = static_cast<Elem>(x % s);
    x /= s;
  }
  return v;
}

FiniteQuotientGroup::Code FiniteQuotientGroup::encode(const std::vector<Elem> &v) const {
  Code x = 0;
  for (int i = h_; i-- > 0;) x = x * R_.size() + v[i];
  return x;
}

std::vector<FiniteQuotientGroup::Elem> FiniteQuotientGroup::bracket(const std::vector<Elem> &x,
                                                                   const std::vector<Elem> &y) const {
  std::vector<Elem> out(h_, 0);
  for (const auto &t : terms_) {
    Elem m = R_.sub(R_.mul(x[t.i], y[t.j]), R_.mul(x[t.j], y[t.i]));
    if (m) out[t.l] = R_.add(out[t.l], R_.mul(m, t.c));
  }
  return out;
}

std::vector<FiniteQuotientGroup::Elem> FiniteQuotientGroup::mul(const std::vector<Elem> &x,
                                                               const std::vector<Elem> &y) const {
  std::vector<Elem> out(h_);
  for (int i = 0; i < h_; ++i) out[i] = R_.add(x[i], y[i]);
  const int c = profile_->class_c;
  if (c < 2) return out;
  std::vector<Elem> xy = bracket(x, y);
  for (int i = 0; i < h_; ++i) out[i] = R_.add(out[i], R_.mul(half_, xy[i]));
  if (c < 3) return out;
  // x*y = x + y + 1/2 [x,y] + 1/12 ([x,[x,y]] + [y,[y,x]])
  std::vector<Elem> yx(h_);
  for (int i = 0; i < h_; ++i) yx[i] = R_.neg(xy[i]);
  std::vector<Elem> a = bracket(x, xy), b = bracket(y, yx);
  for (int i = 0; i < h_; ++i) out[i] = R_.add(out[i], R_.mul(twelfth_, R_.add(a[i], b[i])));
  return out;
}

std::vector<FiniteQuotientGroup::Elem> FiniteQuotientGroup::inverse(const std::vector<Elem> &x) const {
  std::vector<Elem> out(h_);
  for (int i = 0; i < h_; ++i) out[i] = R_.neg(x[i]);
  return out;
}

FiniteQuotientGroup::Code FiniteQuotientGroup::conjugate(Code x, Code y) const {
  auto yv = decode(y);
  return encode(mul(mul(inverse(yv), decode(x)), yv));
}

std::uint64_t FiniteQuotientGroup::element_order(Code x) const {
  int v = R_.N();
  for (auto e : decode(x)) v = std::min(v, R_.valuation(e));
  return checked_pow(R_.p(), static_cast<unsigned>(R_.N() - v));
}

std::uint64_t FiniteQuotientGroup::exponent() const { return h_ == 0 ? 1 : R_.pN(); }

namespace {

constexpr std::uint32_t kUnassigned = 0xffffffffu;

void finish_partition(ConjugacyPartition &part) {
  part.sizes.assign(part.reps.size(), 0);
  for (auto c : part.class_of) ++part.sizes[c];
}

}  // namespace

ConjugacyPartition conjugacy_partition_serial(const FiniteQuotientGroup &G) {
  ConjugacyPartition part;
  part.class_of.assign(G.order(), kUnassigned);
  std::vector<std::uint64_t> queue;
  for (std::uint64_t x = 0; x < G.order(); ++x) {
    if (part.class_of[x] != kUnassigned) continue;
    const auto id = static_cast<std::uint32_t>(part.reps.size());
    part.reps.push_back(x);
    part.class_of[x] = id;
    queue.assign(1, x);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (auto g : G.generators()) {
        auto y = G.conjugate(queue[head], g);
        if (part.class_of[y] != kUnassigned) continue;
        part.class_of[y] = id;
        queue.push_back(y);
      }
  }
  finish_partition(part);
  return part;
}

ConjugacyPartition conjugacy_partition_parallel(const FiniteQuotientGroup &G) {
  const std::uint64_t n = G.order();
  const auto &gens = G.generators();
  const std::size_t ng = gens.size();
  std::vector<std::uint64_t> edges(n * ng);
  const auto total = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (std::int64_t x = 0; x < total; ++x)
    for (std::size_t g = 0; g < ng; ++g)
      edges[static_cast<std::size_t>(x) * ng + g] = G.conjugate(static_cast<std::uint64_t>(x), gens[g]);

  std::vector<std::uint64_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::uint64_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::uint64_t x = 0; x < n; ++x)
    for (std::size_t g = 0; g < ng; ++g) {
      auto a = find(x), b = find(edges[x * ng + g]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  ConjugacyPartition part;
  part.class_of.assign(n, kUnassigned);
  std::vector<std::uint32_t> id_of_root(n, kUnassigned);
  for (std::uint64_t x = 0; x < n; ++x) {
    auto r = find(x);
    if (id_of_root[r] == kUnassigned) {
      id_of_root[r] = static_cast<std::uint32_t>(part.reps.size());
      part.reps.push_back(x);
    }
    part.class_of[x] = id_of_root[r];
  }
  finish_partition(part);
  return part;
}

ConjugacyPartition conjugacy_partition_class_two(const FiniteQuotientGroup &G) {
  if (G.nilpotency_class() > 2) throw validation_error("ClassTooHigh", "class-two shortcut requires class <= 2");
  const GaloisRing &R = G.ring();
  const int h = G.rank();
  ConjugacyPartition part;
  part.class_of.assign(G.order(), kUnassigned);
  std::vector<std::vector<GaloisRing::Elem>> gen_vecs;
  for (auto g : G.generators()) gen_vecs.push_back(G.decode(g));
  std::vector<std::uint64_t> span;
  std::vector<std::uint8_t> in_span(G.order(), 0);
  for (std::uint64_t x = 0; x < G.order(); ++x) {
    if (part.class_of[x] != kUnassigned) continue;
    auto xv = G.decode(x);
    std::vector<std::vector<GaloisRing::Elem>> dirs;
    for (const auto &g : gen_vecs) {
      auto v = G.bracket(xv, g);
      if (std::any_of(v.begin(), v.end(), [](auto e) { return e != 0; })) dirs.push_back(v);
    }
    // Additive closure of the directions: the subgroup [x, G].
    span.assign(1, 0);
    in_span[0] = 1;
    for (std::size_t head = 0; head < span.size(); ++head) {
      auto sv = G.decode(span[head]);
      for (const auto &d : dirs) {
        std::vector<GaloisRing::Elem> t(h);
        for (int i = 0; i < h; ++i) t[i] = R.add(sv[i], d[i]);
        auto code = G.encode(t);
        if (in_span[code]) continue;
        in_span[code] = 1;
        span.push_back(code);
      }
    }
    const auto id = static_cast<std::uint32_t>(part.reps.size());
    part.reps.push_back(x);
    for (auto s : span) {
      auto sv = G.decode(s);
      for (int i = 0; i < h; ++i) sv[i] = R.add(sv[i], xv[i]);
      part.class_of[G.encode(sv)] = id;
      in_span[s] = 0;
    }
  }
  finish_partition(part);
  return part;
}

ConjugacyPartition conjugacy_partition(const FiniteQuotientGroup &G) {
  if (G.nilpotency_class() <= 2) return conjugacy_partition_class_two(G);
  return conjugacy_partition_parallel(G);
}

ClassData class_data(const ConjugacyPartition &part) {
  ClassData d;
  for (auto s : part.sizes) ++d.counts[s];
  d.k = part.sizes.size();
  return d;
}

ClassData conjugacy_classes(const FiniteQuotientGroup &G, std::uint64_t bound) {
  if (G.order() > bound) throw size_bound_error("group order exceeds the enumeration bound " + std::to_string(bound));
  return class_data(conjugacy_partition(G));
}

std::uint64_t DegreeData::total() const {
  std::uint64_t t = 0;
  for (const auto &[n, c] : counts) t += c;
  return t;
}

std::uint64_t dixon_prime(std::uint64_t e, std::uint64_t order, std::uint64_t search_limit) {
  // Smallest l = 1 (mod e) with l > 2 sqrt(order), i.e. l^2 > 4 order.
  std::uint64_t l = 1;
  while (true) {
    l += e;
    if (l > search_limit) throw validation_error("NoSuitablePrime", "no Dixon prime below the search limit");
    if (static_cast<unsigned __int128>(l) * l <= static_cast<unsigned __int128>(4) * order) continue;
    if (is_prime(l)) return l;
  }
}

namespace {

using Row = std::vector<std::uint64_t>;

// Reduced row echelon form in place over F_l; returns pivot columns.
std::vector<std::size_t> rref(std::vector<Row> &m, std::uint64_t l) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    auto inv = inv_mod(m[r][c], l);
    for (auto &x : m[r]) x = mul_mod(x, inv, l);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      auto f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = (m[i][j] + l - mul_mod(f, m[r][j], l)) % l;
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

// Basis (rows) of the null space {v : M v = 0} of a square matrix.
std::vector<Row> null_space(std::vector<Row> m, std::uint64_t l) {
  const std::size_t n = m.size();
  auto pivots = rref(m, l);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Row> out;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Row v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = (l - m[r][free]) % l;
    out.push_back(std::move(v));
  }
  return out;
}

// Characteristic polynomial det(xI - A), coefficients low to high, via Hessenberg form.
Row char_poly(std::vector<Row> H, std::uint64_t l) {
  const std::size_t n = H.size();
  auto sub = [l](std::uint64_t a, std::uint64_t b) { return (a + l - b) % l; };
  for (std::size_t m = 1; m + 1 <= n; ++m) {
    std::size_t i = m;
    while (i < n && H[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(H[i], H[m]);
      for (std::size_t r = 0; r < n; ++r) std::swap(H[r][i], H[r][m]);
    }
    auto inv = inv_mod(H[m][m - 1], l);
    for (std::size_t r = m + 1; r < n; ++r) {
      auto u = mul_mod(H[r][m - 1], inv, l);
      if (u == 0) continue;
      for (std::size_t j = 0; j < n; ++j) H[r][j] = sub(H[r][j], mul_mod(u, H[m][j], l));
      for (std::size_t j = 0; j < n; ++j) H[j][m] = (H[j][m] + mul_mod(u, H[j][r], l)) % l;
    }
  }
  // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}  (1-based)
  std::vector<Row> p(n + 1);
  p[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    Row next(k + 1, 0);
    for (std::size_t d = 0; d < p[k - 1].size(); ++d) {
      next[d + 1] = (next[d + 1] + p[k - 1][d]) % l;
      next[d] = sub(next[d], mul_mod(H[k - 1][k - 1], p[k - 1][d], l));
    }
    std::uint64_t prod = 1;
    for (std::size_t i = k - 1; i >= 1; --i) {
      prod = mul_mod(prod, H[i][i - 1], l);
      if (prod == 0) break;
      auto c = mul_mod(H[i - 1][k - 1], prod, l);
      for (std::size_t d = 0; d < p[i - 1].size(); ++d) next[d] = sub(next[d], mul_mod(c, p[i - 1][d], l));
    }
    p[k] = std::move(next);
  }
  return p[n];
}

std::uint64_t eval_poly(const Row &poly, std::uint64_t x, std::uint64_t l) {
  std::uint64_t r = 0;
  for (std::size_t d = poly.size(); d-- > 0;) r = (mul_mod(r, x, l) + poly[d]) % l;
  return r;
}

}  // namespace

DixonResult character_degrees(const FiniteQuotientGroup &G, std::uint64_t bound) {
  if (G.order() > bound)
    throw size_bound_error("group order exceeds the character bound " + std::to_string(bound));
  DixonResult out;
  ConjugacyPartition part = conjugacy_partition(G);
  const std::size_t k = part.reps.size();
  if (k == G.order()) {
    out.abelian = true;
    out.degrees.counts[1] = G.order();
    return out;
  }
  const std::uint64_t l = dixon_prime(G.exponent(), G.order());
  out.field_prime = l;

  std::vector<std::vector<std::uint64_t>> members(k);
  for (std::uint64_t x = 0; x < G.order(); ++x) members[part.class_of[x]].push_back(x);
  std::vector<std::size_t> inv_class(k);
  for (std::size_t c = 0; c < k; ++c) inv_class[c] = part.class_of[G.inverse(part.reps[c])];

  // (M_j)_{il} = #{x in C_j : x^{-1} z_l in C_i}
  auto class_matrix = [&](std::size_t j) {
    std::vector<Row> M(k, Row(k, 0));
    std::vector<std::vector<GaloisRing::Elem>> zs;
    for (std::size_t c = 0; c < k; ++c) zs.push_back(G.decode(part.reps[c]));
    for (auto x : members[j]) {
      auto xinv = G.inverse(G.decode(x));
      for (std::size_t c = 0; c < k; ++c) {
        auto i = part.class_of[G.encode(G.mul(xinv, zs[c]))];
        M[i][c] = (M[i][c] + 1) % l;
      }
    }
    return M;
  };

  std::vector<std::vector<Row>> spaces;  // each: RREF row basis
  {
    std::vector<Row> full(k, Row(k, 0));
    for (std::size_t i = 0; i < k; ++i) full[i][i] = 1;
    spaces.push_back(std::move(full));
  }
  for (std::size_t j = 1; j < k; ++j) {
    if (std::all_of(spaces.begin(), spaces.end(), [](const auto &s) { return s.size() == 1; })) break;
    auto M = class_matrix(j);
    std::vector<std::vector<Row>> next;
    for (auto &W : spaces) {
      const std::size_t d = W.size();
      if (d == 1) {
        next.push_back(std::move(W));
        continue;
      }
      std::vector<Row> basis = W;
      auto pivots = rref(basis, l);
      // Restriction R with (M b_r) = sum_s R[s][r] b_s.
      std::vector<Row> Rm(d, Row(d, 0));
      for (std::size_t r = 0; r < d; ++r) {
        Row mb(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
          std::uint64_t s = 0;
          for (std::size_t c = 0; c < k; ++c)
            if (basis[r][c]) s = (s + mul_mod(M[i][c], basis[r][c], l)) % l;
          mb[i] = s;
        }
        for (std::size_t s = 0; s < d; ++s) Rm[s][r] = mb[pivots[s]];
      }
      Row poly = char_poly(Rm, l);
      std::vector<std::uint64_t> roots;
      for (std::uint64_t lam = 0; lam < l; ++lam)
        if (eval_poly(poly, lam, l) == 0) roots.push_back(lam);
      if (roots.size() == 1) {
        next.push_back(std::move(basis));
        continue;
      }
      std::size_t found = 0;
      for (auto lam : roots) {
        std::vector<Row> shifted = Rm;
        for (std::size_t s = 0; s < d; ++s) shifted[s][s] = (shifted[s][s] + l - lam) % l;
        std::vector<Row> sub;
        for (const auto &coef : null_space(shifted, l)) {
          Row v(k, 0);
          for (std::size_t s = 0; s < d; ++s)
            if (coef[s])
              for (std::size_t c = 0; c < k; ++c) v[c] = (v[c] + mul_mod(coef[s], basis[s][c], l)) % l;
          sub.push_back(std::move(v));
        }
        rref(sub, l);
        found += sub.size();
        next.push_back(std::move(sub));
      }
      if (found != d) throw std::logic_error("character_degrees: class matrix is not diagonalisable mod l");
    }
    spaces = std::move(next);
  }
  const std::uint64_t order_mod = G.order() % l;
  const auto max_deg = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(G.order())) + 1);
  for (const auto &W : spaces) {
    if (W.size() != 1) throw std::logic_error("character_degrees: eigenspaces did not split");
    Row w = W[0];
    if (w[0] == 0) throw std::logic_error("character_degrees: eigenvector vanishes at the identity");
    auto inv0 = inv_mod(w[0], l);
    for (auto &x : w) x = mul_mod(x, inv0, l);
    std::uint64_t s = 0;
    for (std::size_t c = 0; c < k; ++c)
      s = (s + mul_mod(mul_mod(w[c], w[inv_class[c]], l), inv_mod(part.sizes[c] % l, l), l)) % l;
    auto deg_sq = mul_mod(order_mod, inv_mod(s, l), l);
    std::uint64_t deg = 0;
    for (std::uint64_t n = 1; n <= max_deg; ++n)
      if (n * n <= G.order() && (n * n) % l == deg_sq) {
        deg = n;
        break;
      }
    if (deg == 0) throw std::logic_error("character_degrees: no integral degree matches");
    ++out.degrees.counts[deg];
  }
  return out;
}

std::vector<PrimeStatus> admissible_primes(const LatticeProfile &profile, std::uint64_t up_to) {
  std::vector<PrimeStatus> out;
  for (auto p : primes_up_to(up_to)) {
    PrimeStatus s{p, true, ""};
    if (p == 2 && profile.class_c == 3) s = {p, false, "Q2-class"};
    else if (p <= static_cast<std::uint64_t>(profile.class_c)) s = {p, false, "p<=c"};
    else if (std::binary_search(profile.bad_primes.begin(), profile.bad_primes.end(), p)) s = {p, false, "Q2-index"};
    out.push_back(s);
  }
  return out;
}

void require_admissible(const LatticeProfile &profile, std::uint64_t p) {
  if (!is_prime(p)) throw validation_error("NotPrime", std::to_string(p) + " is not prime");
  for (const auto &s : admissible_primes(profile, p))
    if (s.p == p && !s.admissible)
      throw validation_error("InadmissiblePrime", "p = " + std::to_string(p) + " is excluded (" + s.reason + ")");
}

nlohmann::ordered_json class_data_to_json(const ClassData &d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto &[n, c] : d.counts) j[std::to_string(n)] = c;
  return j;
}

nlohmann::ordered_json degree_data_to_json(const DegreeData &d) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto &[n, c] : d.counts) j[std::to_string(n)] = c;
  return j;
}

}  // namespace bizeta

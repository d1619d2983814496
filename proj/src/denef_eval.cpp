#include "bizeta/denef_eval.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <sstream>

#include "bizeta/error.hpp"
#include "bizeta/parallel.hpp"

namespace bizeta {

namespace {

namespace mp = boost::multiprecision;

std::int64_t as_int64(const Rational &r, const char *what) {
  BigInt v = to_integer(r, what);
  if (mp::abs(v) > BigInt(1) << 40) throw validation_error("BadParameter", std::string(what) + " is too large");
  return static_cast<std::int64_t>(v);
}

void check_subset(const DenefData &data, const std::vector<int> &U) {
  std::set<int> seen;
  for (int u : U)
    if (u < 0 || u >= data.t || !seen.insert(u).second)
      throw validation_error("IndexOutOfRange", "U must be a subset of T");
}

// Exponent of one summand, in the coordinates m = (m_u for u in U, m_{t+1}).
struct Summand {
  const DenefData &data;
  const std::vector<int> &U;
  std::vector<std::int64_t> s;

  std::int64_t operator()(const std::vector<std::int64_t> &m) const {
    const std::int64_t mt = m.back();
    std::int64_t L = mt;
    for (std::size_t v = 0; v < U.size(); ++v) L += data.nu[U[v]] * m[v];
    for (int k = 0; k < data.l; ++k) {
      std::int64_t lo = 0;
      for (std::size_t i = 0; i < data.e[k].size(); ++i) {
        std::int64_t Lki = data.e[k][i] * mt;
        for (std::size_t v = 0; v < U.size(); ++v) Lki += data.N[U[v]][k][i] * m[v];
        Lki -= data.shift(k, static_cast<int>(i));
        lo = i == 0 ? Lki : std::min(lo, Lki);
      }
      L -= s[k] * lo;
    }
    return L;
  }
};

Rational prefactor(const DenefData &data, const BigInt &q) {
  // (1 - 1/q)^{d+1} = (q - 1)^{d+1} / q^{d+1}
  Rational p(BigInt(mp::pow(BigInt(q - 1), static_cast<unsigned>(data.d + 1))),
             BigInt(mp::pow(q, static_cast<unsigned>(data.d + 1))));
  return p * rational_pow(q, -static_cast<std::int64_t>(data.shift_N) * data.d * (data.d - 1) / 2);
}

std::vector<std::int64_t> integral_s(const DenefData &data, const std::vector<Rational> &s) {
  if (static_cast<int>(s.size()) != data.l) throw validation_error("BadParameter", "s-point has the wrong length");
  std::vector<std::int64_t> out;
  for (const auto &v : s) out.push_back(as_int64(v, "s-variable"));
  return out;
}

// Per-coordinate slopes: exact asymptotic ones and the ones of a linear upper bound.
struct Slopes {
  std::vector<std::int64_t> exact, bound;
  std::int64_t offset = 0;  // constant term of the linear upper bound
};

Slopes slopes(const DenefData &data, const std::vector<int> &U, const std::vector<std::int64_t> &s) {
  Slopes out;
  auto coeff = [&](std::size_t v, int k, std::size_t i) -> std::int64_t {
    return v < U.size() ? data.N[U[v]][k][i] : data.e[k][i];
  };
  for (std::size_t v = 0; v <= U.size(); ++v) {
    std::int64_t base = v < U.size() ? data.nu[U[v]] : 1;
    std::int64_t ex = base, bd = base;
    for (int k = 0; k < data.l; ++k) {
      std::int64_t mn = coeff(v, k, 0), mx = mn;
      for (std::size_t i = 1; i < data.e[k].size(); ++i) {
        mn = std::min(mn, coeff(v, k, i));
        mx = std::max(mx, coeff(v, k, i));
      }
      ex -= s[k] * mn;
      bd -= s[k] * (s[k] >= 0 ? mn : mx);
    }
    out.exact.push_back(ex);
    out.bound.push_back(bd);
  }
  for (int k = 0; k < data.l; ++k) {
    std::int64_t mn = data.shift(k, 0), mx = mn;
    for (std::size_t i = 1; i < data.e[k].size(); ++i) {
      mn = std::min(mn, data.shift(k, static_cast<int>(i)));
      mx = std::max(mx, data.shift(k, static_cast<int>(i)));
    }
    out.offset += s[k] * (s[k] >= 0 ? mx : mn);
  }
  return out;
}

// sum_{m >= lo} q^{g m} for g < 0.
Rational geometric_tail(const BigInt &q, std::int64_t g, std::int64_t lo) {
  return rational_pow(q, g * lo) / (1 - rational_pow(q, g));
}

std::uint64_t box_size(std::size_t dims, int width) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < dims; ++i)
    if (__builtin_mul_overflow(n, static_cast<std::uint64_t>(width), &n) || n > 50'000'000)
      throw size_bound_error("truncated Xi sum has more than 5e7 summands");
  return n;
}

}  // namespace

void DenefData::validate(bool allow_negative_shift) const {
  auto bad = [](const std::string &m) { return validation_error("BadDenefData", m); };
  if (d < 1) throw bad("d must be at least 1");
  if (l < 1) throw bad("at least one s-variable is required");
  if (t < 0) throw bad("t must be nonnegative");
  if (static_cast<int>(nu.size()) != t) throw bad("nu needs one entry per u in T");
  for (int v : nu)
    if (v < 1) throw bad("nu_u must be at least 1");
  if (static_cast<int>(e.size()) != l) throw bad("e needs one row per s-variable");
  for (const auto &row : e) {
    if (row.empty()) throw bad("every J_kappa must be nonempty");
    for (int v : row)
      if (v < 0) throw bad("e_{kappa iota} must be nonnegative");
  }
  if (static_cast<int>(N.size()) != t) throw bad("N needs one block per u in T");
  for (const auto &blk : N) {
    if (blk.size() != e.size()) throw bad("N blocks must match the shape of e");
    for (std::size_t k = 0; k < blk.size(); ++k) {
      if (blk[k].size() != e[k].size()) throw bad("N blocks must match the shape of e");
      for (int v : blk[k])
        if (v < 0) throw bad("N_{u kappa iota} must be nonnegative");
    }
  }
  if (shift_N < 1) throw bad("N must be at least 1");
  if (!d_shift.empty()) {
    if (d_shift.size() != e.size()) throw bad("d_shift must match the shape of e");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (d_shift[k].size() != e[k].size()) throw bad("d_shift must match the shape of e");
      for (auto v : d_shift[k])
        if (v < 0 && !allow_negative_shift) throw bad("d_{kappa iota} must be nonnegative");
    }
  }
  for (const auto &[U, c] : c_U)
    for (int u : U)
      if (u < 0 || u >= t) throw bad("c_U keys must be subsets of T");
  if (specialization) {
    const auto &sp = *specialization;
    if (static_cast<int>(sp.a1.size()) != l || static_cast<int>(sp.a2.size()) != l ||
        static_cast<int>(sp.b.size()) != l)
      throw bad("specialization needs one entry per s-variable");
  }
}

std::vector<Rational> DenefData::specialize(const Rational &s1, const Rational &s2) const {
  if (!specialization) throw validation_error("BadDenefData", "no specialization s_k = a1 s1 + a2 s2 + b given");
  std::vector<Rational> s;
  for (int k = 0; k < l; ++k)
    s.push_back(specialization->a1[k] * s1 + specialization->a2[k] * s2 + specialization->b[k]);
  return s;
}

XiValue xi_truncated(const DenefData &data, const std::vector<int> &U, const BigInt &q, const std::vector<Rational> &s,
                     int depth) {
  data.validate(true);
  check_subset(data, U);
  if (q < 2) throw validation_error("BadParameter", "q must be at least 2");
  if (depth < std::max(1, data.shift_N)) throw validation_error("BadParameter", "depth must be at least max(1, N)");
  const auto si = integral_s(data, s);
  const Slopes sl = slopes(data, U, si);
  for (std::size_t v = 0; v < sl.exact.size(); ++v)
    if (sl.exact[v] >= 0)
      throw validation_error("DivergentAtPoint",
                             "summands do not decay along coordinate " + std::to_string(v + 1) + " (slope " +
                                 std::to_string(sl.exact[v]) + ")");
  for (auto g : sl.bound)
    if (g >= 0) throw validation_error("TailBoundUnavailable", "no geometric majorant at this point");

  const std::size_t dims = U.size() + 1;
  const int N = data.shift_N;
  std::vector<std::int64_t> lo(dims, N), width(dims, depth - N + 1);
  lo.back() = 1;
  width.back() = depth;
  std::uint64_t total = 1;
  for (auto w : width) total *= static_cast<std::uint64_t>(w);
  box_size(dims, static_cast<int>(*std::max_element(width.begin(), width.end())));

  Summand E{data, U, si};
  using Hist = std::map<std::int64_t, std::uint64_t>;
  Hist hist = chunked_reduce(
      total, 4096, Hist{},
      [&](std::uint64_t a, std::uint64_t b, Hist &acc) {
        std::vector<std::int64_t> m(dims);
        for (std::uint64_t x = a; x < b; ++x) {
          std::uint64_t r = x;
          for (std::size_t v = 0; v < dims; ++v) {
            m[v] = lo[v] + static_cast<std::int64_t>(r % static_cast<std::uint64_t>(width[v]));
            r /= static_cast<std::uint64_t>(width[v]);
          }
          ++acc[E(m)];
        }
      },
      [](Hist &into, const Hist &from) {
        for (const auto &[k, c] : from) into[k] += c;
      });

  const Rational pre = prefactor(data, q);
  XiValue out;
  out.depth = depth;
  for (const auto &[ex, c] : hist) out.partial += rational_pow(q, ex) * c;
  out.partial *= pre;
  // Union bound: the omitted summands have some coordinate beyond the depth.
  Rational tail = 0;
  for (std::size_t v = 0; v < dims; ++v) {
    Rational term = geometric_tail(q, sl.bound[v], depth + 1);
    for (std::size_t w = 0; w < dims; ++w)
      if (w != v) term *= geometric_tail(q, sl.bound[w], lo[w]);
    tail += term;
  }
  out.tail = pre * rational_pow(q, sl.offset) * tail;
  return out;
}

Rational xi_truncated_reference(const DenefData &data, const std::vector<int> &U, const BigInt &q,
                                const std::vector<Rational> &s, int depth) {
  data.validate(true);
  check_subset(data, U);
  const auto si = integral_s(data, s);
  Summand E{data, U, si};
  const std::size_t dims = U.size() + 1;
  std::vector<std::int64_t> m(dims, data.shift_N);
  m.back() = 1;
  Rational sum = 0;
  for (;;) {
    sum += rational_pow(q, E(m));
    std::size_t v = 0;
    for (; v < dims; ++v) {
      if (m[v] < depth) {
        ++m[v];
        break;
      }
      m[v] = v + 1 == dims ? 1 : data.shift_N;
    }
    if (v == dims) break;
  }
  return prefactor(data, q) * sum;
}

Rational ray_closed_form(const RayData &rays, const BigInt &q, const Rational &s1, const Rational &s2) {
  rays.validate();
  Rational total = 0;
  for (std::size_t i = 0; i < rays.cones.size(); ++i) {
    if (!rays.cone_in_wprime(static_cast<int>(i))) continue;
    Rational prod = rays.cones[i].weight;
    for (int j : rays.cones[i].members) {
      const Ray &r = rays.rays[static_cast<std::size_t>(j)];
      const Rational ex = r.A1 * s1 + r.A2 * s2 + r.B;
      if (ex == 0) throw validation_error("PoleHit", "ray " + std::to_string(j + 1) + " has exponent 0 at this point");
      if (ex < 0)
        throw validation_error("DivergentAtPoint", "ray " + std::to_string(j + 1) + " has negative exponent");
      Rational x = rational_pow(q, -as_int64(ex, "ray exponent"));
      prod *= x / (1 - x);
    }
    total += prod;
  }
  return total;
}

ShiftedXi shift_identity(const DenefData &data, const std::vector<int> &U) {
  check_subset(data, U);
  const std::int64_t n1 = data.shift_N - 1;
  ShiftedXi out{data, 0};
  out.level_one.shift_N = 1;
  out.level_one.d_shift.assign(data.e.size(), {});
  for (std::size_t k = 0; k < data.e.size(); ++k)
    for (std::size_t i = 0; i < data.e[k].size(); ++i) {
      std::int64_t v = data.shift(static_cast<int>(k), static_cast<int>(i));
      for (int u : U) v -= n1 * data.N[u][k][i];
      out.level_one.d_shift[k].push_back(v);
    }
  std::int64_t nus = 0;
  for (int u : U) nus += data.nu[u];
  out.q_exponent = n1 * (nus - static_cast<std::int64_t>(data.d) * (data.d - 1) / 2);
  return out;
}

ShiftedXi shift_identity_uncorrected(const DenefData &data, const std::vector<int> &U) {
  check_subset(data, U);
  const std::int64_t n1 = data.shift_N - 1;
  ShiftedXi out{data, 0};
  out.level_one.shift_N = 1;
  out.level_one.d_shift.assign(data.e.size(), {});
  for (std::size_t k = 0; k < data.e.size(); ++k)
    for (std::size_t i = 0; i < data.e[k].size(); ++i) {
      std::int64_t v = data.shift(static_cast<int>(k), static_cast<int>(i));
      for (int u : U) v += n1 * data.N[u][k][i];
      out.level_one.d_shift[k].push_back(v);
    }
  for (int u : U) out.q_exponent += n1 * data.nu[u];
  return out;
}

ShapeReport denef_shape_check(const DenefData &data, const std::vector<int> &U, const RayData &rays,
                              const BigInt &q, const std::vector<std::pair<Rational, Rational>> &grid, int depth) {
  ShapeReport rep;
  rep.rows.resize(grid.size());
  std::vector<std::exception_ptr> errs(grid.size());
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (std::int64_t g = 0; g < n; ++g) {
    auto &row = rep.rows[static_cast<std::size_t>(g)];
    try {
      row.s1 = grid[static_cast<std::size_t>(g)].first;
      row.s2 = grid[static_cast<std::size_t>(g)].second;
      row.xi = xi_truncated(data, U, q, data.specialize(row.s1, row.s2), depth);
      row.closed = ray_closed_form(rays, q, row.s1, row.s2);
      row.ok = mp::abs(row.closed - row.xi.partial) <= row.xi.tail;
      row.low_power = row.xi.tail * 10 >= mp::abs(row.closed);
    } catch (...) {
      errs[static_cast<std::size_t>(g)] = std::current_exception();
    }
  }
  for (auto &e : errs)
    if (e) std::rethrow_exception(e);
  rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const ShapeRow &r) { return r.ok; });
  rep.low_power = std::any_of(rep.rows.begin(), rep.rows.end(), [](const ShapeRow &r) { return r.low_power; });
  return rep;
}

void require_consistent(const ShapeReport &r) {
  for (const auto &row : r.rows)
    if (!row.ok)
      throw mismatch_error("MismatchBeyondTail", "closed form and truncated sum differ by more than the tail at (" +
                                                     to_string(row.s1) + ", " + to_string(row.s2) + ")");
}

DenefData separable_instance(int b) {
  DenefData d;
  d.d = 1;
  d.l = 1;
  d.t = 0;
  d.e = {{1}};
  d.specialization = DenefData::Specialization{{Rational(1)}, {Rational(1)}, {Rational(b)}};
  return d;
}

RayData separable_rays(int b, const BigInt &q) {
  RayData rd;
  rd.rays.push_back({1, 1, Rational(b - 1)});
  Rational w = 1 - Rational(BigInt(1), q);
  rd.cones.push_back({{0}, w * w});
  return rd;
}

DenefData random_denef_data(std::mt19937_64 &rng) {
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  DenefData d;
  d.d = uni(1, 3);
  d.l = uni(1, 2);
  d.t = uni(1, 2);
  std::vector<int> J(static_cast<std::size_t>(d.l));
  for (auto &j : J) j = uni(1, 2);
  for (int u = 0; u < d.t; ++u) d.nu.push_back(uni(1, 3));
  for (int k = 0; k < d.l; ++k) {
    d.e.emplace_back();
    d.d_shift.emplace_back();
    for (int i = 0; i < J[k]; ++i) {
      d.e[k].push_back(uni(1, 2));
      d.d_shift[k].push_back(uni(0, 3));
    }
  }
  // Positive multiplicities keep every coordinate direction decaying for large s.
  for (int u = 0; u < d.t; ++u) {
    d.N.emplace_back();
    for (int k = 0; k < d.l; ++k) {
      d.N[u].emplace_back();
      for (int i = 0; i < J[k]; ++i) d.N[u][k].push_back(uni(1, 2));
    }
  }
  d.shift_N = uni(1, 3);
  return d;
}

DenefData denef_from_json(const nlohmann::json &j) {
  DenefData d;
  try {
    d.d = j.at("d").get<int>();
    d.l = j.at("l").get<int>();
    d.t = j.value("t", 0);
    d.nu = j.value("nu", std::vector<int>{});
    d.e = j.at("e").get<std::vector<std::vector<int>>>();
    d.N = j.value("N", std::vector<std::vector<std::vector<int>>>{});
    d.shift_N = j.value("shift_N", 1);
    d.d_shift = j.value("d_shift", std::vector<std::vector<std::int64_t>>{});
    if (j.contains("c_U"))
      for (const auto &c : j.at("c_U")) {
        std::vector<int> U;
        for (int u : c.at("U")) U.push_back(u - 1);
        std::sort(U.begin(), U.end());
        d.c_U[U] = rational_from_json(c.at("value"));
      }
    if (j.contains("specialization")) {
      DenefData::Specialization sp;
      for (const auto &v : j.at("specialization").at("a1")) sp.a1.push_back(rational_from_json(v));
      for (const auto &v : j.at("specialization").at("a2")) sp.a2.push_back(rational_from_json(v));
      for (const auto &v : j.at("specialization").at("b")) sp.b.push_back(rational_from_json(v));
      d.specialization = sp;
    }
  } catch (const nlohmann::json::exception &e) {
    throw validation_error("ParseError", e.what());
  }
  d.validate();
  return d;
}

nlohmann::ordered_json denef_to_json(const DenefData &d) {
  nlohmann::ordered_json doc;
  doc["d"] = d.d;
  doc["l"] = d.l;
  doc["t"] = d.t;
  doc["nu"] = d.nu;
  doc["e"] = d.e;
  doc["N"] = d.N;
  doc["shift_N"] = d.shift_N;
  if (!d.d_shift.empty()) doc["d_shift"] = d.d_shift;
  if (!d.c_U.empty()) {
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto &[U, v] : d.c_U) {
      std::vector<int> one;
      for (int u : U) one.push_back(u + 1);
      cs.push_back({{"U", one}, {"value", rational_to_json(v)}});
    }
    doc["c_U"] = cs;
  }
  if (d.specialization) {
    auto list = [](const std::vector<Rational> &v) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (const auto &x : v) a.push_back(rational_to_json(x));
      return a;
    };
    doc["specialization"] = {{"a1", list(d.specialization->a1)},
                             {"a2", list(d.specialization->a2)},
                             {"b", list(d.specialization->b)}};
  }
  return doc;
}

nlohmann::ordered_json xi_to_json(const XiValue &v) {
  return {{"depth", v.depth}, {"partial", to_string(v.partial)}, {"tail_bound", to_string(v.tail)}};
}

nlohmann::ordered_json shape_to_json(const ShapeReport &r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto &row : r.rows)
    rows.push_back({{"s1", rational_to_json(row.s1)},
                    {"s2", rational_to_json(row.s2)},
                    {"partial", to_string(row.xi.partial)},
                    {"tail_bound", to_string(row.xi.tail)},
                    {"closed_form", to_string(row.closed)},
                    {"difference", to_string(row.closed - row.xi.partial)},
                    {"ok", row.ok},
                    {"low_power", row.low_power}});
  nlohmann::ordered_json doc;
  doc["pass"] = r.pass;
  doc["low_power"] = r.low_power;
  if (!r.pass) doc["error"] = "MismatchBeyondTail";
  doc["rows"] = rows;
  return doc;
}

std::string render_text(const ShapeReport &r) {
  std::ostringstream os;
  os << "s1\ts2\tok\tlow_power\t|diff| <= tail\n";
  for (const auto &row : r.rows) {
    os << to_string(row.s1) << "\t" << to_string(row.s2) << "\t" << (row.ok ? "yes" : "NO") << "\t"
       << (row.low_power ? "yes" : "no") << "\t" << static_cast<double>(mp::abs(row.closed - row.xi.partial))
       << " <= " << static_cast<double>(row.xi.tail) << "\n";
  }
  os << (r.pass ? "PASS" : "FAIL: MismatchBeyondTail") << (r.low_power ? " (low power)" : "") << "\n";
  return os.str();
}

}  // namespace bizeta

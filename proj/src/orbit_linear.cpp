#include "bizeta/orbit_linear.hpp"

#include "bizeta/error.hpp"
#include "bizeta/numeric.hpp"
#include "bizeta/parallel.hpp"

namespace bizeta {

namespace {

using Histogram = std::map<ElementaryDivisorType, std::uint64_t>;

const LinearFormMatrix &pick(const CommutatorMatrices &M, Which which) { return which == Which::A ? M.A : M.B; }

std::uint64_t point_count(const GaloisRing &R, std::size_t vars, std::uint64_t bound) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < vars; ++i)
    if (__builtin_mul_overflow(n, R.size(), &n) || n > bound)
      throw size_bound_error("point sweep |R|^" + std::to_string(vars) + " exceeds the bound " +
                             std::to_string(bound));
  return n;
}

std::vector<GaloisRing::Elem> point_of(const GaloisRing &R, std::size_t vars, std::uint64_t code) {
  std::vector<GaloisRing::Elem> pt(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    pt[i] = static_cast<GaloisRing::Elem>(code % R.size());
    code /= R.size();
  }
  return pt;
}

DivisorTypeDistribution empty_dist(Which which, const GaloisRing &R) {
  DivisorTypeDistribution d;
  d.which = which;
  d.p = R.p();
  d.N = R.N();
  d.f = R.f();
  return d;
}

void merge_into(Histogram &into, const Histogram &from) {
  for (const auto &[t, c] : from) into[t] += c;
}

}  // namespace

std::uint64_t DivisorTypeDistribution::total() const {
  std::uint64_t t = 0;
  for (const auto &[k, c] : counts) t += c;
  return t;
}

RingMatrix evaluate_forms(const GaloisRing &R, const LinearFormMatrix &m, const std::vector<GaloisRing::Elem> &pt) {
  RingMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      const Vec &f = m.form(i, j);
      GaloisRing::Elem s = 0;
      for (std::size_t k = 0; k < m.vars; ++k)
        if (f[k]) s = R.add(s, R.mul(R.from_int(f[k]), pt[k]));
      out(i, j) = s;
    }
  return out;
}

DivisorTypeDistribution divisor_distribution_serial(const CommutatorMatrices &M, Which which, const GaloisRing &R,
                                                    std::uint64_t bound) {
  const LinearFormMatrix &m = pick(M, which);
  const std::uint64_t n = point_count(R, m.vars, bound);
  DivisorTypeDistribution d = empty_dist(which, R);
  for (std::uint64_t x = 0; x < n; ++x)
    ++d.counts[elementary_divisor_type(R, evaluate_forms(R, m, point_of(R, m.vars, x)))];
  return d;
}

DivisorTypeDistribution divisor_distribution(const CommutatorMatrices &M, Which which, const GaloisRing &R,
                                             std::uint64_t bound) {
  const LinearFormMatrix &m = pick(M, which);
  const std::uint64_t n = point_count(R, m.vars, bound);
  DivisorTypeDistribution d = empty_dist(which, R);
  d.counts = chunked_reduce(
      n, 512, Histogram{},
      [&](std::uint64_t lo, std::uint64_t hi, Histogram &acc) {
        for (std::uint64_t x = lo; x < hi; ++x)
          ++acc[elementary_divisor_type(R, evaluate_forms(R, m, point_of(R, m.vars, x)))];
      },
      merge_into);
  return d;
}

DivisorTypeDistribution divisor_distribution_stratified(const CommutatorMatrices &M, Which which,
                                                        const GaloisRing &R, std::uint64_t bound) {
  const LinearFormMatrix &m = pick(M, which);
  point_count(R, m.vars, bound);
  DivisorTypeDistribution d = empty_dist(which, R);
  const int N = R.N();
  // Level 0: the origin.
  {
    ElementaryDivisorType t;
    t.deficiency = static_cast<int>(std::min(m.rows, m.cols));
    d.counts[t] += 1;
  }
  for (int j = 1; j <= N; ++j) {
    GaloisRing Rj = GaloisRing::make(R.p(), j, R.f());
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < m.vars; ++i) n *= Rj.size();
    Histogram h = chunked_reduce(
        n, 512, Histogram{},
        [&](std::uint64_t lo, std::uint64_t hi, Histogram &acc) {
          for (std::uint64_t x = lo; x < hi; ++x) {
            auto u = point_of(Rj, m.vars, x);
            bool primitive = false;
            for (auto e : u) primitive = primitive || Rj.is_unit(e);
            if (!primitive) continue;
            auto t = elementary_divisor_type(Rj, evaluate_forms(Rj, m, u));
            for (auto &v : t.valuations) v += N - j;
            ++acc[t];
          }
        },
        merge_into);
    merge_into(d.counts, h);
  }
  return d;
}

DivisorTypeDistribution divisor_distribution_transformed(const CommutatorMatrices &M, Which which,
                                                         const GaloisRing &R, const RingMatrix &T) {
  const LinearFormMatrix &m = pick(M, which);
  if (T.rows != m.vars || T.cols != m.vars) throw std::invalid_argument("transform has the wrong size");
  const std::uint64_t n = point_count(R, m.vars, ~std::uint64_t{0});
  DivisorTypeDistribution d = empty_dist(which, R);
  RingMatrix col(m.vars, 1);
  for (std::uint64_t x = 0; x < n; ++x) {
    auto pt = point_of(R, m.vars, x);
    for (std::size_t i = 0; i < m.vars; ++i) col(i, 0) = pt[i];
    RingMatrix img = multiply(R, T, col);
    for (std::size_t i = 0; i < m.vars; ++i) pt[i] = img(i, 0);
    ++d.counts[elementary_divisor_type(R, evaluate_forms(R, m, pt))];
  }
  return d;
}

ClassData cc_zeta_from_A(const DivisorTypeDistribution &dist, const LatticeProfile &profile) {
  if (profile.class_c > 2) throw validation_error("ClassTooHigh", "linear route requires class <= 2");
  if (dist.which != Which::A) throw std::invalid_argument("cc_zeta_from_A needs an A distribution");
  const BigInt q = checked_pow(dist.p, static_cast<unsigned>(dist.f));
  const BigInt lifts = boost::multiprecision::pow(q, static_cast<unsigned>(dist.N * (profile.h - profile.a)));
  ClassData out;
  for (const auto &[t, count] : dist.counts) {
    BigInt n = boost::multiprecision::pow(q, static_cast<unsigned>(image_exponent(t, dist.N)));
    BigInt elems = lifts * count;
    if (elems % n != 0) throw mismatch_error("NonIntegralCount", "class count is not integral");
    out.counts[static_cast<std::uint64_t>(n)] += static_cast<std::uint64_t>(elems / n);
  }
  for (const auto &[n, c] : out.counts) out.k += c;
  return out;
}

DegreeData irr_zeta_from_B(const DivisorTypeDistribution &dist, const LatticeProfile &profile) {
  if (profile.class_c > 2) throw validation_error("ClassTooHigh", "linear route requires class <= 2");
  if (dist.which != Which::B) throw std::invalid_argument("irr_zeta_from_B needs a B distribution");
  if (dist.p == 2) throw validation_error("InadmissiblePrime", "orbit counting requires p odd");
  const BigInt q = checked_pow(dist.p, static_cast<unsigned>(dist.f));
  const BigInt lifts = boost::multiprecision::pow(q, static_cast<unsigned>(dist.N * (profile.h - profile.b)));
  DegreeData out;
  for (const auto &[t, count] : dist.counts) {
    int e = image_exponent(t, dist.N);
    if (e % 2 != 0) throw mismatch_error("OddRank", "B(y) has odd image exponent " + std::to_string(e));
    BigInt orbit = boost::multiprecision::pow(q, static_cast<unsigned>(e));
    BigInt deg = boost::multiprecision::pow(q, static_cast<unsigned>(e / 2));
    BigInt chars = lifts * count;
    if (chars % orbit != 0) throw mismatch_error("NonIntegralCount", "character count is not integral");
    out.counts[static_cast<std::uint64_t>(deg)] += static_cast<std::uint64_t>(chars / orbit);
  }
  return out;
}

nlohmann::ordered_json distribution_to_json(const DivisorTypeDistribution &d) {
  nlohmann::ordered_json doc;
  doc["which"] = d.which == Which::A ? "A" : "B";
  doc["ring"] = nlohmann::ordered_json{{"p", d.p}, {"N", d.N}, {"f", d.f}};
  nlohmann::ordered_json types = nlohmann::ordered_json::array();
  for (const auto &[t, c] : d.counts)
    types.push_back(nlohmann::ordered_json{{"valuations", t.valuations}, {"deficiency", t.deficiency}, {"count", c}});
  doc["types"] = types;
  doc["total"] = d.total();
  return doc;
}

}  // namespace bizeta

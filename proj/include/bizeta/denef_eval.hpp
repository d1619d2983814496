#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bizeta/domain_geometry.hpp"
#include "bizeta/numeric.hpp"
#include "json.hpp"

namespace bizeta {

// Numerical data of a principalization, supplied by the user.
struct DenefData {
  int d = 1;                                     // matrix size
  int l = 1;                                     // number of s-variables
  int t = 0;                                     // |T|
  std::vector<int> nu;                           // nu_u, u in T
  std::vector<std::vector<int>> e;               // e_{kappa iota}; e[k].size() = |J_k|
  std::vector<std::vector<std::vector<int>>> N;  // N_{u kappa iota}
  int shift_N = 1;
  std::vector<std::vector<std::int64_t>> d_shift;  // d_{kappa iota}; empty means all zero
  std::map<std::vector<int>, Rational> c_U;        // optional point counts keyed by 0-based U

  // s_kappa = a1[k] s1 + a2[k] s2 + b[k]
  struct Specialization {
    std::vector<Rational> a1, a2, b;
  };
  std::optional<Specialization> specialization;

  std::int64_t shift(int k, int i) const { return d_shift.empty() ? 0 : d_shift[k][i]; }
  void validate(bool allow_negative_shift = false) const;
  std::vector<Rational> specialize(const Rational &s1, const Rational &s2) const;
};

struct XiValue {
  Rational partial;  // exact truncated sum at the given depth
  Rational tail;     // exact upper bound for the omitted part
  int depth = 0;
};

// Truncated Xi^N_{U,(d)}(q, s): m_u in [N, depth], m_{t+1} in [1, depth].
XiValue xi_truncated(const DenefData &data, const std::vector<int> &U, const BigInt &q, const std::vector<Rational> &s,
                     int depth);
// Serial reference of the same sum, summand by summand.
Rational xi_truncated_reference(const DenefData &data, const std::vector<int> &U, const BigInt &q,
                                const std::vector<Rational> &s, int depth);

// Sum over cones in W' of weight * prod_j x_j / (1 - x_j), x_j = q^{-(A1j s1 + A2j s2 + Bj)}.
Rational ray_closed_form(const RayData &rays, const BigInt &q, const Rational &s1, const Rational &s2);

struct ShiftedXi {
  DenefData level_one;     // N = 1 with shifted d_{kappa iota}
  std::int64_t q_exponent; // Xi^N = q^{q_exponent} Xi^1
};
// Reindexing m_u -> m_u + N - 1.
ShiftedXi shift_identity(const DenefData &data, const std::vector<int> &U);
// The variant with exponent sum (N-1) nu_u and d + sum N (N-1); kept to show it is not an identity.
ShiftedXi shift_identity_uncorrected(const DenefData &data, const std::vector<int> &U);

struct ShapeRow {
  Rational s1, s2;
  XiValue xi;
  Rational closed;
  bool ok = false;
  bool low_power = false;  // tail bound at least a tenth of the value
};

struct ShapeReport {
  std::vector<ShapeRow> rows;
  bool pass = false;
  bool low_power = false;
};

ShapeReport denef_shape_check(const DenefData &data, const std::vector<int> &U, const RayData &rays,
                              const BigInt &q, const std::vector<std::pair<Rational, Rational>> &grid, int depth);
// Throws MismatchBeyondTail when some grid point disagrees.
void require_consistent(const ShapeReport &r);

// Separable instance with U empty, one kappa and iota, e = 1 and s = s1 + s2 + b.
DenefData separable_instance(int b);
RayData separable_rays(int b, const BigInt &q);
DenefData random_denef_data(std::mt19937_64 &rng);

DenefData denef_from_json(const nlohmann::json &j);
nlohmann::ordered_json denef_to_json(const DenefData &d);
nlohmann::ordered_json xi_to_json(const XiValue &v);
nlohmann::ordered_json shape_to_json(const ShapeReport &r);
std::string render_text(const ShapeReport &r);

}  // namespace bizeta

#pragma once

#include <cstdint>
#include <map>

#include "bizeta/finite_quotient.hpp"
#include "bizeta/lie_lattice.hpp"
#include "bizeta/local_ring.hpp"
#include "json.hpp"

namespace bizeta {

enum class Which { A, B };

struct DivisorTypeDistribution {
  Which which = Which::A;
  std::uint64_t p = 0;
  int N = 0, f = 0;
  std::map<ElementaryDivisorType, std::uint64_t> counts;

  std::uint64_t total() const;
  bool operator==(const DivisorTypeDistribution &) const = default;
};

// Evaluates the A or B matrix at a ring point.
RingMatrix evaluate_forms(const GaloisRing &R, const LinearFormMatrix &m, const std::vector<GaloisRing::Elem> &pt);

// Exhaustive sweep over R^vars, chunked and run in parallel.
DivisorTypeDistribution divisor_distribution(const CommutatorMatrices &M, Which which, const GaloisRing &R,
                                             std::uint64_t bound = default_group_bound());
// Single-threaded reference sweep.
DivisorTypeDistribution divisor_distribution_serial(const CommutatorMatrices &M, Which which, const GaloisRing &R,
                                                    std::uint64_t bound = default_group_bound());
// Level-stratified sweep: y = p^(N-j) u with u primitive over GR(p^j, f).
DivisorTypeDistribution divisor_distribution_stratified(const CommutatorMatrices &M, Which which,
                                                        const GaloisRing &R,
                                                        std::uint64_t bound = default_group_bound());
// Sweep over the points T x for an invertible matrix T over R.
DivisorTypeDistribution divisor_distribution_transformed(const CommutatorMatrices &M, Which which,
                                                         const GaloisRing &R, const RingMatrix &T);

// Class sizes q^(sum (N - m_k)) of A(x), weighted by the q^(N(h-a)) central lifts.
ClassData cc_zeta_from_A(const DivisorTypeDistribution &dist, const LatticeProfile &profile);
// Orbit counting: degree D with D^2 = |im B(y)|, weighted by q^(N(h-b)) / D^2.
DegreeData irr_zeta_from_B(const DivisorTypeDistribution &dist, const LatticeProfile &profile);

nlohmann::ordered_json distribution_to_json(const DivisorTypeDistribution &d);

}  // namespace bizeta

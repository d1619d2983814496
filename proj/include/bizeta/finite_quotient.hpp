#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bizeta/lie_lattice.hpp"
#include "bizeta/local_ring.hpp"
#include "json.hpp"

namespace bizeta {

// Enumeration bounds. The group bound can be overridden by the environment
// variable BIZETA_MAX_GROUP_ORDER.
std::uint64_t default_group_bound();
constexpr std::uint64_t kCharacterBound = 2187;  // 3^7

// The group (Lambda (x) R, *) with the truncated BCH product, on the adapted
// basis of a profile. Elements are packed as sum_i x_i * |R|^i.
class FiniteQuotientGroup {
 public:
  using Code = std::uint64_t;
  using Elem = GaloisRing::Elem;

  FiniteQuotientGroup(const LatticeProfile &profile, const GaloisRing &ring, std::uint64_t bound);

  const GaloisRing &ring() const { return R_; }
  const LatticeProfile &profile() const { return *profile_; }
  int rank() const { return h_; }
  std::uint64_t order() const { return order_; }
  int nilpotency_class() const { return profile_->class_c; }

  std::vector<Elem> decode(Code x) const;
  Code encode(const std::vector<Elem> &v) const;

  std::vector<Elem> bracket(const std::vector<Elem> &x, const std::vector<Elem> &y) const;
  std::vector<Elem> mul(const std::vector<Elem> &x, const std::vector<Elem> &y) const;
  std::vector<Elem> inverse(const std::vector<Elem> &x) const;
  Code mul(Code x, Code y) const { return encode(mul(decode(x), decode(y))); }
  Code inverse(Code x) const { return encode(inverse(decode(x))); }
  // y^{-1} x y
  Code conjugate(Code x, Code y) const;

  // Generators t^k e_i (k < f, i < h) of the group.
  const std::vector<Code> &generators() const { return gens_; }
  // Additive order of x as a vector; equals its order in the group.
  std::uint64_t element_order(Code x) const;
  std::uint64_t exponent() const;

 private:
  struct Term {
    int i, j, l;
    Elem c;
  };
  std::shared_ptr<const LatticeProfile> profile_;
  GaloisRing R_;
  int h_;
  std::uint64_t order_;
  std::vector<Term> terms_;
  Elem half_ = 0, twelfth_ = 0;
  std::vector<Code> gens_;
};

FiniteQuotientGroup build_group(const LatticeProfile &profile, const GaloisRing &ring,
                                std::uint64_t bound = default_group_bound());

// Canonical conjugacy partition: classes sorted by minimal element code.
struct ConjugacyPartition {
  std::vector<std::uint32_t> class_of;  // per element code
  std::vector<std::uint64_t> reps;      // minimal code of each class
  std::vector<std::uint64_t> sizes;
  bool operator==(const ConjugacyPartition &) const = default;
};

struct ClassData {
  std::map<std::uint64_t, std::uint64_t> counts;  // class size n -> c_n
  std::uint64_t k = 0;
  bool operator==(const ClassData &) const = default;
};

struct DegreeData {
  std::map<std::uint64_t, std::uint64_t> counts;  // degree n -> r_n
  std::uint64_t total() const;
  bool operator==(const DegreeData &) const = default;
};

// Serial orbit BFS: the reference implementation.
ConjugacyPartition conjugacy_partition_serial(const FiniteQuotientGroup &G);
// Parallel edge computation followed by a union-find merge.
ConjugacyPartition conjugacy_partition_parallel(const FiniteQuotientGroup &G);
// Class two: the class of g is the coset g + [g, G].
ConjugacyPartition conjugacy_partition_class_two(const FiniteQuotientGroup &G);
// Dispatch: class-two shortcut where it applies, parallel orbits otherwise.
ConjugacyPartition conjugacy_partition(const FiniteQuotientGroup &G);

ClassData class_data(const ConjugacyPartition &part);
ClassData conjugacy_classes(const FiniteQuotientGroup &G, std::uint64_t bound = default_group_bound());

struct DixonResult {
  DegreeData degrees;
  std::uint64_t field_prime = 0;
  bool abelian = false;
};

// Smallest prime l = 1 mod e with l > 2 sqrt(order).
std::uint64_t dixon_prime(std::uint64_t exponent, std::uint64_t order, std::uint64_t search_limit = 100000000);
DixonResult character_degrees(const FiniteQuotientGroup &G, std::uint64_t bound = kCharacterBound);

struct PrimeStatus {
  std::uint64_t p;
  bool admissible;
  std::string reason;  // "", "Q2-class", "p<=c", "Q2-index"
};
std::vector<PrimeStatus> admissible_primes(const LatticeProfile &profile, std::uint64_t up_to);
// Throws InadmissiblePrime (validation) with the reason.
void require_admissible(const LatticeProfile &profile, std::uint64_t p);

nlohmann::ordered_json class_data_to_json(const ClassData &d);
nlohmann::ordered_json degree_data_to_json(const DegreeData &d);

}  // namespace bizeta

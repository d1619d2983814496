#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bizeta/int_matrix.hpp"
#include "json.hpp"

namespace bizeta {

using Vec = std::vector<std::int64_t>;

// A Z-lattice with an antisymmetric bracket given by structure constants.
// Indices are 0-based in the API and 1-based in JSON.
class LieLattice {
 public:
  LieLattice() = default;
  LieLattice(std::string name, int rank, int declared_class);

  const std::string &name() const { return name_; }
  int rank() const { return rank_; }
  int declared_class() const { return class_; }

  // Sets [e_i, e_j] = v (and [e_j, e_i] = -v). Requires i != j.
  void set_bracket(int i, int j, Vec v);
  // [e_i, e_j] for any pair.
  Vec bracket(int i, int j) const;
  // Bilinear extension to arbitrary integer vectors.
  Vec bracket(const Vec &x, const Vec &y) const;

  bool operator==(const LieLattice &) const = default;

 private:
  std::size_t slot(int i, int j) const;

  std::string name_;
  int rank_ = 0;
  int class_ = 1;
  std::vector<Vec> upper_;  // [e_i, e_j] for i < j, row-major over pairs
};

LieLattice lattice_from_json(const nlohmann::json &doc);
nlohmann::ordered_json lattice_to_json(const LieLattice &lattice);
LieLattice load_lattice(const std::string &path);
std::string canonical_lattice_text(const LieLattice &lattice);

struct ValidationReport {
  bool ok = true;
  std::string code;                  // "", "JacobiViolation" or "ClassMismatch"
  std::array<int, 3> triple{0, 0, 0};  // 1-based witness for JacobiViolation
  int computed_class = 0;            // 0 when not nilpotent
  std::string message;
};

ValidationReport validate_lattice(const LieLattice &lattice);
// Throws Error(Validation) carrying the report's code on failure.
void require_valid(const LieLattice &lattice);

// Nilpotency class from the lower central series over Q; 0 if not nilpotent.
int nilpotency_class(const LieLattice &lattice);

struct LatticeProfile {
  int h = 0, a = 0, b = 0, r = 0, z = 0;
  int class_c = 1;
  LieLattice working;        // the lattice in the adapted basis
  IntMatrix basis;           // columns: adapted basis in ambient coordinates
  std::vector<int> e_basis;  // a indices into the adapted basis (complement of the centre)
  std::vector<int> f_basis;  // b indices spanning the saturated derived lattice
  // lambda[(i*a + j)*b + k]: coefficient of f_k in [e_i, e_j].
  std::vector<std::int64_t> lambda;
  std::int64_t derived_index = 1;     // |saturation of derived lattice : derived lattice|
  std::int64_t lattice_index = 1;     // |Lambda : M|, always 1 here
  std::vector<std::uint64_t> bad_primes;  // prime divisors of the two indices

  std::int64_t structure_constant(int i, int j, int k) const {
    return lambda[(static_cast<std::size_t>(i) * a + j) * b + k];
  }
};

LatticeProfile profile(const LieLattice &lattice);
nlohmann::ordered_json profile_to_json(const LatticeProfile &p);

// Matrix of homogeneous integer linear forms; entry (i,j) is a coefficient vector.
struct LinearFormMatrix {
  std::size_t rows = 0, cols = 0, vars = 0;
  std::vector<Vec> entries;

  const Vec &form(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  IntMatrix evaluate(const Vec &point) const;
};

struct GenericRank {
  std::size_t sweep_rank = 0;  // max rank over the deterministic sweep
  std::size_t grid_rank = 0;   // max rank over the exhaustive certificate grid
  bool certified = false;      // grid was small enough to run
  std::size_t rank() const { return certified ? grid_rank : sweep_rank; }
};

struct CommutatorMatrices {
  LinearFormMatrix A;  // a x b, forms in X_1..X_a
  LinearFormMatrix B;  // a x a, forms in Y_1..Y_b
  GenericRank rank_A, rank_B;
  std::size_t u_A = 0, u_B = 0;
};

CommutatorMatrices commutator_matrices(const LatticeProfile &p);
GenericRank generic_rank(const LinearFormMatrix &m, std::size_t sweep_points);
// Integer points of the deterministic low-discrepancy sweep, entries in [-8, 8].
std::vector<Vec> sweep_points(std::size_t dim, std::size_t count);
nlohmann::ordered_json commutator_to_json(const CommutatorMatrices &m);

}  // namespace bizeta

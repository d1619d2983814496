#include "bizeta/lie_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bizeta/error.hpp"
#include "bizeta/numeric.hpp"

namespace bizeta {

using nlohmann::json;
using nlohmann::ordered_json;

LieLattice::LieLattice(std::string name, int rank, int declared_class)
    : name_(std::move(name)), rank_(rank), class_(declared_class) {
  if (rank < 1) throw validation_error("BadRank", "rank must be positive");
  if (declared_class < 1) throw validation_error("BadClass", "class must be positive");
  upper_.assign(static_cast<std::size_t>(rank) * rank, Vec(rank, 0));
}

std::size_t LieLattice::slot(int i, int j) const {
  return static_cast<std::size_t>(i) * rank_ + j;
}

void LieLattice::set_bracket(int i, int j, Vec v) {
  if (i < 0 || j < 0 || i >= rank_ || j >= rank_)
    throw validation_error("IndexOutOfRange", "bracket index out of range");
  if (i == j) throw validation_error("DiagonalBracket", "[e_i, e_i] must vanish and is not stored");
  if (static_cast<int>(v.size()) != rank_) throw validation_error("BadVector", "bracket vector has wrong length");
  if (i > j) {
    std::swap(i, j);
    for (auto &x : v) x = -x;
  }
  upper_[slot(i, j)] = std::move(v);
}

Vec LieLattice::bracket(int i, int j) const {
  if (i == j) return Vec(rank_, 0);
  if (i < j) return upper_[slot(i, j)];
  Vec v = upper_[slot(j, i)];
  for (auto &x : v) x = -x;
  return v;
}

Vec LieLattice::bracket(const Vec &x, const Vec &y) const {
  Vec out(rank_, 0);
  for (int i = 0; i < rank_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < rank_; ++j) {
      if (y[j] == 0 || i == j) continue;
      std::int64_t c = checked_mul(x[i], y[j]);
      const Vec &v = upper_[slot(std::min(i, j), std::max(i, j))];
      std::int64_t sign = i < j ? 1 : -1;
      for (int l = 0; l < rank_; ++l)
        if (v[l]) out[l] = checked_add(out[l], checked_mul(sign * c, v[l]));
    }
  }
  return out;
}

LieLattice lattice_from_json(const json &doc) {
  try {
    LieLattice lat(doc.at("name").get<std::string>(), doc.at("rank").get<int>(), doc.at("class").get<int>());
    std::map<std::pair<int, int>, bool> seen;
    for (const auto &br : doc.at("brackets")) {
      int i = br.at("i").get<int>() - 1, j = br.at("j").get<int>() - 1;
      if (i < 0 || j < 0 || i >= lat.rank() || j >= lat.rank())
        throw validation_error("IndexOutOfRange", "bracket (" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ") out of range");
      auto key = std::minmax(i, j);
      if (seen[{key.first, key.second}])
        throw validation_error("DuplicateBracket", "bracket (" + std::to_string(key.first + 1) + "," +
                                                       std::to_string(key.second + 1) + ") given twice");
      seen[{key.first, key.second}] = true;
      Vec v(lat.rank(), 0);
      for (const auto &t : br.at("terms")) {
        int l = t.at("l").get<int>() - 1;
        if (l < 0 || l >= lat.rank()) throw validation_error("IndexOutOfRange", "term index l out of range");
        v[l] = checked_add(v[l], t.at("coeff").get<std::int64_t>());
      }
      lat.set_bracket(i, j, std::move(v));
    }
    return lat;
  } catch (const json::exception &e) {
    throw validation_error("ParseError", std::string("lattice: ") + e.what());
  }
}

ordered_json lattice_to_json(const LieLattice &lat) {
  ordered_json doc;
  doc["name"] = lat.name();
  doc["rank"] = lat.rank();
  doc["class"] = lat.declared_class();
  ordered_json brackets = ordered_json::array();
  for (int i = 0; i < lat.rank(); ++i)
    for (int j = i + 1; j < lat.rank(); ++j) {
      Vec v = lat.bracket(i, j);
      ordered_json terms = ordered_json::array();
      for (int l = 0; l < lat.rank(); ++l)
        if (v[l] != 0) terms.push_back(ordered_json{{"l", l + 1}, {"coeff", v[l]}});
      if (terms.empty()) continue;
      brackets.push_back(ordered_json{{"i", i + 1}, {"j", j + 1}, {"terms", terms}});
    }
  doc["brackets"] = brackets;
  return doc;
}

LieLattice load_lattice(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw validation_error("FileNotFound", "cannot open lattice file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw validation_error("ParseError", path + ": " + e.what());
  }
  return lattice_from_json(doc);
}

std::string canonical_lattice_text(const LieLattice &lattice) { return lattice_to_json(lattice).dump(2) + "\n"; }

namespace {

IntMatrix rows_to_matrix(const std::vector<Vec> &rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

// Integer row basis (Hermite form, zero rows dropped) of the span of rows.
std::vector<Vec> row_basis(const std::vector<Vec> &rows, std::size_t cols) {
  if (rows.empty()) return {};
  HermiteForm hf = hermite_form(rows_to_matrix(rows, cols));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < hf.rank; ++i) out.push_back(hf.form.row(i));
  return out;
}

}  // namespace

int nilpotency_class(const LieLattice &lat) {
  const int h = lat.rank();
  std::vector<Vec> gamma;
  for (int i = 0; i < h; ++i) {
    Vec e(h, 0);
    e[i] = 1;
    gamma.push_back(e);
  }
  std::size_t prev_rank = gamma.size();
  for (int c = 1; c <= h + 1; ++c) {
    std::vector<Vec> next;
    for (const auto &v : gamma)
      for (int j = 0; j < h; ++j) {
        Vec e(h, 0);
        e[j] = 1;
        Vec w = lat.bracket(v, e);
        if (std::any_of(w.begin(), w.end(), [](std::int64_t x) { return x != 0; })) next.push_back(w);
      }
    gamma = row_basis(next, h);
    if (gamma.empty()) return c;
    std::size_t rk = rank_over_q(rows_to_matrix(gamma, h));
    if (rk == prev_rank) return 0;  // series stabilised at a nonzero term
    prev_rank = rk;
  }
  return 0;
}

ValidationReport validate_lattice(const LieLattice &lat) {
  ValidationReport rep;
  const int h = lat.rank();
  auto unit = [h](int i) {
    Vec e(h, 0);
    e[i] = 1;
    return e;
  };
  for (int i = 0; i < h; ++i)
    for (int j = i + 1; j < h; ++j)
      for (int k = j + 1; k < h; ++k) {
        Vec t1 = lat.bracket(lat.bracket(i, j), unit(k));
        Vec t2 = lat.bracket(lat.bracket(j, k), unit(i));
        Vec t3 = lat.bracket(lat.bracket(k, i), unit(j));
        for (int l = 0; l < h; ++l) {
          if (t1[l] + t2[l] + t3[l] == 0) continue;
          rep.ok = false;
          rep.code = "JacobiViolation";
          rep.triple = {i + 1, j + 1, k + 1};
          rep.message = "Jacobi identity fails on (e" + std::to_string(i + 1) + ", e" + std::to_string(j + 1) +
                        ", e" + std::to_string(k + 1) + ")";
          return rep;
        }
      }
  rep.computed_class = nilpotency_class(lat);
  if (rep.computed_class != lat.declared_class()) {
    rep.ok = false;
    rep.code = "ClassMismatch";
    rep.message = rep.computed_class == 0
                      ? "lattice is not nilpotent"
                      : "declared class " + std::to_string(lat.declared_class()) + " but computed class " +
                            std::to_string(rep.computed_class);
  }
  return rep;
}

void require_valid(const LieLattice &lattice) {
  ValidationReport rep = validate_lattice(lattice);
  if (!rep.ok) throw validation_error(rep.code, rep.message);
}

namespace {

bool is_coordinate_basis(const IntMatrix &cols, std::vector<int> &support) {
  support.clear();
  for (std::size_t c = 0; c < cols.cols(); ++c) {
    int hit = -1;
    for (std::size_t r = 0; r < cols.rows(); ++r) {
      if (cols(r, c) == 0) continue;
      if (cols(r, c) != 1 || hit >= 0) return false;
      hit = static_cast<int>(r);
    }
    if (hit < 0) return false;
    support.push_back(hit);
  }
  std::sort(support.begin(), support.end());
  return true;
}

IntMatrix hstack(const std::vector<const IntMatrix *> &parts, std::size_t rows) {
  std::size_t cols = 0;
  for (auto *p : parts) cols += p->cols();
  IntMatrix out(rows, cols);
  std::size_t off = 0;
  for (auto *p : parts) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < p->cols(); ++j) out(i, off + j) = (*p)(i, j);
    off += p->cols();
  }
  return out;
}

// Columns of `outer` (saturated basis) completing the saturated sublattice
// `inner` (contained in span(outer)) to a basis of span(outer).
IntMatrix complement_within(const IntMatrix &outer, const IntMatrix &inner) {
  const std::size_t n = outer.rows(), k = outer.cols();
  if (k == 0) return IntMatrix(n, 0);
  IntMatrix full = extend_to_basis(outer);
  IntMatrix inv = unimodular_inverse(full);
  IntMatrix coords = inv * inner;  // first k rows hold coordinates in `outer`
  IntMatrix c(k, inner.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < inner.cols(); ++j) c(i, j) = coords(i, j);
  for (std::size_t i = k; i < n; ++i)
    for (std::size_t j = 0; j < inner.cols(); ++j)
      if (coords(i, j) != 0) throw std::logic_error("complement_within: inner not inside outer");
  IntMatrix ext = extend_to_basis(c);
  std::vector<std::size_t> rest;
  for (std::size_t j = inner.cols(); j < k; ++j) rest.push_back(j);
  return outer * ext.select_cols(rest);
}

}  // namespace

LatticeProfile profile(const LieLattice &lat) {
  const int h = lat.rank();
  LatticeProfile p;
  p.h = h;
  p.class_c = lat.declared_class();

  // Derived lattice and its saturation.
  std::vector<Vec> brackets;
  for (int i = 0; i < h; ++i)
    for (int j = i + 1; j < h; ++j) {
      Vec v = lat.bracket(i, j);
      if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) brackets.push_back(v);
    }
  IntMatrix derived_rows = rows_to_matrix(row_basis(brackets, h), h);
  IntMatrix sat;  // columns
  if (derived_rows.rows() == 0) {
    sat = IntMatrix(h, 0);
  } else {
    IntMatrix ortho = integer_kernel(derived_rows);  // h x (h-b)
    sat = ortho.cols() == 0 ? IntMatrix::identity(h) : integer_kernel(ortho.transpose());
  }
  p.derived_index = 1;
  for (auto d : invariant_factors(derived_rows)) p.derived_index = checked_mul(p.derived_index, d);

  // Centre: kernel of x -> ([x, e_1], ..., [x, e_h]).
  IntMatrix ad(static_cast<std::size_t>(h) * h, h);
  for (int x = 0; x < h; ++x)
    for (int j = 0; j < h; ++j) {
      Vec v = lat.bracket(x, j);
      for (int l = 0; l < h; ++l) ad(static_cast<std::size_t>(j) * h + l, x) = v[l];
    }
  IntMatrix centre = integer_kernel(ad);

  p.b = static_cast<int>(sat.cols());
  p.z = static_cast<int>(centre.cols());
  p.a = h - p.z;
  p.r = h - p.b;

  std::vector<int> sat_support, centre_support;
  if (is_coordinate_basis(sat, sat_support) && is_coordinate_basis(centre, centre_support)) {
    p.basis = IntMatrix::identity(h);
    p.working = lat;
    for (int i = 0; i < h; ++i)
      if (!std::binary_search(centre_support.begin(), centre_support.end(), i)) p.e_basis.push_back(i);
    p.f_basis = sat_support;
  } else {
    // I = sat ∩ centre, then complete I inside each, then to all of Z^h.
    IntMatrix ortho_sat = sat.cols() == 0 ? IntMatrix::identity(h) : integer_kernel(sat.transpose());
    IntMatrix ortho_ctr = centre.cols() == 0 ? IntMatrix::identity(h) : integer_kernel(centre.transpose());
    IntMatrix stacked(ortho_sat.cols() + ortho_ctr.cols(), h);
    for (std::size_t c = 0; c < ortho_sat.cols(); ++c)
      for (int i = 0; i < h; ++i) stacked(c, i) = ortho_sat(i, c);
    for (std::size_t c = 0; c < ortho_ctr.cols(); ++c)
      for (int i = 0; i < h; ++i) stacked(ortho_sat.cols() + c, i) = ortho_ctr(i, c);
    IntMatrix inter = stacked.rows() == 0 ? IntMatrix::identity(h) : integer_kernel(stacked);
    IntMatrix sat_c = complement_within(sat, inter);
    IntMatrix ctr_c = complement_within(centre, inter);
    IntMatrix partial = hstack({&sat_c, &inter, &ctr_c}, h);
    if (!is_saturated_basis(partial))
      throw validation_error("NonSaturatedBasis",
                             "derived lattice and centre do not extend to a common basis of the lattice");
    IntMatrix full = extend_to_basis(partial);
    std::vector<std::size_t> order;
    const std::size_t ns = sat_c.cols(), ni = inter.cols(), nc = ctr_c.cols();
    const std::size_t used = ns + ni + nc;
    // Column order: [sat_c, extension, inter, ctr_c].
    for (std::size_t j = 0; j < ns; ++j) order.push_back(j);
    for (std::size_t j = used; j < static_cast<std::size_t>(h); ++j) order.push_back(j);
    for (std::size_t j = ns; j < used; ++j) order.push_back(j);
    p.basis = full.select_cols(order);
    IntMatrix inv = unimodular_inverse(p.basis);
    LieLattice w(lat.name(), h, lat.declared_class());
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j) w.set_bracket(i, j, inv * lat.bracket(p.basis.col(i), p.basis.col(j)));
    p.working = std::move(w);
    const int n_ext = h - static_cast<int>(used);
    for (int i = 0; i < static_cast<int>(ns) + n_ext; ++i) p.e_basis.push_back(i);
    for (int i = 0; i < static_cast<int>(ns); ++i) p.f_basis.push_back(i);
    for (int i = 0; i < static_cast<int>(ni); ++i) p.f_basis.push_back(static_cast<int>(ns) + n_ext + i);
  }

  p.lambda.assign(static_cast<std::size_t>(p.a) * p.a * p.b, 0);
  for (int i = 0; i < p.a; ++i)
    for (int j = 0; j < p.a; ++j) {
      Vec v = p.working.bracket(p.e_basis[i], p.e_basis[j]);
      for (int k = 0; k < p.b; ++k) p.lambda[(static_cast<std::size_t>(i) * p.a + j) * p.b + k] = v[p.f_basis[k]];
    }

  for (auto q : prime_factors(static_cast<std::uint64_t>(p.derived_index))) p.bad_primes.push_back(q);
  for (auto q : prime_factors(static_cast<std::uint64_t>(p.lattice_index)))
    if (std::find(p.bad_primes.begin(), p.bad_primes.end(), q) == p.bad_primes.end()) p.bad_primes.push_back(q);
  std::sort(p.bad_primes.begin(), p.bad_primes.end());
  return p;
}

ordered_json profile_to_json(const LatticeProfile &p) {
  ordered_json doc;
  doc["h"] = p.h;
  doc["a"] = p.a;
  doc["b"] = p.b;
  doc["r"] = p.r;
  doc["z"] = p.z;
  doc["class"] = p.class_c;
  ordered_json e = ordered_json::array(), f = ordered_json::array();
  for (int i : p.e_basis) e.push_back(i + 1);
  for (int i : p.f_basis) f.push_back(i + 1);
  doc["e_basis"] = e;
  doc["f_basis"] = f;
  ordered_json basis = ordered_json::array();
  for (std::size_t c = 0; c < p.basis.cols(); ++c) basis.push_back(p.basis.col(c));
  doc["basis"] = basis;
  ordered_json lam = ordered_json::array();
  for (int i = 0; i < p.a; ++i)
    for (int j = i + 1; j < p.a; ++j)
      for (int k = 0; k < p.b; ++k) {
        std::int64_t v = p.structure_constant(i, j, k);
        if (v != 0) lam.push_back(ordered_json{{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"coeff", v}});
      }
  doc["structure_constants"] = lam;
  doc["derived_index"] = p.derived_index;
  doc["lattice_index"] = p.lattice_index;
  doc["bad_primes"] = p.bad_primes;
  return doc;
}

IntMatrix LinearFormMatrix::evaluate(const Vec &point) const {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const Vec &f = form(i, j);
      std::int64_t s = 0;
      for (std::size_t k = 0; k < vars; ++k)
        if (f[k]) s = checked_add(s, checked_mul(f[k], point[k]));
      m(i, j) = s;
    }
  return m;
}

std::vector<Vec> sweep_points(std::size_t dim, std::size_t count) {
  static const std::vector<std::uint64_t> bases = primes_up_to(400);
  if (dim > bases.size()) throw std::invalid_argument("sweep_points: dimension too large");
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    Vec v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      // Radical inverse of n in base bases[k], as an exact fraction num/den.
      std::uint64_t b = bases[k], num = 0, den = 1, m = n;
      while (m) {
        num = num * b + m % b;
        den *= b;
        m /= b;
      }
      v[k] = static_cast<std::int64_t>(num * 17 / den) - 8;
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

GenericRank generic_rank(const LinearFormMatrix &m, std::size_t n_sweep) {
  GenericRank g;
  if (m.rows == 0 || m.cols == 0 || m.vars == 0) {
    g.certified = true;
    return g;
  }
  for (const auto &pt : sweep_points(m.vars, n_sweep))
    g.sweep_rank = std::max(g.sweep_rank, rank_over_q(m.evaluate(pt)));
  // A nonzero minor has degree at most r = min(rows, cols), so it cannot
  // vanish on all of {0..r}^vars: the grid maximum is the generic rank.
  const std::size_t r = std::min(m.rows, m.cols);
  double npts = std::pow(static_cast<double>(r + 1), static_cast<double>(m.vars));
  if (npts <= 2e6) {
    g.certified = true;
    Vec pt(m.vars, 0);
    while (true) {
      g.grid_rank = std::max(g.grid_rank, rank_over_q(m.evaluate(pt)));
      if (g.grid_rank == r) break;
      std::size_t k = 0;
      while (k < m.vars && pt[k] == static_cast<std::int64_t>(r)) pt[k++] = 0;
      if (k == m.vars) break;
      ++pt[k];
    }
  }
  return g;
}

CommutatorMatrices commutator_matrices(const LatticeProfile &p) {
  CommutatorMatrices cm;
  const std::size_t a = p.a, b = p.b;
  cm.A.rows = a;
  cm.A.cols = b;
  cm.A.vars = a;
  cm.A.entries.assign(a * b, Vec(a, 0));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < a; ++k)
        cm.A.entries[i * b + j][k] = p.structure_constant(static_cast<int>(i), static_cast<int>(k), static_cast<int>(j));
  cm.B.rows = a;
  cm.B.cols = a;
  cm.B.vars = b;
  cm.B.entries.assign(a * a, Vec(b, 0));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t k = 0; k < b; ++k)
        cm.B.entries[i * a + j][k] = p.structure_constant(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
  const std::size_t n_sweep = (std::size_t{1} << std::min(a, b)) * 5;
  cm.rank_A = generic_rank(cm.A, n_sweep);
  cm.rank_B = generic_rank(cm.B, n_sweep);
  cm.u_A = cm.rank_A.rank();
  cm.u_B = cm.rank_B.rank() / 2;
  return cm;
}

namespace {

ordered_json forms_to_json(const LinearFormMatrix &m, const char *var) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::string s;
      const Vec &f = m.form(i, j);
      for (std::size_t k = 0; k < m.vars; ++k) {
        if (f[k] == 0) continue;
        std::string mono = std::string(var) + std::to_string(k + 1);
        if (!s.empty()) s += f[k] > 0 ? " + " : " - ";
        else if (f[k] < 0) s += "-";
        std::int64_t c = f[k] < 0 ? -f[k] : f[k];
        s += (c == 1 ? "" : std::to_string(c) + "*") + mono;
      }
      row.push_back(s.empty() ? "0" : s);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ordered_json commutator_to_json(const CommutatorMatrices &m) {
  ordered_json doc;
  doc["A"] = forms_to_json(m.A, "X");
  doc["B"] = forms_to_json(m.B, "Y");
  doc["u_A"] = m.u_A;
  doc["u_B"] = m.u_B;
  doc["rank_certified"] = m.rank_A.certified && m.rank_B.certified;
  return doc;
}

}  // namespace bizeta

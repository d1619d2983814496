// bizeta: command-line front end. Every artifact is JSON with a schema_version;
// exit codes are 0 ok, 2 validation, 3 size bound, 4 oracle mismatch.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "bizeta/denef_eval.hpp"
#include "bizeta/domain_geometry.hpp"
#include "bizeta/error.hpp"
#include "bizeta/finite_quotient.hpp"
#include "bizeta/lie_lattice.hpp"
#include "bizeta/local_ring.hpp"
#include "bizeta/orbit_linear.hpp"
#include "bizeta/parallel.hpp"
#include "bizeta/zeta_series.hpp"
#include "json.hpp"

using namespace bizeta;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  int threads = 0;
  std::string out;
  std::string format = "json";

  std::string lattice, poly, domain, rays, data;
  std::uint64_t p = 0;
  int N = 1, f = 1, N_max = 1;
  std::string kind = "cc", method = "brute";
  std::uint64_t max_order = 0, prime_bound = 0;
  std::vector<std::uint64_t> primes;
  std::optional<int> degree;
  int degree_opt = -1;
  std::optional<std::int64_t> c;
  std::string delta = "1", margin = "1/1000";
  std::vector<int> inertia{1};
  std::vector<std::string> point, s, grid1, grid2;
  std::vector<int> U;
  std::uint64_t q = 0;
  int depth = 20;
};

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 2;
    case ErrorCategory::SizeBound: return 3;
    case ErrorCategory::Mismatch: return 4;
  }
  return 2;
}

nlohmann::json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw validation_error("FileNotFound", "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw validation_error("ParseError", path + ": " + e.what());
  }
}

ojson artifact(const std::string &command) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

void emit(const Options &o, const ojson &doc, const std::string &text) {
  std::string body = doc.dump(2) + "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw validation_error("FileNotWritable", "cannot write '" + o.out + "'");
    f << body;
    std::cout << text;
  } else if (o.format == "text") {
    std::cout << text;
  } else {
    std::cout << body;
  }
}

std::uint64_t group_bound(const Options &o) { return o.max_order ? o.max_order : default_group_bound(); }

std::vector<Rational> rationals(const std::vector<std::string> &v) {
  std::vector<Rational> out;
  for (const auto &s : v) out.push_back(parse_rational(s));
  return out;
}

std::pair<Rational, Rational> point2(const Options &o) {
  if (o.point.size() != 2) throw validation_error("BadParameter", "--point takes two values s1,s2");
  auto r = rationals(o.point);
  return {r[0], r[1]};
}

std::vector<int> zero_based(const std::vector<int> &U) {
  std::vector<int> out;
  for (int u : U) out.push_back(u - 1);
  return out;
}

std::string counts_text(const std::map<std::uint64_t, std::uint64_t> &c, const char *letter) {
  std::ostringstream os;
  for (const auto &[n, v] : c) os << letter << "_" << n << " = " << v << "\n";
  return os.str();
}

ojson counts_json(const std::map<std::uint64_t, std::uint64_t> &c) {
  ojson j = ojson::object();
  for (const auto &[n, v] : c) j[std::to_string(n)] = v;
  return j;
}

ojson counts_diff(const std::map<std::uint64_t, std::uint64_t> &a, const std::map<std::uint64_t, std::uint64_t> &b) {
  ojson diff = ojson::array();
  std::set<std::uint64_t> keys;
  for (const auto &[n, v] : a) keys.insert(n);
  for (const auto &[n, v] : b) keys.insert(n);
  for (auto n : keys) {
    auto x = a.count(n) ? a.at(n) : 0, y = b.count(n) ? b.at(n) : 0;
    if (x != y) diff.push_back({{"n", n}, {"brute", x}, {"linear", y}});
  }
  return diff;
}

ojson series_diff(const BivariateDirichletPolynomial &a, const BivariateDirichletPolynomial &b) {
  ojson diff = ojson::array();
  std::set<TermKey> keys;
  for (const auto &[k, v] : a.terms) keys.insert(k);
  for (const auto &[k, v] : b.terms) keys.insert(k);
  for (const auto &k : keys)
    if (a.coeff(k.j, k.m) != b.coeff(k.j, k.m))
      diff.push_back({{"j", k.j}, {"m", k.m}, {"brute", a.coeff(k.j, k.m)}, {"linear", b.coeff(k.j, k.m)}});
  return diff;
}

int run_lattice_check(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  ValidationReport rep = validate_lattice(lat);
  ojson doc = artifact("lattice-check");
  doc["lattice"] = lat.name();
  doc["ok"] = rep.ok;
  if (!rep.ok) doc["error"] = rep.code;
  if (rep.code == "JacobiViolation") doc["triple"] = rep.triple;
  doc["computed_class"] = rep.computed_class;
  doc["message"] = rep.message;
  std::string text = lat.name() + ": " + (rep.ok ? "ok" : rep.code + " - " + rep.message) + "\n";
  if (rep.ok) {
    LatticeProfile prof = profile(lat);
    doc["profile"] = profile_to_json(prof);
    doc["commutator"] = commutator_to_json(commutator_matrices(prof));
    doc["canonical"] = lattice_to_json(lat);
    text += "h=" + std::to_string(prof.h) + " a=" + std::to_string(prof.a) + " b=" + std::to_string(prof.b) +
            " class=" + std::to_string(prof.class_c) + "\n";
  }
  emit(o, doc, text);
  return rep.ok ? 0 : 2;
}

ojson group_json(const LieLattice &lat, const GaloisRing &R, const LatticeProfile &prof) {
  BigInt order = boost::multiprecision::pow(BigInt(R.q()), static_cast<unsigned>(R.N() * prof.h));
  return {{"lattice", lat.name()}, {"p", R.p()}, {"N", R.N()}, {"f", R.f()}, {"order", big_to_json(order)}};
}

int run_quotient_zeta(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  require_valid(lat);
  LatticeProfile prof = profile(lat);
  require_admissible(prof, o.p);
  GaloisRing R = GaloisRing::make(o.p, o.N, o.f);
  ZetaKind kind = parse_kind(o.kind);
  const char *key = kind == ZetaKind::Cc ? "classes" : "degrees";
  const char *letter = kind == ZetaKind::Cc ? "c" : "r";
  ojson doc = artifact("quotient-zeta");
  doc["group"] = group_json(lat, R, prof);
  doc["kind"] = to_string(kind);
  doc["method"] = o.method;
  auto compute = [&](Method m) {
    return quotient_zeta(prof, R, kind, m, group_bound(o), kCharacterBound);
  };
  if (o.method != "both") {
    auto c = compute(parse_method(o.method));
    doc[key] = counts_json(c);
    emit(o, doc, counts_text(c, letter));
    return 0;
  }
  auto brute = compute(Method::Brute), linear = compute(Method::Linear);
  doc[key] = ojson{{"brute", counts_json(brute)}, {"linear", counts_json(linear)}};
  doc["agree"] = brute == linear;
  std::string text = "brute:\n" + counts_text(brute, letter) + "linear:\n" + counts_text(linear, letter);
  if (brute != linear) {
    doc["error"] = "OracleMismatch";
    doc["diff"] = counts_diff(brute, linear);
    emit(o, doc, text + "MISMATCH\n");
    return 4;
  }
  emit(o, doc, text + "routes agree\n");
  return 0;
}

int run_local_factor(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  ZetaKind kind = parse_kind(o.kind);
  auto factor = [&](Method m) {
    LocalFactorRequest req{o.p, o.f, o.N_max, kind, m, group_bound(o), kCharacterBound};
    return local_factor_truncated(lat, req);
  };
  ojson doc = artifact("local-factor");
  doc["lattice"] = lat.name();
  doc["kind"] = to_string(kind);
  doc["p"] = o.p;
  doc["f"] = o.f;
  doc["N_max"] = o.N_max;
  doc["method"] = o.method;
  if (o.method != "both") {
    auto z = factor(parse_method(o.method));
    doc["series"] = series_to_json(z);
    doc["class_number"] = series_to_json(specialize_class_number(z));
    emit(o, doc, render_text(z));
    return 0;
  }
  auto a = factor(Method::Brute), b = factor(Method::Linear);
  doc["series"] = series_to_json(a);
  doc["agree"] = a == b;
  if (!(a == b)) {
    doc["linear_series"] = series_to_json(b);
    doc["error"] = "OracleMismatch";
    doc["diff"] = series_diff(a, b);
    emit(o, doc, render_text(a) + "MISMATCH against the linear route\n");
    return 4;
  }
  emit(o, doc, render_text(a) + "routes agree\n");
  return 0;
}

int run_euler(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  if (o.primes.empty() && o.prime_bound == 0) throw validation_error("BadParameter", "give --primes or --prime-bound");
  auto assemble = [&](Method m) {
    EulerRequest req{parse_kind(o.kind), m, o.N_max, group_bound(o), kCharacterBound};
    return o.primes.empty() ? euler_assemble(lat, o.prime_bound, req) : euler_assemble(lat, o.primes, req);
  };
  ojson doc = artifact("euler");
  doc["lattice"] = lat.name();
  doc["kind"] = o.kind;
  doc["N_max"] = o.N_max;
  doc["method"] = o.method;
  if (o.method != "both") {
    GlobalSeries g = assemble(parse_method(o.method));
    doc["series"] = series_to_json(g);
    emit(o, doc, render_text(g));
    return 0;
  }
  GlobalSeries a = assemble(Method::Brute), b = assemble(Method::Linear);
  doc["series"] = series_to_json(a);
  doc["agree"] = a == b;
  if (!(a == b)) {
    ojson diff = ojson::array();
    std::set<GlobalKey> keys;
    for (const auto &[k, v] : a.terms) keys.insert(k);
    for (const auto &[k, v] : b.terms) keys.insert(k);
    for (const auto &k : keys) {
      BigInt x = a.terms.count(k) ? a.terms.at(k) : BigInt(0), y = b.terms.count(k) ? b.terms.at(k) : BigInt(0);
      if (x != y)
        diff.push_back({{"j", big_to_json(k.d)}, {"norm", big_to_json(k.norm)}, {"brute", big_to_json(x)},
                        {"linear", big_to_json(y)}});
    }
    doc["error"] = "OracleMismatch";
    doc["diff"] = diff;
    emit(o, doc, render_text(a) + "MISMATCH against the linear route\n");
    return 4;
  }
  emit(o, doc, render_text(a) + "routes agree\n");
  return 0;
}

int run_compare_extensions(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  ZetaKind kind = parse_kind(o.kind);
  // With both, the law is fitted on the linear route and the direct factor is computed by both.
  const bool both = o.method == "both";
  Method method = both ? Method::Linear : parse_method(o.method);
  std::vector<std::uint64_t> primes = o.primes.empty() ? std::vector<std::uint64_t>{3, 5, 7, 11} : o.primes;
  FitRequest fr{kind, method, 1, o.N_max, o.degree, group_bound(o), kCharacterBound};
  CoefficientLaw law = fit_coefficient_law(lat, primes, fr);
  LocalFactorRequest lr{o.p, o.f, o.N_max, kind, method, group_bound(o), kCharacterBound};
  BivariateDirichletPolynomial direct = local_factor_truncated(lat, lr);
  std::optional<BivariateDirichletPolynomial> brute;
  if (both) {
    lr.method = Method::Brute;
    brute = local_factor_truncated(lat, lr);
  }
  const Rational q(BigInt(direct.base_q));
  auto predicted = law.evaluate(q);

  ojson doc = artifact("compare-extensions");
  doc["lattice"] = lat.name();
  doc["kind"] = to_string(kind);
  doc["q"] = direct.base_q;
  doc["law"] = law_to_json(law);
  doc["direct"] = series_to_json(direct);
  ojson rows = ojson::array();
  bool agree = true;
  std::set<TermKey> keys;
  for (const auto &[k, v] : predicted) keys.insert(k);
  for (const auto &[k, v] : direct.terms) keys.insert(k);
  std::ostringstream text;
  for (const auto &k : keys) {
    Rational pred = predicted.count(k) ? predicted.at(k) : Rational(0);
    Rational got(BigInt(direct.coeff(k.j, k.m)));
    bool ok = pred == got;
    agree = agree && ok;
    rows.push_back({{"j", k.j}, {"m", k.m}, {"predicted", to_string(pred)}, {"direct", to_string(got)}, {"ok", ok}});
    text << "(j=" << k.j << ", m=" << k.m << ") predicted " << to_string(pred) << " direct " << to_string(got)
         << (ok ? "" : "  MISMATCH") << "\n";
  }
  for (const auto &[m, poly] : law.specialized) {
    Rational pred = poly(q);
    Rational got = 0;
    for (const auto &[k, c] : direct.terms)
      if (k.m == m) got += c;
    text << "class number m=" << m << ": " << poly.to_string() << " -> " << to_string(pred) << " direct "
         << to_string(got) << "\n";
    agree = agree && pred == got;
  }
  doc["comparison"] = rows;
  if (brute) {
    bool routes = *brute == direct;
    doc["routes_agree"] = routes;
    if (!routes) {
      doc["brute_direct"] = series_to_json(*brute);
      doc["diff"] = series_diff(*brute, direct);
      text << "MISMATCH between brute and linear direct enumeration\n";
    }
    agree = agree && routes;
  }
  doc["agree"] = agree;
  if (!agree) doc["error"] = "OracleMismatch";
  emit(o, doc, text.str());
  return agree ? 0 : 4;
}

int run_dixon(const Options &o) {
  LieLattice lat = load_lattice(o.lattice);
  require_valid(lat);
  LatticeProfile prof = profile(lat);
  require_admissible(prof, o.p);
  GaloisRing R = GaloisRing::make(o.p, o.N, o.f);
  FiniteQuotientGroup G = build_group(prof, R, group_bound(o));
  DixonResult d = character_degrees(G);
  ClassData cls = conjugacy_classes(G, group_bound(o));
  ojson doc = artifact("dixon");
  doc["group"] = group_json(lat, R, prof);
  doc["field_prime"] = d.field_prime;
  doc["abelian"] = d.abelian;
  doc["degrees"] = counts_json(d.degrees.counts);
  doc["classes"] = counts_json(cls.counts);
  doc["k"] = cls.k;
  emit(o, doc, "field F_" + std::to_string(d.field_prime) + "\n" + counts_text(d.degrees.counts, "r"));
  return 0;
}

SparseExponentPolynomial load_poly(const Options &o) { return poly_from_json(read_json(o.poly)); }

std::int64_t poly_c(const Options &o, const SparseExponentPolynomial &h) {
  if (o.c) return *o.c;
  if (h.c) return *h.c;
  throw validation_error("BadParameter", "c is neither on the command line nor in the polynomial file");
}

int run_domain(const std::string &sub, const Options &o) {
  ojson doc = artifact("domain " + sub);
  if (sub == "wc") {
    auto h = load_poly(o);
    auto d = wc_domain(h, poly_c(o, h), parse_rational(o.delta), o.inertia);
    doc["c"] = poly_c(o, h);
    doc["delta"] = rational_to_json(parse_rational(o.delta));
    doc["halfplanes"] = domain_to_json(d);
    emit(o, doc, render_text(d));
  } else if (sub == "canonicalize") {
    auto d = canonicalize(domain_from_json(read_json(o.domain)));
    doc["halfplanes"] = domain_to_json(d);
    emit(o, doc, render_text(d));
  } else if (sub == "rset") {
    std::vector<HalfPlane> planes;
    if (!o.rays.empty()) {
      RayData rd = ray_data_from_json(read_json(o.rays));
      for (std::size_t j = 0; j < rd.rays.size(); ++j)
        if (rd.ray_in_wprime(static_cast<int>(j))) planes.push_back(ray_domain(rd.rays[j], 0));
      ojson comps = ojson::array();
      for (std::size_t k = 0; k < rd.cones.size(); ++k)
        if (rd.cone_in_wprime(static_cast<int>(k))) comps.push_back(domain_to_json(composite_domain(rd, static_cast<int>(k))));
      doc["ray_intersection"] = domain_to_json(ray_intersection(rd));
      doc["cone_domains"] = comps;
    } else {
      planes = domain_from_json(read_json(o.domain)).planes;
    }
    RSet r = r_set(planes);
    doc["rset"] = rset_to_json(r);
    std::ostringstream t;
    t << "R = {";
    for (std::size_t i = 0; i < r.indices.size(); ++i) t << (i ? "," : "") << r.indices[i];
    t << "}\n";
    emit(o, doc, t.str());
  } else if (sub == "cyclotomic") {
    auto f = detect_cyclotomic(load_poly(o));
    doc["factorization"] = factorization_to_json(f);
    std::ostringstream t;
    t << (f.cyclotomic() ? "cyclotomic" : f.cyclotomic_free() ? "cyclotomic-free" : "partially cyclotomic") << "\n";
    for (const auto &[l, g] : f.factors)
      t << "(1 - X^(" << l[0] << "," << l[1] << "," << l[2] << "))^" << g << "\n";
    emit(o, doc, t.str());
  } else if (sub == "probe") {
    auto h = load_poly(o);
    ProbeRequest req;
    std::tie(req.sigma1, req.sigma2) = point2(o);
    req.c = poly_c(o, h);
    req.prime_bound = o.prime_bound ? o.prime_bound : 100000;
    req.inertia = o.inertia;
    req.margin = parse_rational(o.margin);
    auto r = probe_convergence(h, req);
    doc["probe"] = probe_to_json(r);
    std::ostringstream t;
    t << "heuristic probe: " << r.verdict << "\n";
    for (const auto &tp : r.trace) t << "  p <= " << tp.bound << ": " << tp.partial_sum << "\n";
    emit(o, doc, t.str());
  } else {
    throw validation_error("BadSubcommand", "unknown domain operation '" + sub + "'");
  }
  return 0;
}

int run_xi(const std::string &sub, const Options &o) {
  ojson doc = artifact("xi " + sub);
  const BigInt q(o.q);
  if (o.q < 2) throw validation_error("BadParameter", "--q must be at least 2");
  if (sub == "eval") {
    DenefData d = denef_from_json(read_json(o.data));
    std::vector<Rational> s = o.s.empty() ? [&] {
      auto [s1, s2] = point2(o);
      return d.specialize(s1, s2);
    }()
                                          : rationals(o.s);
    XiValue v = xi_truncated(d, zero_based(o.U), q, s, o.depth);
    doc["xi"] = xi_to_json(v);
    emit(o, doc, "partial " + to_string(v.partial) + "\ntail <= " + to_string(v.tail) + "\n");
  } else if (sub == "rays") {
    RayData rd = ray_data_from_json(read_json(o.rays));
    auto [s1, s2] = point2(o);
    Rational v = ray_closed_form(rd, q, s1, s2);
    doc["value"] = to_string(v);
    emit(o, doc, to_string(v) + "\n");
  } else if (sub == "check") {
    DenefData d = denef_from_json(read_json(o.data));
    RayData rd = ray_data_from_json(read_json(o.rays));
    std::vector<std::pair<Rational, Rational>> grid;
    for (const auto &a : rationals(o.grid1.empty() ? std::vector<std::string>{"1", "2", "3"} : o.grid1))
      for (const auto &b : rationals(o.grid2.empty() ? std::vector<std::string>{"1", "2", "3"} : o.grid2))
        grid.emplace_back(a, b);
    ShapeReport rep = denef_shape_check(d, zero_based(o.U), rd, q, grid, o.depth);
    doc["report"] = shape_to_json(rep);
    emit(o, doc, render_text(rep));
    return rep.pass ? 0 : 4;
  } else {
    throw validation_error("BadSubcommand", "unknown xi operation '" + sub + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"bizeta: bivariate zeta data of nilpotent Lie lattices"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads (output does not depend on it)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", o.out, "write the JSON artifact here and print the text rendering");
  app.add_option("--format", o.format, "stdout format without --out")->check(CLI::IsMember({"json", "text"}));

  auto lattice_opt = [&](CLI::App *s) { s->add_option("--lattice", o.lattice, "lattice JSON")->required(); };
  auto ring_opts = [&](CLI::App *s) {
    s->add_option("--p", o.p, "prime")->required();
    s->add_option("--f", o.f, "residue degree")->check(CLI::PositiveNumber);
    s->add_option("--max-order", o.max_order, "enumeration bound (default 3^10 or BIZETA_MAX_GROUP_ORDER)");
  };
  auto kind_opts = [&](CLI::App *s) {
    s->add_option("--kind", o.kind, "irr or cc")->check(CLI::IsMember({"irr", "cc"}));
    s->add_option("--method", o.method, "brute, linear or both")->check(CLI::IsMember({"brute", "linear", "both"}));
  };

  auto *check = app.add_subcommand("lattice-check", "validate a lattice and print its profile");
  lattice_opt(check);

  auto *qz = app.add_subcommand("quotient-zeta", "class or degree counts of one finite quotient");
  lattice_opt(qz);
  ring_opts(qz);
  qz->add_option("--N", o.N, "level")->check(CLI::PositiveNumber);
  kind_opts(qz);

  auto *lf = app.add_subcommand("local-factor", "truncated local factor at one prime");
  lattice_opt(lf);
  ring_opts(lf);
  lf->add_option("--N-max", o.N_max, "truncation level")->check(CLI::NonNegativeNumber);
  kind_opts(lf);

  auto *eu = app.add_subcommand("euler", "truncated Euler product over rational primes");
  lattice_opt(eu);
  eu->add_option("--primes", o.primes, "comma-separated primes")->delimiter(',');
  eu->add_option("--prime-bound", o.prime_bound, "all primes up to this bound");
  eu->add_option("--N-max", o.N_max, "truncation level")->check(CLI::NonNegativeNumber);
  eu->add_option("--max-order", o.max_order, "enumeration bound");
  kind_opts(eu);

  auto *ce = app.add_subcommand("compare-extensions", "fit q-laws on f = 1 and test them on GR(p^N, f)");
  lattice_opt(ce);
  ring_opts(ce);
  ce->add_option("--primes", o.primes, "fitting primes (default 3,5,7,11)")->delimiter(',');
  ce->add_option("--N-max", o.N_max, "truncation level")->check(CLI::NonNegativeNumber);
  ce->add_option("--degree", o.degree_opt, "fitting degree (default min(2hN, #primes - 2))");
  kind_opts(ce);

  auto *dx = app.add_subcommand("dixon", "character degrees by the Dixon-Schneider method");
  lattice_opt(dx);
  ring_opts(dx);
  dx->add_option("--N", o.N, "level")->check(CLI::PositiveNumber);

  auto *dom = app.add_subcommand("domain", "polyhedral convergence domains");
  dom->require_subcommand(1);
  auto poly_opts = [&](CLI::App *s) {
    s->add_option("--poly", o.poly, "polynomial JSON {c, terms:[{coeff,e1,e2,e3}]}")->required();
    s->add_option("--c", o.c, "exponent scale c (overrides the file)");
    s->add_option("--inertia", o.inertia, "residue degrees of the primes above p")->delimiter(',');
  };
  auto *wc = dom->add_subcommand("wc", "the domain W_c(delta)");
  poly_opts(wc);
  wc->add_option("--delta", o.delta, "delta >= 0");
  auto *canon = dom->add_subcommand("canonicalize", "drop redundant half-planes");
  canon->add_option("--domain", o.domain, "list of {a1,a2,b}")->required();
  auto *rs = dom->add_subcommand("rset", "indices whose boundary meets the intersection's boundary");
  auto *rs_dom = rs->add_option("--domain", o.domain, "list of {a1,a2,b}");
  rs->add_option("--rays", o.rays, "ray data; uses the family D_{j,0}")->excludes(rs_dom);
  auto *cyc = dom->add_subcommand("cyclotomic", "factor out (1 - X^lambda) factors");
  cyc->add_option("--poly", o.poly, "polynomial JSON")->required();
  auto *probe = dom->add_subcommand("probe", "numerical convergence probe (heuristic)");
  poly_opts(probe);
  probe->add_option("--point", o.point, "s1,s2")->delimiter(',')->required();
  probe->add_option("--prime-bound", o.prime_bound, "largest prime (default 1e5)");
  probe->add_option("--margin", o.margin, "refuse verdicts this close to the boundary");

  auto *xi = app.add_subcommand("xi", "Denef-type sums");
  xi->require_subcommand(1);
  auto *xe = xi->add_subcommand("eval", "truncated Xi sum with tail bound");
  xe->add_option("--data", o.data, "DenefData JSON")->required();
  auto *xr = xi->add_subcommand("rays", "closed form of the ray products");
  xr->add_option("--rays", o.rays, "RayData JSON")->required();
  auto *xc = xi->add_subcommand("check", "truncated sums against closed forms on a grid");
  xc->add_option("--data", o.data, "DenefData JSON")->required();
  xc->add_option("--rays", o.rays, "RayData JSON")->required();
  xc->add_option("--grid-s1", o.grid1, "s1 values (default 1,2,3)")->delimiter(',');
  xc->add_option("--grid-s2", o.grid2, "s2 values (default 1,2,3)")->delimiter(',');
  for (auto *s : {xe, xc}) {
    s->add_option("--U", o.U, "1-based subset of T")->delimiter(',');
    s->add_option("--depth", o.depth, "truncation depth")->check(CLI::PositiveNumber);
  }
  xe->add_option("--s", o.s, "s_1,...,s_l")->delimiter(',');
  for (auto *s : {xe, xr}) s->add_option("--point", o.point, "s1,s2 (through the specialization)")->delimiter(',');
  for (auto *s : {xe, xr, xc}) s->add_option("--q", o.q, "residue field size")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (o.degree_opt >= 0) o.degree = o.degree_opt;
  if (o.threads > 0) set_num_threads(o.threads);

  try {
    if (check->parsed()) return run_lattice_check(o);
    if (qz->parsed()) return run_quotient_zeta(o);
    if (lf->parsed()) return run_local_factor(o);
    if (eu->parsed()) return run_euler(o);
    if (ce->parsed()) return run_compare_extensions(o);
    if (dx->parsed()) return run_dixon(o);
    if (dom->parsed()) return run_domain(dom->get_subcommands().front()->get_name(), o);
    if (xi->parsed()) return run_xi(xi->get_subcommands().front()->get_name(), o);
  } catch (const Error &e) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["error"] = e.code();
    doc["message"] = e.what();
    std::cerr << "error: " << e.what() << "\n";
    if (!o.out.empty()) {
      std::ofstream f(o.out, std::ios::binary);
      f << doc.dump(2) << "\n";
    }
    return exit_code(e.category());
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

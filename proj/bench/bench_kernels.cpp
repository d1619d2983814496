#include <benchmark/benchmark.h>

#include "bizeta/denef_eval.hpp"
#include "bizeta/domain_geometry.hpp"
#include "bizeta/finite_quotient.hpp"
#include "bizeta/orbit_linear.hpp"
#include "bizeta/parallel.hpp"

using namespace bizeta;

namespace {

const LatticeProfile &heisenberg_profile() {
  static const LatticeProfile p = profile(load_lattice(std::string(BIZETA_CORPUS_DIR) + "/heisenberg.json"));
  return p;
}

const LatticeProfile &free_profile() {
  static const LatticeProfile p = profile(load_lattice(std::string(BIZETA_CORPUS_DIR) + "/free_class2_3gen.json"));
  return p;
}

void BM_ConjugacySerial(benchmark::State &st) {
  auto G = build_group(heisenberg_profile(), GaloisRing::make(3, 3, 1));
  for (auto _ : st) benchmark::DoNotOptimize(conjugacy_partition_serial(G));
}
BENCHMARK(BM_ConjugacySerial)->Unit(benchmark::kMillisecond);

void BM_ConjugacyParallel(benchmark::State &st) {
  set_num_threads(static_cast<int>(st.range(0)));
  auto G = build_group(heisenberg_profile(), GaloisRing::make(3, 3, 1));
  for (auto _ : st) benchmark::DoNotOptimize(conjugacy_partition_parallel(G));
  set_num_threads(1);
}
BENCHMARK(BM_ConjugacyParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DivisorSerial(benchmark::State &st) {
  auto M = commutator_matrices(free_profile());
  GaloisRing R = GaloisRing::make(5, 2, 1);
  for (auto _ : st) benchmark::DoNotOptimize(divisor_distribution_serial(M, Which::B, R));
}
BENCHMARK(BM_DivisorSerial)->Unit(benchmark::kMillisecond);

void BM_DivisorParallel(benchmark::State &st) {
  set_num_threads(static_cast<int>(st.range(0)));
  auto M = commutator_matrices(free_profile());
  GaloisRing R = GaloisRing::make(5, 2, 1);
  for (auto _ : st) benchmark::DoNotOptimize(divisor_distribution(M, Which::B, R));
  set_num_threads(1);
}
BENCHMARK(BM_DivisorParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

DenefData bench_data() {
  std::mt19937_64 rng(1);
  DenefData d = random_denef_data(rng);
  d.t = 2;
  d.nu = {1, 2};
  d.N.assign(2, {});
  for (int u = 0; u < 2; ++u)
    for (std::size_t k = 0; k < d.e.size(); ++k) d.N[u].push_back(std::vector<int>(d.e[k].size(), 1));
  return d;
}

void BM_XiReference(benchmark::State &st) {
  DenefData d = bench_data();
  std::vector<Rational> s(d.l, 6);
  for (auto _ : st) benchmark::DoNotOptimize(xi_truncated_reference(d, {0, 1}, 2, s, 40));
}
BENCHMARK(BM_XiReference)->Unit(benchmark::kMillisecond);

void BM_XiChunked(benchmark::State &st) {
  set_num_threads(static_cast<int>(st.range(0)));
  DenefData d = bench_data();
  std::vector<Rational> s(d.l, 6);
  for (auto _ : st) benchmark::DoNotOptimize(xi_truncated(d, {0, 1}, 2, s, 40));
  set_num_threads(1);
}
BENCHMARK(BM_XiChunked)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Probe(benchmark::State &st) {
  set_num_threads(static_cast<int>(st.range(0)));
  SparseExponentPolynomial h;
  h.terms.push_back({-1, {1, 1, 2}});
  ProbeRequest req;
  req.sigma1 = 1;
  req.sigma2 = 1;
  for (auto _ : st) benchmark::DoNotOptimize(probe_convergence(h, req));
  set_num_threads(1);
}
BENCHMARK(BM_Probe)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

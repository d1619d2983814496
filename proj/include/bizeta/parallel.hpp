#pragma once

#include <cstdint>
#include <vector>

namespace bizeta {

// Worker thread count used by every parallel kernel. Results never depend on it.
void set_num_threads(int n);
int num_threads();

// Deterministic chunked reduction over [0, n). Chunk boundaries are fixed by
// `chunk` alone; each chunk fills its own accumulator and the accumulators
// are merged serially in chunk order, so the result is schedule-independent.
template <class Acc, class Body, class Merge>
Acc chunked_reduce(std::uint64_t n, std::uint64_t chunk, const Acc &init, Body body, Merge merge) {
  if (chunk == 0) chunk = 1;
  const std::int64_t chunks = static_cast<std::int64_t>((n + chunk - 1) / chunk);
  std::vector<Acc> partial(static_cast<std::size_t>(chunks), init);
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (std::int64_t c = 0; c < chunks; ++c) {
    std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
    std::uint64_t hi = lo + chunk < n ? lo + chunk : n;
    body(lo, hi, partial[static_cast<std::size_t>(c)]);
  }
  Acc out = init;
  for (auto &p : partial) merge(out, p);
  return out;
}

}  // namespace bizeta

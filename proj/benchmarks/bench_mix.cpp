#include <vector>

#include <benchmark/benchmark.h>

#include "spdmix/augment.hpp"
#include "spdmix/generators.hpp"
#include "spdmix/linalg.hpp"

namespace {

using namespace spdmix;

struct Pair {
  SpdMatrix a;
  SpdMatrix b;
};

Pair make_pair(Index n) {
  Rng rng(static_cast<std::uint64_t>(n));
  return {gen_random_spd(n, 1e3, rng), gen_random_spd(n, 1e3, rng)};
}

void BM_EigSym(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eig_sym(p.a.symmetric()));
  }
}

void BM_RMixupDirect(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  const Label y = Label::Zero(1);
  const MixRatio lambda(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(r_mixup(p.a, p.b, y, y, lambda));
  }
}

void BM_RMixupCached(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  const EigenCache::Entry ca = EigenCache::make_entry(p.a.symmetric());
  const EigenCache::Entry cb = EigenCache::make_entry(p.b.symmetric());
  const Label y = Label::Zero(1);
  const MixRatio lambda(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(r_mixup_cached(ca, cb, y, y, lambda));
  }
}

void BM_VMixup(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  const Label y = Label::Zero(1);
  const MixRatio lambda(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(v_mixup(p.a.symmetric(), p.b.symmetric(), y, y, lambda));
  }
}

void Dims(benchmark::internal::Benchmark* b) {
  for (int n : {8, 50, 120, 360}) b->Arg(n);
  b->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_EigSym)->Apply(Dims);
BENCHMARK(BM_RMixupDirect)->Apply(Dims);
BENCHMARK(BM_RMixupCached)->Apply(Dims);
BENCHMARK(BM_VMixup)->Apply(Dims);

BENCHMARK_MAIN();

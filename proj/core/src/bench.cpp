#include "spdmix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <utility>

#include "spdmix/augment.hpp"
#include "spdmix/error.hpp"
#include "spdmix/generators.hpp"

namespace spdmix {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Sink for mixed results.
volatile double g_sink = 0.0;

}  // namespace

void BenchConfig::validate() const {
  if (dims.empty() || batch == 0 || reps == 0) {
    throw DomainError("benchmark needs at least one dimension, batch >= 1 and reps >= 1");
  }
  for (Index n : dims) {
    if (n < 1) {
      std::ostringstream os;
      os << "benchmark dimension must be >= 1, got " << n;
      throw DomainError(os.str());
    }
  }
}

BenchRow bench_dimension(Index n, std::size_t batch, std::size_t reps, std::uint64_t seed,
                         double condition) {
  BenchRow row;
  row.n = n;
  row.batch = batch;
  row.reps = reps;
  std::vector<double> direct;
  std::vector<double> cached;
  std::vector<double> vanilla;
  std::vector<double> precompute;
  std::uint64_t direct_eigs = 0;
  std::uint64_t cached_eigs = 0;
  const Label y = Label::Zero(1);

  for (std::size_t rep = 0; rep < reps; ++rep) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(n) * 1000003u + rep);
    std::vector<SpdMatrix> mats;
    mats.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) mats.push_back(gen_random_spd(n, condition, rng));
    std::vector<std::pair<std::size_t, std::size_t>> pairs(batch);
    std::vector<MixRatio> lambdas;
    lambdas.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) {
      pairs[k] = {rng.index(batch), rng.index(batch)};
      lambdas.push_back(sample_beta(1.0, rng));
    }

    std::uint64_t before = eig_call_count();
    Clock::time_point start = Clock::now();
    for (std::size_t k = 0; k < batch; ++k) {
      const auto [i, j] = pairs[k];
      g_sink = g_sink + r_mixup(mats[i], mats[j], y, y, lambdas[k]).matrix(0, 0);
    }
    direct.push_back(seconds_since(start) / static_cast<double>(batch));
    direct_eigs += eig_call_count() - before;

    start = Clock::now();
    std::vector<EigenCache::Entry> entries;
    entries.reserve(batch);
    for (const SpdMatrix& s : mats) entries.push_back(EigenCache::make_entry(s.symmetric()));
    precompute.push_back(seconds_since(start));

    before = eig_call_count();
    start = Clock::now();
    for (std::size_t k = 0; k < batch; ++k) {
      const auto [i, j] = pairs[k];
      g_sink = g_sink + r_mixup_cached(entries[i], entries[j], y, y, lambdas[k]).matrix(0, 0);
    }
    cached.push_back(seconds_since(start) / static_cast<double>(batch));
    cached_eigs += eig_call_count() - before;

    start = Clock::now();
    for (std::size_t k = 0; k < batch; ++k) {
      const auto [i, j] = pairs[k];
      g_sink = g_sink +
               v_mixup(mats[i].symmetric(), mats[j].symmetric(), y, y, lambdas[k]).matrix(0, 0);
    }
    vanilla.push_back(seconds_since(start) / static_cast<double>(batch));
  }

  const double mixes = static_cast<double>(batch * reps);
  row.direct_sec = median(direct);
  row.cached_sec = median(cached);
  row.vanilla_sec = median(vanilla);
  row.precompute_sec = median(precompute);
  row.direct_eigs = static_cast<double>(direct_eigs) / mixes;
  row.cached_eigs = static_cast<double>(cached_eigs) / mixes;
  return row;
}

std::vector<BenchRow> run_mix_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<BenchRow> rows;
  rows.reserve(config.dims.size());
  for (Index n : config.dims) {
    rows.push_back(bench_dimension(n, config.batch, config.reps, config.seed, config.condition));
  }
  return rows;
}

}  // namespace spdmix

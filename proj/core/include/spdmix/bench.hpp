#pragma once

// Wall-clock comparison of direct R-Mixup, eigencache R-Mixup and vanilla
// mixup on synthetic batches.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spdmix/linalg.hpp"

namespace spdmix {

struct BenchConfig {
  std::vector<Index> dims{8, 50, 120, 360};
  std::size_t batch = 64;
  std::size_t reps = 5;
  std::uint64_t seed = 0;
  double condition = 1e3;

  void validate() const;
};

struct BenchRow {
  Index n = 0;
  std::size_t batch = 0;
  std::size_t reps = 0;
  /// Median over repetitions of wall-clock seconds per mixed sample.
  double direct_sec = 0.0;
  double cached_sec = 0.0;
  double vanilla_sec = 0.0;
  /// Median seconds to decompose the whole batch once.
  double precompute_sec = 0.0;
  /// Eigendecompositions per mixed sample.
  double direct_eigs = 0.0;
  double cached_eigs = 0.0;

  double speedup() const { return cached_sec > 0.0 ? direct_sec / cached_sec : 0.0; }
};

/// One row per dimension. Each repetition draws `batch` random matrices and
/// mixes `batch` random pairs with every method.
std::vector<BenchRow> run_mix_benchmark(const BenchConfig& config);

BenchRow bench_dimension(Index n, std::size_t batch, std::size_t reps, std::uint64_t seed,
                         double condition = 1e3);

}  // namespace spdmix

#pragma once

#include <cstdint>
#include <random>

#include "pidlab/distribution.hpp"

namespace pidlab {

struct RandomSpec {
  std::vector<size_t> sizes;
  /// Default names: X1, X2, Y for three variables, X, Y for two, V1.. else.
  Names names;
  /// Chance that a cell is forced to zero (at least one cell stays positive).
  double zero_fraction = 0.0;
  /// Cell weights are integers in [1, max_weight] before normalization.
  unsigned max_weight = 9;
};

/// Exact random distribution with small integer weights.
JointDistribution random_distribution(std::mt19937_64& rng, const RandomSpec& spec);

/// Deterministic per-index generator: seeds mix `seed` and `index`.
std::mt19937_64 stream_rng(uint64_t seed, uint64_t index);

}  // namespace pidlab

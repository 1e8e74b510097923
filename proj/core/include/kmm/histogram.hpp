#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include "kmm/combinatorics.hpp"

namespace kmm {

enum class Exactness { kExact, kEstimated };

/// Value type for sampled quantities. Estimates of F_i and M_i are fractional
/// and may be negative after inclusion-exclusion; they are never clamped.
using Estimate = long double;

/// Per-distance values: M_i pair counts, or the F_i sums they are recovered
/// from. Count-valued instances are exact, Estimate-valued ones sampled.
template <typename T>
struct DistanceVector {
  std::vector<T> values;

  static constexpr Exactness exactness = std::is_same_v<T, Count> ? Exactness::kExact : Exactness::kEstimated;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] const T& operator[](std::size_t i) const { return values[i]; }
  [[nodiscard]] T& operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const DistanceVector&, const DistanceVector&) = default;
};

/// M_i: ordered k-mer pairs at Hamming distance exactly i.
using DistanceHistogram = DistanceVector<Count>;
using EstimatedHistogram = DistanceVector<Estimate>;

/// F_i: sum of f_theta over all theta with |theta| = k - i.
using FVector = DistanceVector<Count>;
using EstimatedFVector = DistanceVector<Estimate>;

}  // namespace kmm

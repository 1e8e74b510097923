#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kmm/combinatorics.hpp"
#include "kmm/histogram.hpp"
#include "kmm/sequences.hpp"
#include "kmm/statistics.hpp"

namespace kmm {

inline constexpr std::size_t kDefaultMaxSamples = 300;
inline constexpr double kDefaultSigma = 0.5;

/// Sampling controls. sigma is the stopping threshold on the standard error
/// of the mean f_theta; it is either given directly or derived as
/// epsilon * sqrt(delta).
struct SamplerConfig {
  std::optional<double> epsilon;
  std::optional<double> delta;
  double sigma = kDefaultSigma;
  std::size_t max_samples = kDefaultMaxSamples;
  std::uint64_t seed = 0;

  static SamplerConfig from_accuracy(double epsilon, double delta, std::size_t max_samples, std::uint64_t seed);
  static SamplerConfig from_sigma(double sigma, std::size_t max_samples, std::uint64_t seed);

  /// Throws InvalidArgument if any invariant is violated.
  void validate() const;
};

/// Single-pass mean and sum of squared deviations (Welford).
struct OnlineStats {
  std::size_t count = 0;
  long double mean = 0;
  long double m2 = 0;

  void push(long double sample) noexcept {
    ++count;
    const long double delta = sample - mean;
    mean += delta / static_cast<long double>(count);
    m2 += delta * (sample - mean);
  }

  /// Sample variance / count; +inf below two samples.
  [[nodiscard]] long double variance_of_mean() const noexcept {
    if (count < 2) {
      return std::numeric_limits<long double>::infinity();
    }
    const auto n = static_cast<long double>(count);
    return m2 / (n * (n - 1));
  }
};

[[nodiscard]] inline OnlineStats update_online_stats(OnlineStats stats, long double sample) noexcept {
  stats.push(sample);
  return stats;
}

/// 64-bit mixing function used to derive independent stream seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the stream for one (pair, i) estimation task.
[[nodiscard]] std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t x_key, std::uint64_t y_key,
                                               std::uint64_t i) noexcept;

/// Engine for all sampling. Bounded draws avoid std distributions so that
/// streams are identical across standard library implementations.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  /// Uniformly random size-`size` subset of {0..k-1}, by partial
  /// Fisher-Yates over the index array.
  IndexSubset subset(int k, int size);

 private:
  std::mt19937_64 engine_;
};

enum class SamplingMode { kExhaustive, kSampled };

[[nodiscard]] std::string_view to_string(SamplingMode mode) noexcept;

struct FEstimate {
  Estimate estimate = 0;
  OnlineStats stats;
  SamplingMode mode = SamplingMode::kExhaustive;
  /// Set in exhaustive mode.
  std::optional<Count> exact;
  /// Number of sort-enumerate calls made.
  std::size_t evaluations = 0;
};

/// Estimates F_i. If C(k, k-i) <= max_samples all subsets are enumerated and
/// the exact value returned. Otherwise subsets of size k-i are drawn uniformly
/// with replacement until the variance of the mean f_theta drops to sigma^2
/// (after at least two draws) or max_samples draws are made; the estimate is
/// the mean scaled by C(k, k-i).
[[nodiscard]] FEstimate estimate_F(const SortEnumerator& enumerator, int i, const SamplerConfig& config,
                                   SampleStream& rng);
[[nodiscard]] FEstimate estimate_F(const KmerList& sx, const KmerList& sy, int i, const SamplerConfig& config,
                                   SampleStream& rng);

struct DistanceDiagnostics {
  int distance = 0;
  SamplingMode mode = SamplingMode::kExhaustive;
  std::size_t samples = 0;
  /// Variance of the mean f_theta at stop (the quantity compared to sigma^2).
  long double variance_of_mean = 0;
  /// The same variance scaled by C(k, k-i)^2, i.e. of the F_i estimate.
  long double scaled_variance = 0;
  Estimate f_estimate = 0;
  Estimate m_estimate = 0;
};

struct KernelDiagnostics {
  std::vector<DistanceDiagnostics> per_distance;
  std::size_t evaluations = 0;
  double sigma = 0;
  std::size_t max_samples = 0;
  [[nodiscard]] bool all_exhaustive() const noexcept;
};

struct ApproximateKernel {
  Estimate value = 0;
  EstimatedHistogram m;
  KernelDiagnostics diagnostics;
};

/// Identifies the pair being estimated so each (pair, i) task gets its own
/// stream.
struct PairKey {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
};

/// Content hash of a sequence's codes.
[[nodiscard]] std::uint64_t fingerprint(std::span<const Symbol> codes) noexcept;

/// Key from the two sequences' fingerprints, smaller first, so that equal
/// contents draw equal streams and K'(X,Y) = K'(Y,X).
[[nodiscard]] PairKey pair_key(const Sequence& x, const Sequence& y) noexcept;

/// K' = sum_i I_i M'_i with M' recovered from the F'_i estimates.
[[nodiscard]] ApproximateKernel approximate_kernel(const KmerList& sx, const KmerList& sy,
                                                   const IntersectionTable& table, const SamplerConfig& config,
                                                   PairKey key = {});
/// Streams are keyed by pair_key(x, y).
[[nodiscard]] ApproximateKernel approximate_kernel(const Sequence& x, const Sequence& y,
                                                   const IntersectionTable& table, const SamplerConfig& config);

}  // namespace kmm

#pragma once

// Brute-force reference implementations. Everything here enumerates Sigma^k
// or all k-mer pairs directly and is meant for small inputs only.

#include <cstdint>
#include <span>
#include <vector>

#include "kmm/combinatorics.hpp"
#include "kmm/histogram.hpp"
#include "kmm/sequences.hpp"

namespace kmm::oracle {

/// Largest s^k the enumerating oracles accept.
inline constexpr std::uint64_t kOracleLimit = 10'000'000;

/// s^k, throwing OracleScaleError if it exceeds kOracleLimit.
std::uint64_t checked_space_size(int k, int s);

/// All k-mers within Hamming distance m of `kmer`, as base-s ranks in
/// increasing order (rank = sum of code_p * s^(k-1-p)).
[[nodiscard]] std::vector<std::uint64_t> enumerate_neighborhood(std::span<const Symbol> kmer, int m, int s);

/// |N_m(a) ∩ N_m(b)| by explicit set intersection.
[[nodiscard]] Count oracle_intersection(std::span<const Symbol> a, std::span<const Symbol> b, int m, int s);

/// counts[q][r] = number of gamma in Sigma^k with d(a,gamma) = q and
/// d(b,gamma) = r, by scanning all of Sigma^k.
[[nodiscard]] std::vector<std::vector<Count>> shell_intersections(std::span<const Symbol> a,
                                                                  std::span<const Symbol> b, int s);

/// M_0..M_k by comparing every ordered pair.
[[nodiscard]] DistanceHistogram oracle_distance_histogram(const KmerList& sx, const KmerList& sy);

/// <Phi(X), Phi(Y)> with both spectra materialized over Sigma^k.
[[nodiscard]] Count oracle_kernel_spectrum(const Sequence& x, const Sequence& y, const KernelParams& params);

/// Sum over all k-mer pairs of oracle_intersection.
[[nodiscard]] Count oracle_kernel_pairwise(const Sequence& x, const Sequence& y, const KernelParams& params);

}  // namespace kmm::oracle

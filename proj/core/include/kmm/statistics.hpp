#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kmm/combinatorics.hpp"
#include "kmm/histogram.hpp"
#include "kmm/sequences.hpp"

namespace kmm {

/// A set of k-mer positions, strictly increasing, all below k.
class IndexSubset {
 public:
  IndexSubset() = default;
  /// Throws InvalidArgument unless `indices` is strictly increasing and < k.
  IndexSubset(std::vector<int> indices, int k);

  /// {0, 1, ..., k-1}.
  static IndexSubset all(int k);

  [[nodiscard]] const std::vector<int>& indices() const noexcept { return indices_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] int k() const noexcept { return k_; }

 private:
  std::vector<int> indices_;
  int k_ = 0;
};

/// Counts pairs of (S_X, S_Y) that agree on a projection, reusing per-pair
/// setup across many subsets. Holds references; both lists must outlive it.
class SortEnumerator {
 public:
  SortEnumerator(const KmerList& sx, const KmerList& sy);

  /// f_theta: ordered pairs (alpha, beta) with alpha|theta == beta|theta.
  /// Both lists are sorted by their theta projection and merged once; each
  /// run of equal keys contributes (run in X) * (run in Y).
  [[nodiscard]] std::uint64_t count(const IndexSubset& theta) const;

  /// Same merge as count(), emitting every matching (x row, y row) pair.
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> pairs(const IndexSubset& theta) const;

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] std::uint64_t total_pairs() const noexcept {
    return static_cast<std::uint64_t>(sx_.count()) * static_cast<std::uint64_t>(sy_.count());
  }

 private:
  template <typename OnBlock>
  void merge_blocks(const IndexSubset& theta, OnBlock&& on_block) const;

  const KmerList& sx_;
  const KmerList& sy_;
  int k_;
  int bits_per_symbol_;
};

[[nodiscard]] std::uint64_t sort_enumerate(const KmerList& sx, const KmerList& sy, const IndexSubset& theta);

/// Calls visit(theta) for every subset of {0..k-1} of the given size, in
/// lexicographic order.
template <typename Visit>
void for_each_subset(int k, int size, Visit&& visit);

/// F_i by enumerating all C(k, i) subsets of size k - i. Exponential in k;
/// meant for tests and the exact-F matrix mode.
[[nodiscard]] Count exact_F(const KmerList& sx, const KmerList& sy, int i);

/// F_0..F_last, sharing setup across i.
[[nodiscard]] FVector exact_F_vector(const KmerList& sx, const KmerList& sy, int last);

/// Inverts F_i = sum_{j<=i} C(k-j, k-i) M_j for M, in increasing i. Works on
/// exact counts and on estimates alike.
[[nodiscard]] DistanceHistogram m_from_f(const FVector& f, int k);
[[nodiscard]] EstimatedHistogram m_from_f(const EstimatedFVector& f, int k);

/// The forward map, F_i = sum_{j<=i} C(k-j, k-i) M_j, for i < |m|.
[[nodiscard]] FVector f_from_m(const DistanceHistogram& m, int k);

enum class ExactStrategy { kPairwiseBruteforce, kFullFEnumeration };

/// K = sum_{i<=t} M_i I_i with M_i computed exactly by the chosen strategy.
[[nodiscard]] Count exact_kernel(const KmerList& sx, const KmerList& sy, const IntersectionTable& table,
                                 ExactStrategy strategy);
[[nodiscard]] Count exact_kernel(const Sequence& x, const Sequence& y, const KernelParams& params,
                                 const IntersectionTable& table, ExactStrategy strategy);

/// sum_i m[i] * table.at(i) over the indices present in m (missing I_i are 0).
[[nodiscard]] Count sum_product(const DistanceHistogram& m, const IntersectionTable& table);

// ---------------------------------------------------------------------------

template <typename Visit>
void for_each_subset(int k, int size, Visit&& visit) {
  if (size < 0 || size > k) {
    return;
  }
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) {
    idx[static_cast<std::size_t>(j)] = j;
  }
  while (true) {
    visit(IndexSubset(idx, k));
    int j = size - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == k - size + j) {
      --j;
    }
    if (j < 0) {
      return;
    }
    ++idx[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < size; ++l) {
      idx[static_cast<std::size_t>(l)] = idx[static_cast<std::size_t>(l - 1)] + 1;
    }
  }
}

}  // namespace kmm

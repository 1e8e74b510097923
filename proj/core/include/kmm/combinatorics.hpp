#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kmm {

/// Exact signed integer used for every combinatorial count. Neighborhood
/// sizes grow like C(k,m)(s-1)^m, so fixed-width types are not enough.
using Count = boost::multiprecision::cpp_int;

/// (k, m, s) triple that governs every kernel computation.
class KernelParams {
 public:
  /// Throws InvalidArgument unless k >= 1, 0 <= m <= k and s >= 2.
  KernelParams(int k, int m, int s);

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] int m() const noexcept { return m_; }
  [[nodiscard]] int s() const noexcept { return s_; }
  /// Largest Hamming distance with a non-empty neighborhood intersection,
  /// min(2m, k).
  [[nodiscard]] int t() const noexcept { return t_; }

  friend bool operator==(const KernelParams&, const KernelParams&) = default;

 private:
  int k_;
  int m_;
  int s_;
  int t_;
};

/// C(n, r); zero when r < 0, r > n or n < 0.
[[nodiscard]] Count binomial(std::int64_t n, std::int64_t r);

/// base^exp with 0^0 = 1.
[[nodiscard]] Count power(std::int64_t base, std::int64_t exp);

/// Number of k-mers at distance exactly q from alpha and exactly r from beta,
/// for any alpha, beta at Hamming distance d. Closed form; no enumeration.
/// Requires 0 <= q, r, d <= k.
[[nodiscard]] Count intersection_count(int q, int r, int d, const KernelParams& params);

/// Size of the m-mismatch neighborhood of a single k-mer,
/// sum_{q<=m} C(k,q)(s-1)^q.
[[nodiscard]] Count neighborhood_size(const KernelParams& params);

/// I_d for d = 0..t: the neighborhood intersection size of two k-mers at
/// distance d. Entries beyond t are zero and are answered by at().
class IntersectionTable {
 public:
  explicit IntersectionTable(const KernelParams& params);

  [[nodiscard]] const KernelParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::vector<Count>& values() const noexcept { return values_; }
  /// I_d for any 0 <= d <= k; zero for d > t.
  [[nodiscard]] Count at(int d) const;
  [[nodiscard]] const Count& i_max() const noexcept { return i_max_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

 private:
  KernelParams params_;
  std::vector<Count> values_;
  Count i_max_;
};

[[nodiscard]] inline IntersectionTable intersection_table(const KernelParams& params) {
  return IntersectionTable(params);
}

}  // namespace kmm

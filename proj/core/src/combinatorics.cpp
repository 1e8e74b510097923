#include "kmm/combinatorics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "kmm/error.hpp"

namespace kmm {

KernelParams::KernelParams(int k, int m, int s) : k_(k), m_(m), s_(s), t_(std::min(2 * m, k)) {
  if (k < 1) {
    throw InvalidArgument(fmt::format("k must be positive (got {})", k));
  }
  if (m < 0 || m > k) {
    throw InvalidArgument(fmt::format("m must satisfy 0 <= m <= k (got m={}, k={})", m, k));
  }
  if (s < 2) {
    throw InvalidArgument(fmt::format("alphabet size must be at least 2 (got {})", s));
  }
}

Count binomial(std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 0 || r > n) {
    return 0;
  }
  r = std::min(r, n - r);
  Count result = 1;
  // Each partial product is itself a binomial coefficient, so the division
  // is exact.
  for (std::int64_t i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

Count power(std::int64_t base, std::int64_t exp) {
  if (exp < 0) {
    throw InvalidArgument("negative exponent");
  }
  Count result = 1;
  Count b = base;
  while (exp > 0) {
    if (exp & 1) {
      result *= b;
    }
    b *= b;
    exp >>= 1;
  }
  return result;
}

Count intersection_count(int q, int r, int d, const KernelParams& params) {
  const int k = params.k();
  if (q < 0 || r < 0 || d < 0 || q > k || r > k || d > k) {
    throw InvalidArgument(
        fmt::format("intersection_count needs 0 <= q, r, d <= k (q={}, r={}, d={}, k={})", q, r, d, k));
  }
  const std::int64_t s = params.s();
  Count total = 0;
  if (q + r < d) {
    return total;
  }
  // u counts positions changed inside the k-d agreeing positions; the rest
  // of the changes happen inside the d differing positions.
  for (int u = 0; 2 * u <= q + r - d; ++u) {
    const int both_changed = q + r - 2 * u - d;
    Count term = binomial(2 * d - q - r + 2 * u, d - (q - u));
    if (term == 0) {
      continue;
    }
    term *= binomial(d, both_changed);
    term *= power(s - 2, both_changed);
    term *= binomial(k - d, u);
    term *= power(s - 1, u);
    total += term;
  }
  return total;
}

Count neighborhood_size(const KernelParams& params) {
  Count total = 0;
  for (int q = 0; q <= params.m(); ++q) {
    total += binomial(params.k(), q) * power(params.s() - 1, q);
  }
  return total;
}

IntersectionTable::IntersectionTable(const KernelParams& params) : params_(params) {
  const int m = params.m();
  values_.reserve(static_cast<std::size_t>(params.t()) + 1);
  for (int d = 0; d <= params.t(); ++d) {
    Count value = 0;
    for (int q = 0; q <= m; ++q) {
      for (int r = 0; r <= m; ++r) {
        value += intersection_count(q, r, d, params);
      }
    }
    values_.push_back(std::move(value));
  }
  i_max_ = *std::max_element(values_.begin(), values_.end());
}

Count IntersectionTable::at(int d) const {
  if (d < 0 || d > params_.k()) {
    throw InvalidArgument(fmt::format("distance {} outside [0, {}]", d, params_.k()));
  }
  if (d >= static_cast<int>(values_.size())) {
    return 0;
  }
  return values_[static_cast<std::size_t>(d)];
}

}  // namespace kmm

#include "kmm/oracle.hpp"

#include <algorithm>
#include <iterator>

#include <fmt/format.h>

#include "kmm/error.hpp"

namespace kmm::oracle {

namespace {

// Visits every gamma in Sigma^k in rank order; `digits` holds gamma.
template <typename Visit>
void for_each_kmer(int k, int s, Visit&& visit) {
  const std::uint64_t total = checked_space_size(k, s);
  std::vector<Symbol> digits(static_cast<std::size_t>(k), 0);
  for (std::uint64_t rank = 0; rank < total; ++rank) {
    visit(rank, std::span<const Symbol>(digits));
    for (int p = k - 1; p >= 0; --p) {
      auto& digit = digits[static_cast<std::size_t>(p)];
      if (++digit < s) {
        break;
      }
      digit = 0;
    }
  }
}

void check_codes(std::span<const Symbol> kmer, int s) {
  for (Symbol c : kmer) {
    if (c >= s) {
      throw InvalidArgument(fmt::format("symbol code {} outside alphabet of size {}", c, s));
    }
  }
}

}  // namespace

std::uint64_t checked_space_size(int k, int s) {
  if (k < 1 || s < 2) {
    throw InvalidArgument(fmt::format("oracle needs k >= 1 and s >= 2 (k={}, s={})", k, s));
  }
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= static_cast<std::uint64_t>(s);
    if (total > kOracleLimit) {
      throw OracleScaleError(
          fmt::format("oracle scale exceeded: s^k = {}^{} is above the enumeration limit {}", s, k, kOracleLimit));
    }
  }
  return total;
}

std::vector<std::uint64_t> enumerate_neighborhood(std::span<const Symbol> kmer, int m, int s) {
  check_codes(kmer, s);
  std::vector<std::uint64_t> out;
  for_each_kmer(static_cast<int>(kmer.size()), s, [&](std::uint64_t rank, std::span<const Symbol> gamma) {
    if (hamming(kmer, gamma) <= m) {
      out.push_back(rank);
    }
  });
  return out;
}

Count oracle_intersection(std::span<const Symbol> a, std::span<const Symbol> b, int m, int s) {
  if (a.size() != b.size()) {
    throw InvalidArgument("k-mers of different length");
  }
  const auto na = enumerate_neighborhood(a, m, s);
  const auto nb = enumerate_neighborhood(b, m, s);
  std::vector<std::uint64_t> common;
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
  return Count(common.size());
}

std::vector<std::vector<Count>> shell_intersections(std::span<const Symbol> a, std::span<const Symbol> b, int s) {
  if (a.size() != b.size()) {
    throw InvalidArgument("k-mers of different length");
  }
  check_codes(a, s);
  check_codes(b, s);
  const auto k = a.size();
  std::vector<std::vector<std::uint64_t>> counts(k + 1, std::vector<std::uint64_t>(k + 1, 0));
  for_each_kmer(static_cast<int>(k), s, [&](std::uint64_t, std::span<const Symbol> gamma) {
    ++counts[static_cast<std::size_t>(hamming(a, gamma))][static_cast<std::size_t>(hamming(b, gamma))];
  });
  std::vector<std::vector<Count>> out(k + 1, std::vector<Count>(k + 1));
  for (std::size_t q = 0; q <= k; ++q) {
    for (std::size_t r = 0; r <= k; ++r) {
      out[q][r] = counts[q][r];
    }
  }
  return out;
}

DistanceHistogram oracle_distance_histogram(const KmerList& sx, const KmerList& sy) {
  if (sx.k() != sy.k()) {
    throw InvalidArgument(fmt::format("k-mer lists of different k ({} vs {})", sx.k(), sy.k()));
  }
  const auto k = static_cast<std::size_t>(sx.k());
  std::vector<std::uint64_t> counts(k + 1, 0);
  for (std::size_t a = 0; a < sx.count(); ++a) {
    const auto row_a = sx.row(a);
    for (std::size_t b = 0; b < sy.count(); ++b) {
      ++counts[static_cast<std::size_t>(hamming(row_a, sy.row(b)))];
    }
  }
  DistanceHistogram hist;
  hist.values.assign(counts.begin(), counts.end());
  return hist;
}

Count oracle_kernel_spectrum(const Sequence& x, const Sequence& y, const KernelParams& params) {
  const int k = params.k();
  const int s = params.s();
  const auto space = checked_space_size(k, s);
  const auto kx = extract_kmers(x, k);
  const auto ky = extract_kmers(y, k);

  auto spectrum = [&](const KmerList& kmers) {
    std::vector<std::uint64_t> phi(space, 0);
    for (std::size_t p = 0; p < kmers.count(); ++p) {
      check_codes(kmers.row(p), s);
    }
    for_each_kmer(k, s, [&](std::uint64_t rank, std::span<const Symbol> gamma) {
      for (std::size_t p = 0; p < kmers.count(); ++p) {
        if (hamming(kmers.row(p), gamma) <= params.m()) {
          ++phi[rank];
        }
      }
    });
    return phi;
  };

  const auto phi_x = spectrum(kx);
  const auto phi_y = spectrum(ky);
  Count total = 0;
  for (std::uint64_t g = 0; g < space; ++g) {
    if (phi_x[g] != 0 && phi_y[g] != 0) {
      total += Count(phi_x[g]) * phi_y[g];
    }
  }
  return total;
}

Count oracle_kernel_pairwise(const Sequence& x, const Sequence& y, const KernelParams& params) {
  checked_space_size(params.k(), params.s());
  const auto kx = extract_kmers(x, params.k());
  const auto ky = extract_kmers(y, params.k());
  Count total = 0;
  for (std::size_t a = 0; a < kx.count(); ++a) {
    for (std::size_t b = 0; b < ky.count(); ++b) {
      total += oracle_intersection(kx.row(a), ky.row(b), params.m(), params.s());
    }
  }
  return total;
}

}  // namespace kmm::oracle

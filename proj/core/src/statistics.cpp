#include "kmm/statistics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <fmt/format.h>

#include "kmm/error.hpp"
#include "kmm/oracle.hpp"

namespace kmm {

IndexSubset::IndexSubset(std::vector<int> indices, int k) : indices_(std::move(indices)), k_(k) {
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    const int v = indices_[j];
    if (v < 0 || v >= k || (j > 0 && indices_[j - 1] >= v)) {
      throw InvalidArgument(fmt::format("index subset must be strictly increasing within [0, {})", k));
    }
  }
}

IndexSubset IndexSubset::all(int k) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  return IndexSubset(std::move(idx), k);
}

SortEnumerator::SortEnumerator(const KmerList& sx, const KmerList& sy) : sx_(sx), sy_(sy), k_(sx.k()) {
  if (sx.k() != sy.k()) {
    throw InvalidArgument(fmt::format("k-mer lists of different k ({} vs {})", sx.k(), sy.k()));
  }
  Symbol max_code = 0;
  for (Symbol c : sx.data()) {
    max_code = std::max(max_code, c);
  }
  for (Symbol c : sy.data()) {
    max_code = std::max(max_code, c);
  }
  bits_per_symbol_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(max_code))));
}

namespace {

std::uint64_t pack(std::span<const Symbol> row, const std::vector<int>& theta, int bits) {
  std::uint64_t key = 0;
  for (int p : theta) {
    key = (key << bits) | row[static_cast<std::size_t>(p)];
  }
  return key;
}

}  // namespace

template <typename OnBlock>
void SortEnumerator::merge_blocks(const IndexSubset& theta, OnBlock&& on_block) const {
  if (theta.k() != k_ && !(theta.size() == 0 && theta.k() == 0)) {
    throw InvalidArgument(fmt::format("index subset built for k={} used with k={}", theta.k(), k_));
  }
  const auto& pos = theta.indices();
  const std::size_t nx = sx_.count();
  const std::size_t ny = sy_.count();
  if (nx == 0 || ny == 0) {
    return;
  }

  // Keyed path: the projection fits in one machine word.
  if (static_cast<std::size_t>(bits_per_symbol_) * pos.size() <= 64) {
    using Keyed = std::pair<std::uint64_t, std::size_t>;
    auto keyed = [&](const KmerList& list) {
      std::vector<Keyed> out(list.count());
      for (std::size_t r = 0; r < list.count(); ++r) {
        out[r] = {pack(list.row(r), pos, bits_per_symbol_), r};
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto kx = keyed(sx_);
    const auto ky = keyed(sy_);
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < nx && b < ny) {
      if (kx[a].first < ky[b].first) {
        ++a;
      } else if (ky[b].first < kx[a].first) {
        ++b;
      } else {
        const auto key = kx[a].first;
        std::size_t ea = a;
        std::size_t eb = b;
        while (ea < nx && kx[ea].first == key) {
          ++ea;
        }
        while (eb < ny && ky[eb].first == key) {
          ++eb;
        }
        on_block(std::span<const Keyed>(kx.data() + a, ea - a), std::span<const Keyed>(ky.data() + b, eb - b));
        a = ea;
        b = eb;
      }
    }
    return;
  }

  // Wide path: lexicographic comparison of the projected symbols.
  auto compare = [&](std::span<const Symbol> u, std::span<const Symbol> v) {
    for (int p : pos) {
      const auto i = static_cast<std::size_t>(p);
      if (u[i] != v[i]) {
        return u[i] < v[i] ? -1 : 1;
      }
    }
    return 0;
  };
  using Keyed = std::pair<std::uint64_t, std::size_t>;
  auto sorted = [&](const KmerList& list) {
    std::vector<Keyed> out(list.count());
    for (std::size_t r = 0; r < list.count(); ++r) {
      out[r] = {0, r};
    }
    std::sort(out.begin(), out.end(),
              [&](const Keyed& u, const Keyed& v) { return compare(list.row(u.second), list.row(v.second)) < 0; });
    return out;
  };
  const auto kx = sorted(sx_);
  const auto ky = sorted(sy_);
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < nx && b < ny) {
    const int c = compare(sx_.row(kx[a].second), sy_.row(ky[b].second));
    if (c < 0) {
      ++a;
    } else if (c > 0) {
      ++b;
    } else {
      std::size_t ea = a + 1;
      std::size_t eb = b + 1;
      while (ea < nx && compare(sx_.row(kx[ea].second), sx_.row(kx[a].second)) == 0) {
        ++ea;
      }
      while (eb < ny && compare(sy_.row(ky[eb].second), sy_.row(ky[b].second)) == 0) {
        ++eb;
      }
      on_block(std::span<const Keyed>(kx.data() + a, ea - a), std::span<const Keyed>(ky.data() + b, eb - b));
      a = ea;
      b = eb;
    }
  }
}

std::uint64_t SortEnumerator::count(const IndexSubset& theta) const {
  if (theta.size() == 0) {
    return total_pairs();
  }
  std::uint64_t total = 0;
  merge_blocks(theta, [&](auto xs, auto ys) { total += static_cast<std::uint64_t>(xs.size()) * ys.size(); });
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> SortEnumerator::pairs(const IndexSubset& theta) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  merge_blocks(theta, [&](auto xs, auto ys) {
    for (const auto& [kx, a] : xs) {
      for (const auto& [ky, b] : ys) {
        out.emplace_back(a, b);
      }
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t sort_enumerate(const KmerList& sx, const KmerList& sy, const IndexSubset& theta) {
  return SortEnumerator(sx, sy).count(theta);
}

Count exact_F(const KmerList& sx, const KmerList& sy, int i) {
  const int k = sx.k();
  if (i < 0 || i > k) {
    throw InvalidArgument(fmt::format("F index {} outside [0, {}]", i, k));
  }
  const SortEnumerator enumerator(sx, sy);
  Count total = 0;
  for_each_subset(k, k - i, [&](const IndexSubset& theta) { total += enumerator.count(theta); });
  return total;
}

FVector exact_F_vector(const KmerList& sx, const KmerList& sy, int last) {
  const int k = sx.k();
  if (last < 0 || last > k) {
    throw InvalidArgument(fmt::format("F index {} outside [0, {}]", last, k));
  }
  const SortEnumerator enumerator(sx, sy);
  FVector f;
  f.values.resize(static_cast<std::size_t>(last) + 1);
  for (int i = 0; i <= last; ++i) {
    Count total = 0;
    for_each_subset(k, k - i, [&](const IndexSubset& theta) { total += enumerator.count(theta); });
    f.values[static_cast<std::size_t>(i)] = std::move(total);
  }
  return f;
}

namespace {

template <typename T>
T coefficient(int k, int j, int i) {
  if constexpr (std::is_same_v<T, Count>) {
    return binomial(k - j, k - i);
  } else {
    return binomial(k - j, k - i).template convert_to<T>();
  }
}

template <typename T>
DistanceVector<T> invert(const DistanceVector<T>& f, int k) {
  if (f.size() > static_cast<std::size_t>(k) + 1) {
    throw InvalidArgument(fmt::format("F vector of length {} exceeds k + 1 = {}", f.size(), k + 1));
  }
  DistanceVector<T> m;
  m.values.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    T value = f.values[i];
    for (std::size_t j = 0; j < i; ++j) {
      value -= coefficient<T>(k, static_cast<int>(j), static_cast<int>(i)) * m.values[j];
    }
    m.values[i] = value;
  }
  return m;
}

}  // namespace

DistanceHistogram m_from_f(const FVector& f, int k) { return invert(f, k); }

EstimatedHistogram m_from_f(const EstimatedFVector& f, int k) { return invert(f, k); }

FVector f_from_m(const DistanceHistogram& m, int k) {
  FVector f;
  f.values.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    Count value = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      value += binomial(k - static_cast<int>(j), k - static_cast<int>(i)) * m.values[j];
    }
    f.values[i] = std::move(value);
  }
  return f;
}

Count sum_product(const DistanceHistogram& m, const IntersectionTable& table) {
  Count total = 0;
  const auto limit = std::min(m.size(), table.size());
  for (std::size_t i = 0; i < limit; ++i) {
    total += m.values[i] * table.values()[i];
  }
  return total;
}

Count exact_kernel(const KmerList& sx, const KmerList& sy, const IntersectionTable& table, ExactStrategy strategy) {
  const auto& params = table.params();
  if (sx.k() != params.k() || sy.k() != params.k()) {
    throw InvalidArgument(fmt::format("k-mer lists do not match table k={}", params.k()));
  }
  if (sx.empty() || sy.empty()) {
    return 0;
  }
  DistanceHistogram m;
  if (strategy == ExactStrategy::kPairwiseBruteforce) {
    m = oracle::oracle_distance_histogram(sx, sy);
    m.values.resize(static_cast<std::size_t>(params.t()) + 1);
  } else {
    m = m_from_f(exact_F_vector(sx, sy, params.t()), params.k());
  }
  return sum_product(m, table);
}

Count exact_kernel(const Sequence& x, const Sequence& y, const KernelParams& params, const IntersectionTable& table,
                   ExactStrategy strategy) {
  if (!(table.params() == params)) {
    throw InvalidArgument("intersection table was built for different parameters");
  }
  return exact_kernel(extract_kmers(x, params.k()), extract_kmers(y, params.k()), table, strategy);
}

}  // namespace kmm

#include "kmm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kmm/error.hpp"

namespace kmm {

SamplerConfig SamplerConfig::from_accuracy(double epsilon, double delta, std::size_t max_samples,
                                           std::uint64_t seed) {
  SamplerConfig config;
  config.epsilon = epsilon;
  config.delta = delta;
  config.sigma = epsilon * std::sqrt(delta);
  config.max_samples = max_samples;
  config.seed = seed;
  config.validate();
  return config;
}

SamplerConfig SamplerConfig::from_sigma(double sigma, std::size_t max_samples, std::uint64_t seed) {
  SamplerConfig config;
  config.sigma = sigma;
  config.max_samples = max_samples;
  config.seed = seed;
  config.validate();
  return config;
}

void SamplerConfig::validate() const {
  if (epsilon.has_value() != delta.has_value()) {
    throw InvalidArgument("epsilon and delta must be given together");
  }
  if (epsilon && !(*epsilon > 0 && *epsilon < 1)) {
    throw InvalidArgument(fmt::format("epsilon must lie in (0, 1) (got {})", *epsilon));
  }
  if (delta && !(*delta > 0 && *delta < 1)) {
    throw InvalidArgument(fmt::format("delta must lie in (0, 1) (got {})", *delta));
  }
  if (!(sigma >= 0) || !std::isfinite(sigma)) {
    throw InvalidArgument(fmt::format("sigma must be a finite non-negative number (got {})", sigma));
  }
  if (epsilon && std::abs(sigma - *epsilon * std::sqrt(*delta)) > 1e-12) {
    throw InvalidArgument("sigma is inconsistent with epsilon * sqrt(delta)");
  }
  if (max_samples < 1) {
    throw InvalidArgument("max_samples must be at least 1");
  }
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t x_key, std::uint64_t y_key,
                                 std::uint64_t i) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ x_key);
  h = splitmix64(h ^ y_key);
  return splitmix64(h ^ i);
}

std::uint64_t fingerprint(std::span<const Symbol> codes) noexcept {
  std::uint64_t h = splitmix64(codes.size());
  for (Symbol c : codes) {
    h = splitmix64(h ^ c);
  }
  return h;
}

PairKey pair_key(const Sequence& x, const Sequence& y) noexcept {
  const auto a = fingerprint(x.codes);
  const auto b = fingerprint(y.codes);
  return {std::min(a, b), std::max(a, b)};
}

std::uint64_t SampleStream::below(std::uint64_t bound) {
  if (bound == 0) {
    throw InvalidArgument("empty sampling range");
  }
  // Rejecting the low (2^64 mod bound) values leaves an exact multiple of
  // bound, so the modulus is uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = engine_();
    if (r >= threshold) {
      return r % bound;
    }
  }
}

IndexSubset SampleStream::subset(int k, int size) {
  if (size < 0 || size > k) {
    throw InvalidArgument(fmt::format("cannot draw {} of {} positions", size, k));
  }
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < size; ++j) {
    const auto pick = static_cast<std::size_t>(j) + below(static_cast<std::uint64_t>(k - j));
    std::swap(idx[static_cast<std::size_t>(j)], idx[pick]);
  }
  idx.resize(static_cast<std::size_t>(size));
  std::sort(idx.begin(), idx.end());
  return IndexSubset(std::move(idx), k);
}

std::string_view to_string(SamplingMode mode) noexcept {
  return mode == SamplingMode::kExhaustive ? "exhaustive" : "sampled";
}

FEstimate estimate_F(const SortEnumerator& enumerator, int i, const SamplerConfig& config, SampleStream& rng) {
  const int k = enumerator.k();
  if (i < 0 || i > k) {
    throw InvalidArgument(fmt::format("F index {} outside [0, {}]", i, k));
  }
  const Count population = binomial(k, k - i);
  FEstimate out;

  if (population <= config.max_samples) {
    Count total = 0;
    for_each_subset(k, k - i, [&](const IndexSubset& theta) {
      const auto f = enumerator.count(theta);
      out.stats.push(static_cast<long double>(f));
      total += f;
      ++out.evaluations;
    });
    out.mode = SamplingMode::kExhaustive;
    out.estimate = total.convert_to<Estimate>();
    out.exact = std::move(total);
    return out;
  }

  const long double threshold = static_cast<long double>(config.sigma) * config.sigma;
  out.mode = SamplingMode::kSampled;
  while (out.stats.count < config.max_samples && (out.stats.count < 2 || out.stats.variance_of_mean() > threshold)) {
    const auto theta = rng.subset(k, k - i);
    out.stats.push(static_cast<long double>(enumerator.count(theta)));
    ++out.evaluations;
  }
  out.estimate = out.stats.mean * population.convert_to<Estimate>();
  return out;
}

FEstimate estimate_F(const KmerList& sx, const KmerList& sy, int i, const SamplerConfig& config,
                     SampleStream& rng) {
  return estimate_F(SortEnumerator(sx, sy), i, config, rng);
}

bool KernelDiagnostics::all_exhaustive() const noexcept {
  return std::all_of(per_distance.begin(), per_distance.end(),
                     [](const DistanceDiagnostics& d) { return d.mode == SamplingMode::kExhaustive; });
}

ApproximateKernel approximate_kernel(const KmerList& sx, const KmerList& sy, const IntersectionTable& table,
                                     const SamplerConfig& config, PairKey key) {
  config.validate();
  const auto& params = table.params();
  if (sx.k() != params.k() || sy.k() != params.k()) {
    throw InvalidArgument(fmt::format("k-mer lists do not match table k={}", params.k()));
  }
  const int k = params.k();
  const int t = params.t();
  const auto n = static_cast<std::size_t>(t) + 1;

  ApproximateKernel result;
  result.diagnostics.sigma = config.sigma;
  result.diagnostics.max_samples = config.max_samples;
  result.m.values.assign(n, 0);
  if (sx.empty() || sy.empty()) {
    return result;
  }

  const SortEnumerator enumerator(sx, sy);
  EstimatedFVector f;
  f.values.resize(n);
  FVector exact_f;
  exact_f.values.resize(n);
  result.diagnostics.per_distance.resize(n);
  for (int i = 0; i <= t; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    SampleStream rng(derive_stream_seed(config.seed, key.x, key.y, ui));
    auto est = estimate_F(enumerator, i, config, rng);
    const auto scale = binomial(k, k - i).convert_to<long double>();

    auto& diag = result.diagnostics.per_distance[ui];
    diag.distance = i;
    diag.mode = est.mode;
    diag.samples = est.evaluations;
    diag.variance_of_mean = est.mode == SamplingMode::kExhaustive ? 0 : est.stats.variance_of_mean();
    diag.scaled_variance = diag.variance_of_mean * scale * scale;
    diag.f_estimate = est.estimate;
    result.diagnostics.evaluations += est.evaluations;

    f.values[ui] = est.estimate;
    if (est.exact) {
      exact_f.values[ui] = std::move(*est.exact);
    }
  }

  result.m = m_from_f(f, k);
  if (result.diagnostics.all_exhaustive()) {
    // No sampling happened: use the integer path so the value is exact.
    const auto m = m_from_f(exact_f, k);
    result.value = sum_product(m, table).convert_to<Estimate>();
    for (std::size_t i = 0; i < n; ++i) {
      result.m.values[i] = m.values[i].convert_to<Estimate>();
    }
  } else {
    Estimate total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += table.values()[i].convert_to<Estimate>() * result.m.values[i];
    }
    result.value = total;
  }
  for (std::size_t i = 0; i < n; ++i) {
    result.diagnostics.per_distance[i].m_estimate = result.m.values[i];
  }
  return result;
}

ApproximateKernel approximate_kernel(const Sequence& x, const Sequence& y, const IntersectionTable& table,
                                     const SamplerConfig& config) {
  const int k = table.params().k();
  return approximate_kernel(extract_kmers(x, k), extract_kmers(y, k), table, config, pair_key(x, y));
}

}  // namespace kmm

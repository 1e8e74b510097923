#include "kmm/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "kmm/error.hpp"
#include "kmm/oracle.hpp"
#include "kmm/statistics.hpp"

namespace kmm {

std::string_view to_string(MatrixMode mode) noexcept {
  switch (mode) {
    case MatrixMode::kExactBruteforce:
      return "exact-bruteforce";
    case MatrixMode::kExactF:
      return "exact-f";
    case MatrixMode::kApproximate:
      return "approx";
    case MatrixMode::kOracleSpectrum:
      return "oracle-spectrum";
  }
  return "unknown";
}

std::optional<MatrixMode> parse_matrix_mode(std::string_view name) noexcept {
  if (name == "exact" || name == "exact-bruteforce") {
    return MatrixMode::kExactBruteforce;
  }
  if (name == "exact-f") {
    return MatrixMode::kExactF;
  }
  if (name == "approx" || name == "approximate") {
    return MatrixMode::kApproximate;
  }
  if (name == "oracle" || name == "oracle-spectrum") {
    return MatrixMode::kOracleSpectrum;
  }
  return std::nullopt;
}

std::optional<MatrixFormat> parse_matrix_format(std::string_view name) noexcept {
  if (name == "csv") {
    return MatrixFormat::kCsv;
  }
  if (name == "svm-precomputed" || name == "svm") {
    return MatrixFormat::kSvmPrecomputed;
  }
  return std::nullopt;
}

KernelMatrix::KernelMatrix(std::vector<std::string> ids, std::vector<std::optional<std::string>> labels)
    : ids_(std::move(ids)), labels_(std::move(labels)), values_(ids_.size() * ids_.size(), 0.0) {
  if (labels_.size() != ids_.size()) {
    throw InvalidArgument("ids and labels differ in length");
  }
}

bool KernelMatrix::all_labeled() const noexcept {
  return std::all_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.has_value(); });
}

namespace {

struct CellFailure {
  std::size_t cell = 0;
  std::exception_ptr error;
};

[[noreturn]] void rethrow_with_pair(const std::exception_ptr& error, const std::string& a, const std::string& b) {
  const auto where = fmt::format("kernel({}, {}): ", a, b);
  try {
    std::rethrow_exception(error);
  } catch (const OracleScaleError& e) {
    throw OracleScaleError(where + e.what());
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + e.what());
  }
}

}  // namespace

KernelMatrix build_matrix(const Dataset& dataset, const KernelParams& params, MatrixMode mode,
                          const SamplerConfig& config, BuildOptions options) {
  const auto start = std::chrono::steady_clock::now();
  if (!dataset.empty() && dataset.alphabet.size() != params.s()) {
    throw InvalidArgument(
        fmt::format("dataset alphabet has {} symbols but s = {}", dataset.alphabet.size(), params.s()));
  }
  if (mode == MatrixMode::kApproximate) {
    config.validate();
  }
  if (mode == MatrixMode::kOracleSpectrum) {
    oracle::checked_space_size(params.k(), params.s());
  }

  std::vector<std::string> ids;
  std::vector<std::optional<std::string>> labels;
  for (const auto& seq : dataset.sequences) {
    ids.push_back(seq.id);
    labels.push_back(seq.label);
  }
  KernelMatrix matrix(std::move(ids), std::move(labels));
  matrix.meta.params = params;
  matrix.meta.mode = mode;
  if (mode == MatrixMode::kApproximate) {
    matrix.meta.config = config;
  }

  const std::size_t n = dataset.size();
  const IntersectionTable table(params);
  std::vector<KmerList> kmers;
  kmers.reserve(n);
  for (const auto& seq : dataset.sequences) {
    kmers.push_back(extract_kmers(seq, params.k()));
  }

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cells.emplace_back(i, j);
    }
  }

  auto compute = [&](std::size_t i, std::size_t j) -> double {
    switch (mode) {
      case MatrixMode::kExactBruteforce:
        return exact_kernel(kmers[i], kmers[j], table, ExactStrategy::kPairwiseBruteforce).convert_to<double>();
      case MatrixMode::kExactF:
        return exact_kernel(kmers[i], kmers[j], table, ExactStrategy::kFullFEnumeration).convert_to<double>();
      case MatrixMode::kApproximate:
        return static_cast<double>(approximate_kernel(kmers[i], kmers[j], table, config, pair_key(dataset.sequences[i], dataset.sequences[j])).value);
      case MatrixMode::kOracleSpectrum:
        return oracle::oracle_kernel_spectrum(dataset.sequences[i], dataset.sequences[j], params)
            .convert_to<double>();
    }
    return 0.0;
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::optional<CellFailure> failure;
  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= cells.size()) {
        return;
      }
      const auto [i, j] = cells[c];
      try {
        const double v = compute(i, j);
        matrix(i, j) = v;
        matrix(j, i) = v;
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure || c < failure->cell) {
          failure = CellFailure{c, std::current_exception()};
        }
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back(worker);
    }
  }

  if (failure) {
    const auto [i, j] = cells[failure->cell];
    rethrow_with_pair(failure->error, matrix.ids()[i], matrix.ids()[j]);
  }
  matrix.meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return matrix;
}

KernelMatrix normalize(const KernelMatrix& matrix) {
  const std::size_t n = matrix.size();
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(matrix(i, i) > 0)) {
      bad.push_back(matrix.ids()[i]);
    }
  }
  if (!bad.empty()) {
    throw DataError(fmt::format("cannot normalize: non-positive self-kernel for {}", fmt::join(bad, ", ")));
  }
  KernelMatrix out = matrix;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = i == j ? 1.0 : matrix(i, j) / std::sqrt(matrix(i, i) * matrix(j, j));
    }
  }
  out.meta.normalized = true;
  return out;
}

ErrorReport error_metrics(const KernelMatrix& reference, const KernelMatrix& other) {
  if (reference.size() != other.size()) {
    throw DataError(fmt::format("matrix shapes differ ({0}x{0} vs {1}x{1})", reference.size(), other.size()));
  }
  if (reference.ids() != other.ids()) {
    throw DataError("matrices list different ids or a different id order");
  }
  ErrorReport report;
  const std::size_t n = reference.size();
  if (n == 0) {
    return report;
  }
  long double sum_abs = 0;
  long double sum_sq = 0;
  long double ref_sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long double diff = static_cast<long double>(reference(i, j)) - other(i, j);
      const long double a = std::abs(diff);
      sum_abs += a;
      sum_sq += diff * diff;
      ref_sq += static_cast<long double>(reference(i, j)) * reference(i, j);
      if (a > report.max_abs) {
        report.max_abs = static_cast<double>(a);
        report.argmax_row = i;
        report.argmax_col = j;
      }
    }
  }
  const auto cells = static_cast<long double>(n * n);
  report.mae = static_cast<double>(sum_abs / cells);
  report.rmse = static_cast<double>(std::sqrt(sum_sq / cells));
  report.relative_frobenius = ref_sq > 0 ? static_cast<double>(std::sqrt(sum_sq / ref_sq)) : 0.0;
  report.argmax_row_id = reference.ids()[report.argmax_row];
  report.argmax_col_id = reference.ids()[report.argmax_col];
  return report;
}

void write_report(std::ostream& out, const ErrorReport& report, std::string_view title, std::string_view prefix) {
  out << fmt::format("{}\n", title);
  out << fmt::format("  MAE                 {:.6e}\n", report.mae);
  out << fmt::format("  RMSE                {:.6e}\n", report.rmse);
  out << fmt::format("  max |a-b|           {:.6e} at ({}, {})\n", report.max_abs, report.argmax_row_id,
                     report.argmax_col_id);
  out << fmt::format("  relative Frobenius  {:.6e}\n", report.relative_frobenius);
  out << fmt::format("{}mae={}\n", prefix, format_value(report.mae));
  out << fmt::format("{}rmse={}\n", prefix, format_value(report.rmse));
  out << fmt::format("{}max_abs={}\n", prefix, format_value(report.max_abs));
  out << fmt::format("{}max_abs_at={},{}\n", prefix, report.argmax_row_id, report.argmax_col_id);
  out << fmt::format("{}relative_frobenius={}\n", prefix, format_value(report.relative_frobenius));
}

std::string format_value(double value) { return fmt::format("{:.17g}", value); }

void write_matrix(const KernelMatrix& matrix, MatrixFormat format, std::ostream& out) {
  const std::size_t n = matrix.size();
  if (format == MatrixFormat::kSvmPrecomputed) {
    if (!matrix.all_labeled()) {
      std::vector<std::string> missing;
      for (std::size_t i = 0; i < n; ++i) {
        if (!matrix.labels()[i]) {
          missing.push_back(matrix.ids()[i]);
        }
      }
      throw DataError(fmt::format("svm-precomputed output needs a label for every sequence; missing: {}",
                                  fmt::join(missing, ", ")));
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::string line = fmt::format("{} 0:{}", *matrix.labels()[i], i + 1);
      for (std::size_t j = 0; j < n; ++j) {
        line += fmt::format(" {}:{}", j + 1, format_value(matrix(i, j)));
      }
      line += '\n';
      out << line;
    }
    return;
  }

  std::string header = "id";
  for (const auto& id : matrix.ids()) {
    header += ',';
    header += id;
  }
  out << header << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    std::string line = matrix.ids()[i];
    for (std::size_t j = 0; j < n; ++j) {
      line += ',';
      line += format_value(matrix(i, j));
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

}  // namespace

KernelMatrix read_csv_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty matrix file");
  }
  auto header = split_csv(line);
  if (header.empty() || header[0] != "id") {
    throw DataError("matrix csv must start with an 'id' header cell");
  }
  std::vector<std::string> ids(header.begin() + 1, header.end());
  const std::size_t n = ids.size();
  KernelMatrix matrix(ids, std::vector<std::optional<std::string>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw DataError(fmt::format("matrix csv ends after {} of {} rows", i, n));
    }
    const auto cells = split_csv(line);
    if (cells.size() != n + 1) {
      throw DataError(fmt::format("matrix csv row {} has {} cells, expected {}", i + 1, cells.size(), n + 1));
    }
    if (cells[0] != ids[i]) {
      throw DataError(fmt::format("matrix csv row {} is '{}', expected '{}'", i + 1, cells[0], ids[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& text = cells[j + 1];
      double v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError(fmt::format("matrix csv row {}: bad value '{}'", i + 1, text));
      }
      matrix(i, j) = v;
    }
  }
  return matrix;
}

}  // namespace kmm

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmm/combinatorics.hpp"
#include "kmm/estimator.hpp"
#include "kmm/sequences.hpp"

namespace kmm {

enum class MatrixMode { kExactBruteforce, kExactF, kApproximate, kOracleSpectrum };

[[nodiscard]] std::string_view to_string(MatrixMode mode) noexcept;
/// Accepts "exact" (alias of "exact-bruteforce"), "exact-f", "approx"
/// ("approximate"), "oracle" ("oracle-spectrum").
[[nodiscard]] std::optional<MatrixMode> parse_matrix_mode(std::string_view name) noexcept;

struct MatrixMeta {
  std::optional<KernelParams> params;
  std::optional<SamplerConfig> config;
  std::optional<MatrixMode> mode;
  bool normalized = false;
  double wall_seconds = 0;
};

/// Square matrix of kernel values, row-major, with the ids (and labels) of
/// the sequences in row order.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(std::vector<std::string> ids, std::vector<std::optional<std::string>> labels);

  [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * size() + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * size() + j]; }

  [[nodiscard]] const std::vector<std::string>& ids() const noexcept { return ids_; }
  [[nodiscard]] const std::vector<std::optional<std::string>>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] bool all_labeled() const noexcept;

  MatrixMeta meta;

 private:
  std::vector<std::string> ids_;
  std::vector<std::optional<std::string>> labels_;
  std::vector<double> values_;
};

struct BuildOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Kernel of every pair under `mode`. Only the upper triangle is computed;
/// the lower triangle is its mirror. The result does not depend on the
/// number of threads. Errors carry the ids of the failing pair.
[[nodiscard]] KernelMatrix build_matrix(const Dataset& dataset, const KernelParams& params, MatrixMode mode,
                                        const SamplerConfig& config = {}, BuildOptions options = {});

/// Cosine normalization; the diagonal becomes exactly 1. Throws DataError
/// naming every sequence whose self-kernel is not positive.
[[nodiscard]] KernelMatrix normalize(const KernelMatrix& matrix);

struct ErrorReport {
  double mae = 0;
  double rmse = 0;
  double max_abs = 0;
  /// ||a - b||_F / ||a||_F; 0 when both are zero.
  double relative_frobenius = 0;
  std::size_t argmax_row = 0;
  std::size_t argmax_col = 0;
  std::string argmax_row_id;
  std::string argmax_col_id;
};

/// Point-to-point errors over every entry, diagonal included. `reference`
/// is the denominator for the relative Frobenius norm.
[[nodiscard]] ErrorReport error_metrics(const KernelMatrix& reference, const KernelMatrix& other);

/// Human-readable lines followed by "<prefix>mae=..." style key=value lines.
void write_report(std::ostream& out, const ErrorReport& report, std::string_view title, std::string_view prefix);

enum class MatrixFormat { kCsv, kSvmPrecomputed };

[[nodiscard]] std::optional<MatrixFormat> parse_matrix_format(std::string_view name) noexcept;

/// %.17g rendering; parses back to the identical double.
[[nodiscard]] std::string format_value(double value);

/// csv: "id,<id1>,...,<idn>" then "<idi>,<v1>,...,<vn>" per row.
/// svm-precomputed: "<label> 0:<i+1> 1:<v1> ... n:<vn>" per row; needs labels.
void write_matrix(const KernelMatrix& matrix, MatrixFormat format, std::ostream& out);

/// Parses the csv layout written by write_matrix.
[[nodiscard]] KernelMatrix read_csv_matrix(std::istream& in);

}  // namespace kmm

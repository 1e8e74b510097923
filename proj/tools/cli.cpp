#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kmm/kmm.hpp"

namespace kmm::cli {

namespace {

struct DataOptions {
  std::string input;
  std::string format = "fasta";
  std::string alphabet;
  int alphabet_size = 0;
  int k = 0;
  int m = 0;
};

struct SamplingOptions {
  double epsilon = 0;
  double delta = 0;
  double sigma = kDefaultSigma;
  std::size_t max_samples = kDefaultMaxSamples;
  std::uint64_t seed = 0;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
};

void add_data_options(CLI::App& cmd, DataOptions& data) {
  cmd.add_option("--input", data.input, "Sequence file, or - for standard input")->required();
  cmd.add_option("--format", data.format, "Input format")
      ->check(CLI::IsMember({"fasta", "symbols"}))
      ->capture_default_str();
  cmd.add_option("--alphabet", data.alphabet,
                 "FASTA alphabet in code order, e.g. ACGT (default: sorted observed symbols)");
  cmd.add_option("--alphabet-size", data.alphabet_size,
                 "Alphabet size for symbols input (default: '#alphabet' header, else max code + 1)")
      ->check(CLI::Range(2, kMaxAlphabetSize));
  cmd.add_option("--k", data.k, "k-mer length")->required()->check(CLI::PositiveNumber);
  cmd.add_option("--m", data.m, "Mismatch radius")->required()->check(CLI::NonNegativeNumber);
}

void add_sampling_options(CLI::App& cmd, SamplingOptions& sampling) {
  sampling.epsilon_opt = cmd.add_option("--epsilon", sampling.epsilon, "Accuracy parameter in (0,1); needs --delta")
                             ->check(CLI::Range(0.0, 1.0));
  sampling.delta_opt = cmd.add_option("--delta", sampling.delta, "Confidence parameter in (0,1); needs --epsilon")
                           ->check(CLI::Range(0.0, 1.0));
  auto* sigma = cmd.add_option("--sigma", sampling.sigma, "Stopping threshold on the standard error of the mean")
                    ->capture_default_str()
                    ->check(CLI::NonNegativeNumber);
  sampling.epsilon_opt->needs(sampling.delta_opt)->excludes(sigma);
  sampling.delta_opt->needs(sampling.epsilon_opt)->excludes(sigma);
  cmd.add_option("--max-samples", sampling.max_samples, "Sample budget B per distance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", sampling.seed, "Master random seed")->capture_default_str();
}

Dataset load(const DataOptions& data) {
  LoadOptions options;
  options.format = data.format == "symbols" ? InputFormat::kSymbols : InputFormat::kFasta;
  if (!data.alphabet.empty()) {
    if (options.format != InputFormat::kFasta) {
      throw InvalidArgument("--alphabet applies to FASTA input only; use --alphabet-size for symbols");
    }
    options.alphabet_symbols = data.alphabet;
  }
  if (data.alphabet_size != 0) {
    if (options.format != InputFormat::kSymbols) {
      throw InvalidArgument("--alphabet-size applies to symbols input only; use --alphabet for FASTA");
    }
    options.alphabet_size = data.alphabet_size;
  }
  auto dataset = load_dataset(data.input, options);
  if (dataset.empty()) {
    throw DataError(fmt::format("no sequences in '{}'", data.input));
  }
  return dataset;
}

SamplerConfig sampler_config(const SamplingOptions& sampling) {
  if (*sampling.epsilon_opt) {
    if (sampling.epsilon <= 0 || sampling.epsilon >= 1 || sampling.delta <= 0 || sampling.delta >= 1) {
      throw InvalidArgument("--epsilon and --delta must lie strictly between 0 and 1");
    }
    return SamplerConfig::from_accuracy(sampling.epsilon, sampling.delta, sampling.max_samples, sampling.seed);
  }
  return SamplerConfig::from_sigma(sampling.sigma, sampling.max_samples, sampling.seed);
}

std::string describe(const KernelParams& params) {
  return fmt::format("k={}\nm={}\ns={}\nt={}\n", params.k(), params.m(), params.s(), params.t());
}

int cmd_table(int k, int m, int s, std::ostream& out) {
  const IntersectionTable table(KernelParams(k, m, s));
  for (std::size_t d = 0; d < table.size(); ++d) {
    out << d << ' ' << table.values()[d] << '\n';
  }
  return kExitOk;
}

int cmd_kernel(const DataOptions& data, const SamplingOptions& sampling, const std::string& mode_name,
               const std::string& x_id, const std::string& y_id, std::ostream& out) {
  const auto dataset = load(data);
  const KernelParams params(data.k, data.m, dataset.alphabet.size());
  const IntersectionTable table(params);
  const auto xi = dataset.index_of(x_id);
  const auto yi = dataset.index_of(y_id);
  const auto& x = dataset.sequences[xi];
  const auto& y = dataset.sequences[yi];
  const auto mode = parse_matrix_mode(mode_name).value();

  if (mode == MatrixMode::kApproximate) {
    const auto config = sampler_config(sampling);
    const auto result = approximate_kernel(x, y, table, config);
    out << format_value(static_cast<double>(result.value)) << '\n';
    out << "mode=approx\n" << describe(params);
    out << fmt::format("i_max={}\n", table.i_max().str());
    out << fmt::format("sigma={}\nmax_samples={}\nseed={}\nevaluations={}\n", format_value(config.sigma),
                       config.max_samples, config.seed, result.diagnostics.evaluations);
    for (const auto& d : result.diagnostics.per_distance) {
      out << fmt::format("d={} mode={} samples={} var_mean={} var_scaled={} F={} M={}\n", d.distance,
                         to_string(d.mode), d.samples, format_value(static_cast<double>(d.variance_of_mean)),
                         format_value(static_cast<double>(d.scaled_variance)),
                         format_value(static_cast<double>(d.f_estimate)),
                         format_value(static_cast<double>(d.m_estimate)));
    }
    return kExitOk;
  }

  Count value;
  switch (mode) {
    case MatrixMode::kOracleSpectrum:
      value = oracle::oracle_kernel_spectrum(x, y, params);
      break;
    case MatrixMode::kExactF:
      value = exact_kernel(x, y, params, table, ExactStrategy::kFullFEnumeration);
      break;
    default:
      value = exact_kernel(x, y, params, table, ExactStrategy::kPairwiseBruteforce);
      break;
  }
  out << value.str() << '\n';
  out << fmt::format("mode={}\n", to_string(mode)) << describe(params);
  out << fmt::format("i_max={}\n", table.i_max().str());
  return kExitOk;
}

KernelMatrix build(const Dataset& dataset, const DataOptions& data, MatrixMode mode, const SamplingOptions& sampling,
                   unsigned threads) {
  const KernelParams params(data.k, data.m, dataset.alphabet.size());
  const auto config = mode == MatrixMode::kApproximate ? sampler_config(sampling) : SamplerConfig{};
  return build_matrix(dataset, params, mode, config, BuildOptions{threads});
}

int cmd_matrix(const DataOptions& data, const SamplingOptions& sampling, const std::string& mode_name,
               bool normalized, const std::string& out_path, const std::string& out_format, unsigned threads,
               std::ostream& out, std::ostream& err) {
  const auto dataset = load(data);
  const auto mode = parse_matrix_mode(mode_name).value();
  const auto format = parse_matrix_format(out_format).value();
  if (format == MatrixFormat::kSvmPrecomputed && !dataset.all_labeled()) {
    throw DataError("svm-precomputed output needs a label on every sequence");
  }
  auto matrix = build(dataset, data, mode, sampling, threads);
  if (normalized) {
    matrix = normalize(matrix);
  }
  if (out_path.empty() || out_path == "-") {
    write_matrix(matrix, format, out);
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    throw DataError(fmt::format("cannot open output file '{}'", out_path));
  }
  write_matrix(matrix, format, file);
  file.close();
  if (!file) {
    throw DataError(fmt::format("failed writing '{}'", out_path));
  }
  err << fmt::format("wrote {0}x{0} {1} matrix to {2} in {3:.3f}s\n", matrix.size(), to_string(mode), out_path,
                     matrix.meta.wall_seconds);
  return kExitOk;
}

int cmd_compare(const DataOptions& data, const SamplingOptions& sampling, const std::string& reference_name,
                unsigned threads, std::ostream& out) {
  const auto dataset = load(data);
  const auto reference_mode = parse_matrix_mode(reference_name).value();
  const auto exact = build(dataset, data, reference_mode, sampling, threads);
  const auto approx = build(dataset, data, MatrixMode::kApproximate, sampling, threads);

  out << fmt::format("{0}x{0} matrices, reference={1} ({2:.3f}s), approx ({3:.3f}s)\n", exact.size(),
                     to_string(reference_mode), exact.meta.wall_seconds, approx.meta.wall_seconds);
  out << fmt::format("reference_seconds={}\napprox_seconds={}\n", format_value(exact.meta.wall_seconds),
                     format_value(approx.meta.wall_seconds));
  write_report(out, error_metrics(exact, approx), "unnormalized:", "raw.");
  write_report(out, error_metrics(normalize(exact), normalize(approx)), "normalized:", "normalized.");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and sampled (k,m)-mismatch string kernels", "kmm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kmm 0.1.0");

  int table_k = 0;
  int table_m = 0;
  int table_s = 0;
  auto* table = app.add_subcommand("table", "Print the neighborhood intersection sizes I_d");
  table->add_option("--k", table_k, "k-mer length")->required()->check(CLI::PositiveNumber);
  table->add_option("--m", table_m, "Mismatch radius")->required()->check(CLI::NonNegativeNumber);
  table->add_option("--s", table_s, "Alphabet size")->required()->check(CLI::Range(2, kMaxAlphabetSize));

  const std::vector<std::string> modes{"exact", "exact-bruteforce", "exact-f", "approx", "oracle"};

  DataOptions kernel_data;
  SamplingOptions kernel_sampling;
  std::string kernel_mode = "exact";
  std::string x_id;
  std::string y_id;
  auto* kernel = app.add_subcommand("kernel", "Compute one kernel value");
  add_data_options(*kernel, kernel_data);
  kernel->add_option("--mode", kernel_mode, "exact (pairwise), exact-f, approx, or oracle (explicit spectra)")
      ->check(CLI::IsMember(modes))
      ->capture_default_str();
  add_sampling_options(*kernel, kernel_sampling);
  kernel->add_option("--x", x_id, "Id of the first sequence")->required();
  kernel->add_option("--y", y_id, "Id of the second sequence")->required();

  DataOptions matrix_data;
  SamplingOptions matrix_sampling;
  std::string matrix_mode = "approx";
  bool matrix_normalize = false;
  std::string out_path;
  std::string out_format = "csv";
  unsigned matrix_threads = 0;
  auto* matrix = app.add_subcommand("matrix", "Compute and write a full kernel matrix");
  add_data_options(*matrix, matrix_data);
  matrix->add_option("--mode", matrix_mode, "exact (pairwise), exact-f, approx, or oracle (explicit spectra)")
      ->check(CLI::IsMember(modes))
      ->capture_default_str();
  add_sampling_options(*matrix, matrix_sampling);
  matrix->add_flag("--normalize", matrix_normalize, "Cosine-normalize to a unit diagonal");
  matrix->add_option("--out", out_path, "Output path (default: standard output)");
  matrix->add_option("--out-format", out_format, "Output layout")
      ->check(CLI::IsMember({"csv", "svm-precomputed"}))
      ->capture_default_str();
  matrix->add_option("--threads", matrix_threads, "Worker threads (0 = all hardware threads)")
      ->capture_default_str();

  DataOptions compare_data;
  SamplingOptions compare_sampling;
  std::string compare_reference = "exact";
  unsigned compare_threads = 0;
  auto* compare = app.add_subcommand("compare", "Report MAE/RMSE/max-abs of approx against an exact matrix");
  add_data_options(*compare, compare_data);
  add_sampling_options(*compare, compare_sampling);
  compare->add_option("--reference", compare_reference, "Exact mode for the reference matrix")
      ->check(CLI::IsMember({"exact", "exact-bruteforce", "exact-f", "oracle"}))
      ->capture_default_str();
  compare->add_option("--threads", compare_threads, "Worker threads (0 = all hardware threads)")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*table) {
      return cmd_table(table_k, table_m, table_s, out);
    }
    if (*kernel) {
      return cmd_kernel(kernel_data, kernel_sampling, kernel_mode, x_id, y_id, out);
    }
    if (*matrix) {
      return cmd_matrix(matrix_data, matrix_sampling, matrix_mode, matrix_normalize, out_path, out_format,
                        matrix_threads, out, err);
    }
    if (*compare) {
      return cmd_compare(compare_data, compare_sampling, compare_reference, compare_threads, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OracleScaleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace kmm::cli

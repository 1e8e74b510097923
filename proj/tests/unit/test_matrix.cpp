#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "kmm/error.hpp"
#include "kmm/matrix.hpp"
#include "random_data.hpp"

namespace kmm {
namespace {

KernelMatrix from_values(std::size_t n, const std::vector<double>& values, bool labeled = true) {
  std::vector<std::string> ids;
  std::vector<std::optional<std::string>> labels;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("s" + std::to_string(i));
    labels.push_back(labeled ? std::optional<std::string>("L" + std::to_string(i % 2)) : std::nullopt);
  }
  KernelMatrix m(ids, labels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = values[i * n + j];
    }
  }
  return m;
}

TEST(BuildMatrix, SingleSequence) {
  auto ds = testing::random_dataset(1, 1, 20, 4);
  const KernelParams p(4, 1, 4);
  const auto m = build_matrix(ds, p, MatrixMode::kExactBruteforce);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m(0, 0), exact_kernel(ds.sequences[0], ds.sequences[0], p, IntersectionTable(p),
                                  ExactStrategy::kPairwiseBruteforce)
                         .convert_to<double>());
}

TEST(BuildMatrix, EmptyDataset) {
  const Dataset ds;
  EXPECT_EQ(build_matrix(ds, KernelParams(3, 1, 4), MatrixMode::kExactF).size(), 0u);
}

TEST(BuildMatrix, ApproximateEntriesIgnoreOrder) {
  auto ds = testing::random_dataset(8, 3, 60, 4);
  const KernelParams p(8, 3, 4);
  const auto config = SamplerConfig::from_sigma(0.5, 5, 3);
  const auto a = build_matrix(ds, p, MatrixMode::kApproximate, config);
  std::swap(ds.sequences[0], ds.sequences[2]);
  const auto b = build_matrix(ds, p, MatrixMode::kApproximate, config);
  EXPECT_EQ(a(0, 1), b(2, 1));
  EXPECT_EQ(a(0, 0), b(2, 2));
  EXPECT_EQ(a(1, 2), b(1, 0));
}

TEST(BuildMatrix, IdenticalSequencesGiveConstantMatrix) {
  auto ds = testing::random_dataset(2, 1, 25, 3);
  for (int i = 1; i < 3; ++i) {
    auto copy = ds.sequences[0];
    copy.id = "copy" + std::to_string(i);
    ds.sequences.push_back(copy);
  }
  const KernelParams p(5, 2, 3);
  for (auto mode : {MatrixMode::kExactBruteforce, MatrixMode::kExactF, MatrixMode::kApproximate,
                    MatrixMode::kOracleSpectrum}) {
    const auto m = build_matrix(ds, p, mode, SamplerConfig::from_sigma(0.5, 4, 9));
    for (double v : m.values()) {
      EXPECT_EQ(v, m(0, 0)) << to_string(mode);
    }
  }
}

TEST(BuildMatrix, ExactModesAgreeEntryForEntry) {
  const auto ds = testing::random_dataset(3, 6, 18, 3);
  const KernelParams p(4, 2, 3);
  const auto a = build_matrix(ds, p, MatrixMode::kExactBruteforce);
  const auto b = build_matrix(ds, p, MatrixMode::kExactF);
  const auto c = build_matrix(ds, p, MatrixMode::kOracleSpectrum);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.values(), c.values());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GT(a(i, i), 0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_EQ(a(i, j), a(j, i));
    }
  }
}

TEST(BuildMatrix, ApproximateCloseToExact) {
  const auto ds = testing::random_dataset(4, 10, 50, 4);
  const KernelParams p(6, 2, 4);
  const auto exact = build_matrix(ds, p, MatrixMode::kExactBruteforce);
  const auto approx = build_matrix(ds, p, MatrixMode::kApproximate, SamplerConfig::from_sigma(0.5, 300, 3));
  const auto report = error_metrics(normalize(exact), normalize(approx));
  EXPECT_LT(report.rmse, 1e-2);
}

TEST(BuildMatrix, ThreadCountDoesNotChangeResult) {
  const auto ds = testing::random_dataset(5, 9, 60, 4);
  const KernelParams p(12, 3, 4);
  const auto config = SamplerConfig::from_sigma(0.5, 15, 123);
  const auto one = build_matrix(ds, p, MatrixMode::kApproximate, config, {1});
  const auto many = build_matrix(ds, p, MatrixMode::kApproximate, config, {4});
  EXPECT_EQ(one.values(), many.values());
  const auto other_seed = build_matrix(ds, p, MatrixMode::kApproximate, SamplerConfig::from_sigma(0.5, 15, 124), {2});
  EXPECT_NE(one.values(), other_seed.values());
}

TEST(BuildMatrix, OracleGuardNamesPair) {
  const auto ds = testing::random_dataset(6, 2, 30, 4);
  EXPECT_THROW((void)build_matrix(ds, KernelParams(12, 1, 4), MatrixMode::kOracleSpectrum), OracleScaleError);
}

TEST(BuildMatrix, AlphabetMismatchRejected) {
  const auto ds = testing::random_dataset(6, 2, 30, 4);
  EXPECT_THROW((void)build_matrix(ds, KernelParams(3, 1, 5), MatrixMode::kExactBruteforce), InvalidArgument);
}

TEST(Normalize, UnitDiagonalAndRankOne) {
  const auto m = normalize(from_values(2, {4, 2, 2, 1}));
  EXPECT_EQ(m.values(), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_TRUE(m.meta.normalized);
}

TEST(Normalize, Idempotent) {
  const auto ds = testing::random_dataset(7, 7, 40, 4);
  const auto m = build_matrix(ds, KernelParams(5, 1, 4), MatrixMode::kExactBruteforce);
  const auto once = normalize(m);
  const auto twice = normalize(once);
  for (std::size_t i = 0; i < once.values().size(); ++i) {
    EXPECT_NEAR(once.values()[i], twice.values()[i], 1e-12);
  }
  for (std::size_t i = 0; i < once.size(); ++i) {
    EXPECT_EQ(once(i, i), 1.0);
  }
}

TEST(Normalize, ZeroDiagonalListsIds) {
  try {
    (void)normalize(from_values(3, {1, 0, 0, 0, 0, 0, 0, 0, 2}));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("s1"), std::string::npos);
  }
}

TEST(ErrorMetrics, Basics) {
  const auto a = from_values(2, {1, 2, 3, 4});
  const auto zero = error_metrics(a, a);
  EXPECT_EQ(zero.mae, 0);
  EXPECT_EQ(zero.rmse, 0);
  EXPECT_EQ(zero.max_abs, 0);

  const auto b = from_values(2, {1.5, 2.5, 3.5, 4.5});
  const auto r = error_metrics(a, b);
  EXPECT_DOUBLE_EQ(r.mae, 0.5);
  EXPECT_DOUBLE_EQ(r.rmse, 0.5);
  EXPECT_DOUBLE_EQ(r.max_abs, 0.5);

  const auto c = from_values(2, {1, 2, 3, 7});
  const auto rc = error_metrics(a, c);
  EXPECT_EQ(rc.argmax_row_id, "s1");
  EXPECT_EQ(rc.argmax_col_id, "s1");
  EXPECT_DOUBLE_EQ(rc.max_abs, 3);
  EXPECT_LE(rc.mae, rc.rmse);
}

TEST(ErrorMetrics, ShapeMismatch) {
  EXPECT_THROW((void)error_metrics(from_values(1, {1}), from_values(2, {1, 2, 3, 4})), DataError);
}

TEST(WriteMatrix, SvmSingleEntry) {
  KernelMatrix m({"s"}, {std::string("A")});
  m(0, 0) = 1;
  std::ostringstream out;
  write_matrix(m, MatrixFormat::kSvmPrecomputed, out);
  EXPECT_EQ(out.str(), "A 0:1 1:1\n");
}

TEST(WriteMatrix, SvmNeedsLabels) {
  std::ostringstream out;
  EXPECT_THROW(write_matrix(from_values(2, {1, 0, 0, 1}, false), MatrixFormat::kSvmPrecomputed, out), DataError);
}

TEST(WriteMatrix, CsvLayout) {
  std::ostringstream out;
  write_matrix(from_values(2, {1, 0.1, 0.1, 2.5}), MatrixFormat::kCsv, out);
  EXPECT_EQ(out.str(), "id,s0,s1\ns0,1,0.10000000000000001\ns1,0.10000000000000001,2.5\n");
}

TEST(WriteMatrix, CsvRoundTripIsBitExact) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> values(64);
  for (auto& v : values) {
    v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
  }
  values[3] = 0.0;
  values[5] = 1.0 / 3.0;
  const auto m = from_values(8, values);
  std::stringstream io;
  write_matrix(m, MatrixFormat::kCsv, io);
  const auto back = read_csv_matrix(io);
  EXPECT_EQ(back.ids(), m.ids());
  EXPECT_EQ(back.values(), m.values());
}

TEST(ReadCsvMatrix, RejectsMalformed) {
  std::istringstream a("id,x\nx,1,2\n");
  EXPECT_THROW((void)read_csv_matrix(a), DataError);
  std::istringstream b("id,x\ny,1\n");
  EXPECT_THROW((void)read_csv_matrix(b), DataError);
  std::istringstream c("id,x\nx,abc\n");
  EXPECT_THROW((void)read_csv_matrix(c), DataError);
}

TEST(ModeNames, Parse) {
  EXPECT_EQ(parse_matrix_mode("exact"), MatrixMode::kExactBruteforce);
  EXPECT_EQ(parse_matrix_mode("exact-f"), MatrixMode::kExactF);
  EXPECT_EQ(parse_matrix_mode("approx"), MatrixMode::kApproximate);
  EXPECT_EQ(parse_matrix_mode("oracle"), MatrixMode::kOracleSpectrum);
  EXPECT_EQ(parse_matrix_mode("fast"), std::nullopt);
  EXPECT_EQ(parse_matrix_format("svm-precomputed"), MatrixFormat::kSvmPrecomputed);
}

}  // namespace
}  // namespace kmm

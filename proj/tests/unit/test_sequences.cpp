#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "kmm/error.hpp"
#include "kmm/sequences.hpp"
#include "random_data.hpp"

namespace kmm {
namespace {

Dataset fasta(const std::string& text, std::optional<Alphabet> alphabet = std::nullopt) {
  std::istringstream in(text);
  return parse_fasta(in, alphabet);
}

Dataset symbols(const std::string& text, std::optional<int> size = std::nullopt) {
  std::istringstream in(text);
  return parse_symbol_lines(in, size);
}

TEST(Alphabet, Construction) {
  const auto a = Alphabet::from_symbols("ACGT");
  EXPECT_EQ(a.size(), 4);
  EXPECT_EQ(a.code_of('G'), 2);
  EXPECT_EQ(a.code_of('N'), std::nullopt);
  EXPECT_EQ(a.symbol(3), 'T');
  EXPECT_THROW(Alphabet::from_symbols("AA"), InvalidArgument);
  EXPECT_THROW(Alphabet::from_symbols("A"), InvalidArgument);
  EXPECT_THROW(Alphabet::numeric(1), InvalidArgument);
  EXPECT_TRUE(Alphabet::numeric(3).is_numeric());
}

TEST(ParseFasta, SingleRecordWithLabel) {
  const auto ds = fasta(">s1 A\nACGT\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.sequences[0].id, "s1");
  EXPECT_EQ(ds.sequences[0].label, "A");
  EXPECT_EQ(ds.alphabet.symbols(), "ACGT");
  EXPECT_EQ(ds.sequences[0].codes, (std::vector<Symbol>{0, 1, 2, 3}));
}

TEST(ParseFasta, MultiLineRecordsConcatenate) {
  const auto ds = fasta(">s1\nAC\nGT\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.sequences[0].codes.size(), 4u);
  EXPECT_FALSE(ds.sequences[0].label.has_value());
}

TEST(ParseFasta, DuplicateIdIsError) { EXPECT_THROW(fasta(">s1\nACGT\n>s1\nAAAA\n"), DataError); }

TEST(ParseFasta, EmptyStreamIsEmptyDataset) { EXPECT_TRUE(fasta("").empty()); }

TEST(ParseFasta, UppercasesResidues) {
  const auto ds = fasta(">a\nacgt\n>b\nACGT\n");
  EXPECT_EQ(ds.sequences[0].codes, ds.sequences[1].codes);
}

TEST(ParseFasta, CharacterOutsideAlphabetNamesRecord) {
  try {
    (void)fasta(">good\nACGT\n>bad\nACNT\n", Alphabet::from_symbols("ACGT"));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad"), std::string::npos);
    EXPECT_NE(msg.find("'N'"), std::string::npos);
  }
}

TEST(ParseFasta, ExplicitAlphabetFixesCodes) {
  // Only A and T observed, but codes follow the declared alphabet.
  const auto ds = fasta(">a\nATTA\n", Alphabet::from_symbols("ACGT"));
  EXPECT_EQ(ds.alphabet.size(), 4);
  EXPECT_EQ(ds.sequences[0].codes, (std::vector<Symbol>{0, 3, 3, 0}));
}

TEST(ParseFasta, DataBeforeHeaderIsError) { EXPECT_THROW(fasta("ACGT\n>a\nAC\n"), DataError); }

TEST(ParseSymbolLines, HeaderDeclaresAlphabet) {
  const auto ds = symbols("#alphabet 3\nx y 0 1 2 1\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.alphabet.size(), 3);
  EXPECT_EQ(ds.sequences[0].id, "x");
  EXPECT_EQ(ds.sequences[0].label, "y");
  EXPECT_EQ(ds.sequences[0].codes, (std::vector<Symbol>{0, 1, 2, 1}));
}

TEST(ParseSymbolLines, CodeOutsideAlphabetIsError) { EXPECT_THROW(symbols("#alphabet 2\nx y 0 2\n"), DataError); }

TEST(ParseSymbolLines, PreservesOrder) {
  const auto ds = symbols("b l 1 0\na l 0 0 1\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.sequences[0].id, "b");
  EXPECT_EQ(ds.sequences[1].id, "a");
  EXPECT_EQ(ds.alphabet.size(), 2);
}

TEST(ParseSymbolLines, MalformedLineReportsLineNumber) {
  try {
    (void)symbols("#alphabet 4\na l 0 1\nb l 0 x\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(symbols("lonely\n"), DataError);
}

TEST(ParseSymbolLines, ExplicitSizeMustAgreeWithHeader) {
  EXPECT_EQ(symbols("a l 0 1\n", 5).alphabet.size(), 5);
  EXPECT_THROW(symbols("#alphabet 3\na l 0 1\n", 5), DataError);
}

TEST(ExtractKmers, Examples) {
  const auto a = extract_kmers(testing::from_codes({0, 1, 0}), 2);
  ASSERT_EQ(a.count(), 2u);
  EXPECT_EQ(std::vector<Symbol>(a.row(0).begin(), a.row(0).end()), (std::vector<Symbol>{0, 1}));
  EXPECT_EQ(std::vector<Symbol>(a.row(1).begin(), a.row(1).end()), (std::vector<Symbol>{1, 0}));

  EXPECT_EQ(extract_kmers(testing::from_codes({0, 1}), 4).count(), 0u);

  const auto c = extract_kmers(testing::from_codes({0, 0, 0}), 2);
  ASSERT_EQ(c.count(), 2u);
  EXPECT_EQ(std::vector<Symbol>(c.row(1).begin(), c.row(1).end()), (std::vector<Symbol>{0, 0}));
}

TEST(ExtractKmers, CountProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto len = static_cast<std::size_t>(rng() % 40);
    const int k = 1 + static_cast<int>(rng() % 12);
    const auto seq = testing::random_sequence(rng, len, 4);
    const auto kmers = extract_kmers(seq, k);
    const auto expected = len >= static_cast<std::size_t>(k) ? len - static_cast<std::size_t>(k) + 1 : 0;
    ASSERT_EQ(kmers.count(), expected);
    for (std::size_t p = 0; p < kmers.count(); ++p) {
      ASSERT_TRUE(std::equal(kmers.row(p).begin(), kmers.row(p).end(), seq.codes.begin() + static_cast<long>(p)));
    }
  }
  EXPECT_THROW((void)extract_kmers(testing::from_codes({0}), 0), InvalidArgument);
}

TEST(RoundTrip, FastaAndSymbolLines) {
  std::mt19937_64 rng(3);
  Dataset ds;
  ds.alphabet = Alphabet::from_symbols("ACDEFGHIKLMNPQRSTVWY");
  for (int i = 0; i < 12; ++i) {
    auto seq = testing::random_sequence(rng, 1 + rng() % 150, 20, "p" + std::to_string(i));
    if (i % 3 != 0) {
      seq.label = "c" + std::to_string(i % 4);
    }
    ds.sequences.push_back(std::move(seq));
  }
  std::stringstream fa;
  write_fasta(fa, ds);
  const auto back = parse_fasta(fa, ds.alphabet);
  EXPECT_EQ(back.sequences, ds.sequences);

  auto numeric = testing::random_dataset(5, 9, 30, 7);
  std::stringstream sl;
  write_symbol_lines(sl, numeric);
  const auto back2 = parse_symbol_lines(sl);
  EXPECT_EQ(back2.alphabet, numeric.alphabet);
  EXPECT_EQ(back2.sequences, numeric.sequences);
}

TEST(LoadDataset, MissingFileIsDataError) {
  EXPECT_THROW((void)load_dataset("/nonexistent/path.fa", {}), DataError);
}

}  // namespace
}  // namespace kmm

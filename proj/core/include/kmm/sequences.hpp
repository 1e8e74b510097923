#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kmm {

/// Integer code of one alphabet symbol, in [0, s).
using Symbol = std::uint16_t;

inline constexpr int kMaxAlphabetSize = 1 << 16;

/// Ordered set of symbols. Character alphabets come from FASTA data; numeric
/// alphabets are just a size, symbol i being the integer i.
class Alphabet {
 public:
  /// Empty placeholder, only used by datasets with no records.
  Alphabet() = default;

  /// Distinct characters in code order. Throws InvalidArgument on duplicates
  /// or fewer than two symbols.
  static Alphabet from_symbols(std::string_view symbols);
  static Alphabet numeric(int size);

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] bool is_numeric() const noexcept { return symbols_.empty(); }
  [[nodiscard]] const std::string& symbols() const noexcept { return symbols_; }
  [[nodiscard]] std::optional<Symbol> code_of(char c) const noexcept;
  /// Character for a code of a character alphabet.
  [[nodiscard]] char symbol(Symbol code) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string symbols_;
  int size_ = 0;
};

struct Sequence {
  std::string id;
  std::optional<std::string> label;
  std::vector<Symbol> codes;

  [[nodiscard]] std::size_t length() const noexcept { return codes.size(); }
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

struct Dataset {
  Alphabet alphabet;
  std::vector<Sequence> sequences;

  [[nodiscard]] std::size_t size() const noexcept { return sequences.size(); }
  [[nodiscard]] bool empty() const noexcept { return sequences.empty(); }
  /// Index of the record with this id; throws DataError if absent.
  [[nodiscard]] std::size_t index_of(std::string_view id) const;
  [[nodiscard]] bool all_labeled() const noexcept;
};

/// Every length-k window of a sequence, in position order, duplicates kept.
/// Rows are stored contiguously.
class KmerList {
 public:
  KmerList() = default;
  KmerList(int k, std::vector<Symbol> flat_rows);

  [[nodiscard]] int k() const noexcept { return k_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] std::span<const Symbol> row(std::size_t p) const noexcept {
    return {data_.data() + p * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
  }
  [[nodiscard]] std::span<const Symbol> data() const noexcept { return data_; }

 private:
  int k_ = 0;
  std::size_t count_ = 0;
  std::vector<Symbol> data_;
};

/// rows[p] = codes[p..p+k). Sequences shorter than k give an empty list.
[[nodiscard]] KmerList extract_kmers(const Sequence& seq, int k);

/// Hamming distance of two equal-length rows.
[[nodiscard]] inline int hamming(std::span<const Symbol> a, std::span<const Symbol> b) noexcept {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] != b[i] ? 1 : 0;
  }
  return d;
}

enum class InputFormat { kFasta, kSymbols };

/// FASTA records; id is the first header token, label the second. Residues
/// are uppercased. Without an explicit alphabet, the sorted set of observed
/// characters is used.
[[nodiscard]] Dataset parse_fasta(std::istream& in, const std::optional<Alphabet>& alphabet = std::nullopt);

/// Lines "<id> <label> <c1> ... <cn>" of integer codes. The alphabet size is
/// taken from `alphabet_size`, else a "#alphabet <s>" header, else max code + 1.
[[nodiscard]] Dataset parse_symbol_lines(std::istream& in, std::optional<int> alphabet_size = std::nullopt);

void write_fasta(std::ostream& out, const Dataset& dataset);
void write_symbol_lines(std::ostream& out, const Dataset& dataset);

struct LoadOptions {
  InputFormat format = InputFormat::kFasta;
  std::optional<std::string> alphabet_symbols;  // FASTA only
  std::optional<int> alphabet_size;             // symbols only
};

/// Reads a dataset from a file, or from standard input when path is "-".
[[nodiscard]] Dataset load_dataset(const std::string& path, const LoadOptions& options);

}  // namespace kmm

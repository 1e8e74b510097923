#include "kmm/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "kmm/error.hpp"

namespace kmm {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
      ++j;
    }
    if (j > i) {
      out.push_back(s.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

std::optional<long long> parse_int(std::string_view token) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return value;
}

void check_unique_ids(const std::vector<Sequence>& sequences) {
  std::unordered_set<std::string_view> seen;
  for (const auto& seq : sequences) {
    if (!seen.insert(seq.id).second) {
      throw DataError(fmt::format("duplicate sequence id '{}'", seq.id));
    }
  }
}

struct RawRecord {
  std::string id;
  std::optional<std::string> label;
  std::string residues;
};

}  // namespace

Alphabet Alphabet::from_symbols(std::string_view symbols) {
  if (symbols.size() < 2) {
    throw InvalidArgument(fmt::format("alphabet '{}' needs at least two symbols", symbols));
  }
  if (symbols.size() > static_cast<std::size_t>(kMaxAlphabetSize)) {
    throw InvalidArgument("alphabet too large");
  }
  std::string sorted(symbols);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument(fmt::format("alphabet '{}' has repeated symbols", symbols));
  }
  Alphabet a;
  a.symbols_ = std::string(symbols);
  a.size_ = static_cast<int>(symbols.size());
  return a;
}

Alphabet Alphabet::numeric(int size) {
  if (size < 2 || size > kMaxAlphabetSize) {
    throw InvalidArgument(fmt::format("alphabet size must be in [2, {}] (got {})", kMaxAlphabetSize, size));
  }
  Alphabet a;
  a.size_ = size;
  return a;
}

std::optional<Symbol> Alphabet::code_of(char c) const noexcept {
  const auto pos = symbols_.find(c);
  if (pos == std::string::npos) {
    return std::nullopt;
  }
  return static_cast<Symbol>(pos);
}

char Alphabet::symbol(Symbol code) const {
  if (is_numeric() || code >= symbols_.size()) {
    throw InvalidArgument(fmt::format("code {} has no character in this alphabet", code));
  }
  return symbols_[code];
}

std::size_t Dataset::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (sequences[i].id == id) {
      return i;
    }
  }
  throw DataError(fmt::format("no sequence with id '{}'", id));
}

bool Dataset::all_labeled() const noexcept {
  return std::all_of(sequences.begin(), sequences.end(), [](const Sequence& s) { return s.label.has_value(); });
}

KmerList::KmerList(int k, std::vector<Symbol> flat_rows) : k_(k), data_(std::move(flat_rows)) {
  if (k < 1) {
    throw InvalidArgument("k-mer length must be positive");
  }
  if (data_.size() % static_cast<std::size_t>(k) != 0) {
    throw InvalidArgument("flat k-mer data is not a multiple of k");
  }
  count_ = data_.size() / static_cast<std::size_t>(k);
}

KmerList extract_kmers(const Sequence& seq, int k) {
  if (k < 1) {
    throw InvalidArgument(fmt::format("k must be positive (got {})", k));
  }
  const auto len = seq.codes.size();
  const auto uk = static_cast<std::size_t>(k);
  std::vector<Symbol> flat;
  if (len >= uk) {
    const std::size_t n = len - uk + 1;
    flat.reserve(n * uk);
    for (std::size_t p = 0; p < n; ++p) {
      flat.insert(flat.end(), seq.codes.begin() + static_cast<std::ptrdiff_t>(p),
                  seq.codes.begin() + static_cast<std::ptrdiff_t>(p + uk));
    }
  }
  return KmerList(k, std::move(flat));
}

Dataset parse_fasta(std::istream& in, const std::optional<Alphabet>& alphabet) {
  if (alphabet && alphabet->is_numeric()) {
    throw InvalidArgument("FASTA input needs a character alphabet");
  }
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == ';') {
      continue;
    }
    if (view.front() == '>') {
      const auto tokens = split_ws(view.substr(1));
      if (tokens.empty()) {
        throw DataError(fmt::format("line {}: FASTA header without an id", line_no));
      }
      RawRecord rec;
      rec.id = std::string(tokens[0]);
      if (tokens.size() > 1) {
        rec.label = std::string(tokens[1]);
      }
      records.push_back(std::move(rec));
      continue;
    }
    if (records.empty()) {
      throw DataError(fmt::format("line {}: sequence data before the first FASTA header", line_no));
    }
    for (char c : view) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        records.back().residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      }
    }
  }

  Dataset dataset;
  if (records.empty()) {
    if (alphabet) {
      dataset.alphabet = *alphabet;
    }
    return dataset;
  }

  if (alphabet) {
    dataset.alphabet = *alphabet;
  } else {
    std::string observed;
    for (const auto& rec : records) {
      observed += rec.residues;
    }
    std::sort(observed.begin(), observed.end());
    observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
    if (observed.size() < 2) {
      throw DataError(fmt::format("only {} distinct symbol(s) observed; supply an explicit alphabet",
                                  observed.size()));
    }
    dataset.alphabet = Alphabet::from_symbols(observed);
  }

  dataset.sequences.reserve(records.size());
  for (auto& rec : records) {
    Sequence seq{std::move(rec.id), std::move(rec.label), {}};
    seq.codes.reserve(rec.residues.size());
    for (char c : rec.residues) {
      const auto code = dataset.alphabet.code_of(c);
      if (!code) {
        throw DataError(fmt::format("record '{}': character '{}' is not in the alphabet '{}'", seq.id, c,
                                    dataset.alphabet.symbols()));
      }
      seq.codes.push_back(*code);
    }
    dataset.sequences.push_back(std::move(seq));
  }
  check_unique_ids(dataset.sequences);
  return dataset;
}

Dataset parse_symbol_lines(std::istream& in, std::optional<int> alphabet_size) {
  std::optional<int> declared;
  std::vector<Sequence> sequences;
  std::vector<std::size_t> line_of;
  long long max_code = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) {
      continue;
    }
    if (view.front() == '#') {
      const auto tokens = split_ws(view);
      if (tokens[0] == "#alphabet") {
        if (tokens.size() != 2) {
          throw DataError(fmt::format("line {}: expected '#alphabet <s>'", line_no));
        }
        const auto s = parse_int(tokens[1]);
        if (!s || *s < 2 || *s > kMaxAlphabetSize) {
          throw DataError(fmt::format("line {}: invalid alphabet size '{}'", line_no, tokens[1]));
        }
        declared = static_cast<int>(*s);
      }
      continue;
    }
    const auto tokens = split_ws(view);
    if (tokens.size() < 2) {
      throw DataError(fmt::format("line {}: expected '<id> <label> <codes...>'", line_no));
    }
    Sequence seq{std::string(tokens[0]), std::string(tokens[1]), {}};
    seq.codes.reserve(tokens.size() - 2);
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto code = parse_int(tokens[i]);
      if (!code || *code < 0 || *code >= kMaxAlphabetSize) {
        throw DataError(fmt::format("line {}: invalid symbol code '{}'", line_no, tokens[i]));
      }
      max_code = std::max(max_code, *code);
      seq.codes.push_back(static_cast<Symbol>(*code));
    }
    sequences.push_back(std::move(seq));
    line_of.push_back(line_no);
  }

  if (alphabet_size && declared && *alphabet_size != *declared) {
    throw DataError(
        fmt::format("alphabet size {} conflicts with the file's '#alphabet {}' header", *alphabet_size, *declared));
  }
  const auto size = alphabet_size ? alphabet_size : declared;

  Dataset dataset;
  if (size) {
    dataset.alphabet = Alphabet::numeric(*size);
    for (std::size_t i = 0; i < sequences.size(); ++i) {
      for (Symbol c : sequences[i].codes) {
        if (c >= *size) {
          throw DataError(fmt::format("line {}: code {} outside alphabet of size {} (record '{}')", line_of[i], c,
                                      *size, sequences[i].id));
        }
      }
    }
  } else if (!sequences.empty()) {
    dataset.alphabet = Alphabet::numeric(static_cast<int>(std::max<long long>(max_code + 1, 2)));
  }
  dataset.sequences = std::move(sequences);
  check_unique_ids(dataset.sequences);
  return dataset;
}

void write_fasta(std::ostream& out, const Dataset& dataset) {
  if (dataset.alphabet.is_numeric() && !dataset.empty()) {
    throw DataError("FASTA output needs a character alphabet");
  }
  for (const auto& seq : dataset.sequences) {
    out << '>' << seq.id;
    if (seq.label) {
      out << ' ' << *seq.label;
    }
    out << '\n';
    std::string residues;
    residues.reserve(seq.codes.size());
    for (Symbol c : seq.codes) {
      residues.push_back(dataset.alphabet.symbol(c));
    }
    for (std::size_t i = 0; i < residues.size(); i += 60) {
      out << residues.substr(i, 60) << '\n';
    }
  }
}

void write_symbol_lines(std::ostream& out, const Dataset& dataset) {
  out << "#alphabet " << dataset.alphabet.size() << '\n';
  for (const auto& seq : dataset.sequences) {
    if (!seq.label) {
      throw DataError(fmt::format("record '{}' has no label; symbol-lines format requires one", seq.id));
    }
    out << seq.id << ' ' << *seq.label;
    for (Symbol c : seq.codes) {
      out << ' ' << c;
    }
    out << '\n';
  }
}

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
  std::optional<Alphabet> alphabet;
  if (options.alphabet_symbols) {
    std::string upper(*options.alphabet_symbols);
    for (auto& c : upper) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    alphabet = Alphabet::from_symbols(upper);
  }
  auto parse = [&](std::istream& in) {
    return options.format == InputFormat::kFasta ? parse_fasta(in, alphabet)
                                                 : parse_symbol_lines(in, options.alphabet_size);
  };
  if (path == "-") {
    return parse(std::cin);
  }
  std::ifstream in(path);
  if (!in) {
    throw DataError(fmt::format("cannot open input file '{}'", path));
  }
  return parse(in);
}

}  // namespace kmm

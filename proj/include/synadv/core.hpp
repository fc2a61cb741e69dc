#pragma once
// Vocabulary, token sequences, labeled datasets, adjacency graphs and the
// on-disk formats shared by every other header.
//
// File formats (UTF-8, LF line endings, writers emit exactly what readers
// accept):
//   tsv-tokens  one example per line: "<label>\t<tok> <tok> ...\n"
//   fasta-dna   ">label=<int> id=<string>\n" then sequence lines over ACGT;
//               the writer emits one sequence line per record
//   graph-tsv   "<label>\t<n>\t<upper triangle bits, row-major, i<j>\n"

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synadv/error.hpp"

namespace synadv {

using TokenId = std::uint32_t;

inline constexpr std::string_view kOovToken = "<oov>";

class Vocabulary {
 public:
  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

  // Ids follow the given order; "<oov>" is appended unless already present.
  explicit Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    bool has_oov = false;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
      if (!inserted) throw Error("duplicate vocabulary token '" + tokens_[i] + "'");
      if (tokens_[i] == kOovToken) {
        oov_id_ = static_cast<TokenId>(i);
        has_oov = true;
      }
    }
    if (!has_oov) {
      oov_id_ = static_cast<TokenId>(tokens_.size());
      tokens_.emplace_back(kOovToken);
      index_.emplace(std::string(kOovToken), oov_id_);
    }
  }

  // {A, C, G, T, <oov>} with A=0, C=1, G=2, T=3.
  static const Vocabulary& dna() {
    static const Vocabulary vocab(std::vector<std::string>{"A", "C", "G", "T"});
    return vocab;
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  TokenId oov_id() const noexcept { return oov_id_; }

  std::optional<TokenId> find(std::string_view token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  TokenId lookup(std::string_view token) const { return find(token).value_or(oov_id_); }

  const std::string& token_of(TokenId id) const {
    if (id >= tokens_.size()) throw Error("token id " + std::to_string(id) + " out of range");
    return tokens_[id];
  }

  std::span<const std::string> tokens() const noexcept { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, TokenId, std::less<>> index_;
  TokenId oov_id_ = 0;
};

struct TokenSequence {
  std::vector<TokenId> ids;

  TokenSequence() = default;
  explicit TokenSequence(std::vector<TokenId> v) : ids(std::move(v)) {}
  TokenSequence(std::initializer_list<TokenId> v) : ids(v) {}

  std::size_t size() const noexcept { return ids.size(); }
  bool empty() const noexcept { return ids.empty(); }
  TokenId operator[](std::size_t i) const { return ids[i]; }
  TokenId& operator[](std::size_t i) { return ids[i]; }
  auto begin() const noexcept { return ids.begin(); }
  auto end() const noexcept { return ids.end(); }

  friend auto operator<=>(const TokenSequence&, const TokenSequence&) = default;
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

inline std::size_t hamming_distance(const TokenSequence& a, const TokenSequence& b) {
  if (a.size() != b.size()) throw Error("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

struct Example {
  TokenSequence tokens;
  std::size_t label = 0;
  std::string id;

  friend bool operator==(const Example&, const Example&) = default;
};

enum class DatasetFormat { tsv_tokens, fasta_dna };

struct LabeledDataset {
  Vocabulary vocabulary;
  std::vector<Example> examples;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return examples.size(); }

  void validate() const {
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (examples[i].label >= num_classes)
        throw Error("example " + std::to_string(i) + ": label out of range");
      for (TokenId t : examples[i].tokens)
        if (t >= vocabulary.size())
          throw Error("example " + std::to_string(i) + ": token id outside vocabulary");
    }
  }

  std::size_t total_tokens() const noexcept {
    std::size_t n = 0;
    for (const auto& e : examples) n += e.tokens.size();
    return n;
  }

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

// ---------------------------------------------------------------------------
// Vocabulary construction and encoding.

// Tokens with frequency >= min_count, ordered by descending frequency then
// lexicographically; everything else maps to <oov>.
inline Vocabulary build_vocabulary(std::span<const std::vector<std::string>> corpus,
                                   std::size_t min_count) {
  if (min_count < 1) throw Error("build_vocabulary: min_count must be >= 1");
  std::map<std::string, std::size_t, std::less<>> freq;
  std::size_t total = 0;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) {
      ++freq[tok];
      ++total;
    }
  if (total == 0) throw Error("empty corpus");
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : freq)
    if (n >= min_count && tok != kOovToken) kept.emplace_back(tok, n);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [tok, n] : kept) tokens.push_back(tok);
  return Vocabulary(std::move(tokens));
}

template <class Range>
TokenSequence encode(const Vocabulary& vocab, const Range& tokens) {
  TokenSequence seq;
  for (const auto& tok : tokens) seq.ids.push_back(vocab.lookup(tok));
  return seq;
}

inline std::vector<std::string> decode(const Vocabulary& vocab, const TokenSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (TokenId t : seq) out.push_back(vocab.token_of(t));
  return out;
}

inline TokenSequence encode_dna(std::string_view nucleotides) {
  TokenSequence seq;
  seq.ids.reserve(nucleotides.size());
  for (char c : nucleotides) {
    switch (c) {
      case 'A': seq.ids.push_back(0); break;
      case 'C': seq.ids.push_back(1); break;
      case 'G': seq.ids.push_back(2); break;
      case 'T': seq.ids.push_back(3); break;
      default: throw Error(std::string("invalid nucleotide '") + c + "'");
    }
  }
  return seq;
}

inline std::string decode_dna(const TokenSequence& seq) {
  static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
  std::string out;
  out.reserve(seq.size());
  for (TokenId t : seq) {
    if (t > 3) throw Error("non-nucleotide token in DNA sequence");
    out.push_back(kBases[t]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset I/O.

namespace detail {

inline std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<std::size_t> parse_size(std::string_view s) {
  std::size_t value = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline std::size_t infer_classes(const std::vector<Example>& examples) {
  std::size_t k = 0;
  for (const auto& e : examples) k = std::max(k, e.label + 1);
  return k;
}

}  // namespace detail

// tsv-tokens reader. When `vocab` is null the vocabulary is built from the
// file itself (min_count = 1).
inline LabeledDataset read_tsv_tokens(std::istream& in, const Vocabulary* vocab = nullptr) {
  const auto lines = detail::read_lines(in);
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(i + 1, "expected '<label>\\t<tokens>'");
    auto label = detail::parse_size(std::string_view(line).substr(0, tab));
    if (!label) throw ParseError(i + 1, "label is not a non-negative integer");
    rows.emplace_back(*label, detail::split_spaces(std::string_view(line).substr(tab + 1)));
  }
  LabeledDataset ds;
  if (vocab) {
    ds.vocabulary = *vocab;
  } else {
    std::vector<std::vector<std::string>> corpus;
    for (auto& r : rows) corpus.push_back(r.second);
    std::size_t total = 0;
    for (auto& d : corpus) total += d.size();
    ds.vocabulary = total > 0 ? build_vocabulary(corpus, 1) : Vocabulary();
  }
  for (auto& [label, toks] : rows)
    ds.examples.push_back(Example{encode(ds.vocabulary, toks), label, {}});
  ds.num_classes = detail::infer_classes(ds.examples);
  return ds;
}

inline LabeledDataset read_fasta_dna(std::istream& in) {
  const auto lines = detail::read_lines(in);
  LabeledDataset ds;
  ds.vocabulary = Vocabulary::dna();
  std::optional<Example> current;
  std::size_t header_line = 0;
  std::string bases;
  auto flush = [&] {
    if (!current) return;
    if (bases.size() % 3 != 0) throw ParseError(header_line, "not a codon multiple");
    current->tokens = encode_dna(bases);
    ds.examples.push_back(std::move(*current));
    current.reset();
    bases.clear();
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (!line.empty() && line[0] == '>') {
      flush();
      std::string_view rest = std::string_view(line).substr(1);
      const auto space = rest.find(' ');
      if (!rest.starts_with("label=") || space == std::string_view::npos ||
          !rest.substr(space + 1).starts_with("id="))
        throw ParseError(i + 1, "expected '>label=<int> id=<string>'");
      auto label = detail::parse_size(rest.substr(6, space - 6));
      if (!label) throw ParseError(i + 1, "label is not a non-negative integer");
      current = Example{{}, *label, std::string(rest.substr(space + 4))};
      header_line = i + 1;
      continue;
    }
    if (!current) throw ParseError(i + 1, "sequence data before first header");
    for (char c : line)
      if (c != 'A' && c != 'C' && c != 'G' && c != 'T')
        throw ParseError(i + 1, std::string("invalid nucleotide '") + c + "'");
    bases += line;
  }
  flush();
  ds.num_classes = detail::infer_classes(ds.examples);
  return ds;
}

inline void write_tsv_tokens(std::ostream& out, const LabeledDataset& ds) {
  for (const auto& e : ds.examples) {
    out << e.label << '\t';
    for (std::size_t i = 0; i < e.tokens.size(); ++i) {
      if (i) out << ' ';
      out << ds.vocabulary.token_of(e.tokens[i]);
    }
    out << '\n';
  }
}

inline void write_fasta_dna(std::ostream& out, const LabeledDataset& ds) {
  for (const auto& e : ds.examples)
    out << ">label=" << e.label << " id=" << e.id << '\n' << decode_dna(e.tokens) << '\n';
}

inline LabeledDataset load_dataset(const std::string& path, DatasetFormat format,
                                   const Vocabulary* vocab = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset '" + path + "'");
  return format == DatasetFormat::tsv_tokens ? read_tsv_tokens(in, vocab) : read_fasta_dna(in);
}

inline void save_dataset(const std::string& path, const LabeledDataset& ds, DatasetFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset '" + path + "'");
  if (format == DatasetFormat::tsv_tokens)
    write_tsv_tokens(out, ds);
  else
    write_fasta_dna(out, ds);
  if (!out) throw Error("write failed for '" + path + "'");
}

inline DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "tsv-tokens") return DatasetFormat::tsv_tokens;
  if (name == "fasta-dna") return DatasetFormat::fasta_dna;
  throw ConfigError("unknown dataset format '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Graphs.

class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;
  explicit AdjacencyGraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  std::size_t vertex_count() const noexcept { return n_; }

  bool edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

  void set_edge(std::size_t i, std::size_t j, bool present = true) {
    if (i >= n_ || j >= n_) throw Error("set_edge: vertex out of range");
    if (i == j) throw Error("set_edge: self loops are not allowed");
    adj_[i * n_ + j] = adj_[j * n_ + i] = present ? 1 : 0;
  }

  std::span<const std::uint8_t> matrix() const noexcept { return adj_; }

  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d += adj_[v * n_ + j];
    return d;
  }

  std::vector<std::size_t> degree_multiset() const {
    std::vector<std::size_t> d(n_);
    for (std::size_t v = 0; v < n_; ++v) d[v] = degree(v);
    std::sort(d.begin(), d.end());
    return d;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) m += adj_[i * n_ + j];
    return m;
  }

  std::size_t triangle_count() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (edge(i, j))
          for (std::size_t k = j + 1; k < n_; ++k) t += (edge(i, k) && edge(j, k)) ? 1 : 0;
    return t;
  }

  bool is_valid() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (adj_[i * n_ + i] != 0) return false;
      for (std::size_t j = 0; j < n_; ++j)
        if (adj_[i * n_ + j] != adj_[j * n_ + i] || adj_[i * n_ + j] > 1) return false;
    }
    return true;
  }

  // Swap rows and columns i and j in place.
  void swap_vertices(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n_; ++k) std::swap(adj_[i * n_ + k], adj_[j * n_ + k]);
    for (std::size_t k = 0; k < n_; ++k) std::swap(adj_[k * n_ + i], adj_[k * n_ + j]);
  }

  friend auto operator<=>(const AdjacencyGraph&, const AdjacencyGraph&) = default;
  friend bool operator==(const AdjacencyGraph&, const AdjacencyGraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

struct LabeledGraph {
  AdjacencyGraph graph;
  std::size_t label = 0;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

inline void write_graph_tsv(std::ostream& out, std::span<const LabeledGraph> graphs) {
  for (const auto& g : graphs) {
    const std::size_t n = g.graph.vertex_count();
    out << g.label << '\t' << n << '\t';
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out << (g.graph.edge(i, j) ? '1' : '0');
    out << '\n';
  }
}

inline std::vector<LabeledGraph> read_graph_tsv(std::istream& in) {
  const auto lines = detail::read_lines(in);
  std::vector<LabeledGraph> graphs;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw ParseError(li + 1, "expected '<label>\\t<n>\\t<bits>'");
    auto label = detail::parse_size(line.substr(0, t1));
    auto n = detail::parse_size(line.substr(t1 + 1, t2 - t1 - 1));
    if (!label || !n) throw ParseError(li + 1, "label and vertex count must be integers");
    std::string_view bits = line.substr(t2 + 1);
    if (bits.size() != *n * (*n - (*n > 0 ? 1 : 0)) / 2)
      throw ParseError(li + 1, "bit string length does not match vertex count");
    AdjacencyGraph g(*n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < *n; ++i)
      for (std::size_t j = i + 1; j < *n; ++j, ++k) {
        if (bits[k] != '0' && bits[k] != '1') throw ParseError(li + 1, "bits must be 0 or 1");
        if (bits[k] == '1') g.set_edge(i, j);
      }
    graphs.push_back({std::move(g), *label});
  }
  return graphs;
}

}  // namespace synadv

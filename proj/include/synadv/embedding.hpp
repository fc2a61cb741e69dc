#pragma once
// Word-vector tables keyed by vocabulary id.
//
// File format: one token per line, "token v1 v2 ... vd", space separated.
// Tokens absent from the vocabulary are skipped; vocabulary tokens absent
// from the file have no vector.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "synadv/core.hpp"

namespace synadv {

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t vocab_size, std::size_t dim)
      : dim_(dim), present_(vocab_size, 0), values_(vocab_size * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t vocab_size() const noexcept { return present_.size(); }

  bool has(TokenId id) const { return id < present_.size() && present_[id] != 0; }

  std::span<const double> row(TokenId id) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(id) * dim_, dim_);
  }

  void set(TokenId id, std::span<const double> v) {
    if (id >= present_.size()) throw Error("embedding id out of range");
    if (v.size() != dim_) throw Error("embedding dimension mismatch");
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(id * dim_));
    present_[id] = 1;
  }

  double distance(TokenId a, TokenId b) const {
    auto ra = row(a);
    auto rb = row(b);
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) s += (ra[k] - rb[k]) * (ra[k] - rb[k]);
    return std::sqrt(s);
  }

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<double> values_;
};

inline EmbeddingTable read_embeddings(std::istream& in, const Vocabulary& vocab) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  EmbeddingTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = detail::split_spaces(line);
    if (fields.size() < 2) throw ParseError(line_no, "expected 'token v1 ... vd'");
    if (dim == 0) {
      dim = fields.size() - 1;
      table = EmbeddingTable(vocab.size(), dim);
    } else if (fields.size() - 1 != dim) {
      throw ParseError(line_no, "inconsistent vector dimension");
    }
    std::vector<double> v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stod(fields[k + 1], &used);
        if (used != fields[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(line_no, "component '" + fields[k + 1] + "' is not a number");
      }
    }
    if (auto id = vocab.find(fields[0]); id && *id != vocab.oov_id()) table.set(*id, v);
  }
  if (dim == 0) throw Error("embedding file is empty");
  return table;
}

inline void write_embeddings(std::ostream& out, const EmbeddingTable& table, const Vocabulary& vocab) {
  char buf[32];
  for (TokenId id = 0; id < table.vocab_size(); ++id) {
    if (!table.has(id)) continue;
    out << vocab.token_of(id);
    for (double x : table.row(id)) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

}  // namespace synadv

#pragma once
// Standard genetic code (NCBI translation table 1).

#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "synadv/core.hpp"

namespace synadv {

// Amino acids for codons enumerated in TCAG order (first base slowest).
inline constexpr std::string_view kStandardCodeTCAG =
    "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

inline constexpr char kStopSymbol = '*';

// Codons are indexed 16*b1 + 4*b2 + b3 over nucleotide ids A=0 C=1 G=2 T=3.
using CodonIndex = std::uint8_t;

namespace detail {

inline constexpr std::array<char, 64> build_code_table() {
  // Map TCAG order position to our ACGT ids.
  constexpr std::array<int, 4> tcag_to_id = {3, 1, 0, 2};
  std::array<char, 64> table{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        table[16 * tcag_to_id[a] + 4 * tcag_to_id[b] + tcag_to_id[c]] =
            kStandardCodeTCAG[16 * a + 4 * b + c];
  return table;
}

inline constexpr std::array<char, 64> kCodeTable = build_code_table();

inline int nucleotide_id(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: throw Error(std::string("invalid nucleotide '") + c + "' in codon");
  }
}

}  // namespace detail

inline CodonIndex codon_index(TokenId b1, TokenId b2, TokenId b3) {
  if (b1 > 3 || b2 > 3 || b3 > 3) throw Error("codon contains a non-nucleotide token");
  return static_cast<CodonIndex>(16 * b1 + 4 * b2 + b3);
}

inline CodonIndex codon_index(std::string_view codon) {
  if (codon.size() != 3) throw Error("codon must have exactly 3 nucleotides");
  return static_cast<CodonIndex>(16 * detail::nucleotide_id(codon[0]) +
                                 4 * detail::nucleotide_id(codon[1]) +
                                 detail::nucleotide_id(codon[2]));
}

inline std::string codon_string(CodonIndex c) {
  static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
  return {kBases[(c >> 4) & 3], kBases[(c >> 2) & 3], kBases[c & 3]};
}

inline std::array<TokenId, 3> codon_tokens(CodonIndex c) {
  return {static_cast<TokenId>((c >> 4) & 3), static_cast<TokenId>((c >> 2) & 3),
          static_cast<TokenId>(c & 3)};
}

inline char translate_codon(CodonIndex c) { return detail::kCodeTable[c]; }
inline char translate_codon(std::string_view codon) { return translate_codon(codon_index(codon)); }

inline bool is_stop_codon(CodonIndex c) { return translate_codon(c) == kStopSymbol; }

// Codons coding for the same amino acid (stops map among stops), excluding
// the input, in ascending codon index.
inline const std::vector<CodonIndex>& codon_synonym_indices(CodonIndex c) {
  static const auto table = [] {
    std::array<std::vector<CodonIndex>, 64> t;
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b)
        if (a != b && detail::kCodeTable[a] == detail::kCodeTable[b])
          t[a].push_back(static_cast<CodonIndex>(b));
    return t;
  }();
  return table[c];
}

inline std::vector<std::string> codon_synonyms(std::string_view codon) {
  std::vector<std::string> out;
  for (CodonIndex s : codon_synonym_indices(codon_index(codon))) out.push_back(codon_string(s));
  return out;
}

// Protein string for a nucleotide sequence read in frame 0.
inline std::string translate(const TokenSequence& dna) {
  if (dna.size() % 3 != 0) throw Error("not a codon multiple");
  std::string protein;
  protein.reserve(dna.size() / 3);
  for (std::size_t i = 0; i < dna.size(); i += 3)
    protein.push_back(translate_codon(codon_index(dna[i], dna[i + 1], dna[i + 2])));
  return protein;
}

inline bool same_translation(const TokenSequence& a, const TokenSequence& b) {
  if (a.size() != b.size() || a.size() % 3 != 0) return false;
  for (std::size_t i = 0; i < a.size(); i += 3)
    if (translate_codon(codon_index(a[i], a[i + 1], a[i + 2])) !=
        translate_codon(codon_index(b[i], b[i + 1], b[i + 2])))
      return false;
  return true;
}

// "codon<TAB>amino acid<TAB>synonyms" for all 64 codons in TCAG order.
inline void export_genetic_code(std::ostream& out) {
  static constexpr std::string_view kTcag = "TCAG";
  out << "codon\tamino_acid\tsynonyms\n";
  for (char a : kTcag)
    for (char b : kTcag)
      for (char c : kTcag) {
        const std::string codon{a, b, c};
        out << codon << '\t' << translate_codon(codon) << '\t';
        const auto syn = codon_synonyms(codon);
        for (std::size_t i = 0; i < syn.size(); ++i) out << (i ? "," : "") << syn[i];
        out << '\n';
      }
}

}  // namespace synadv

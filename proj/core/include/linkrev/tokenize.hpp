// Copyright 2026 The linkrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkrev/corpus.hpp"
#include "linkrev/errors.hpp"

namespace linkrev {

inline constexpr std::size_t kLetterCount = 26;
inline constexpr std::size_t kDigramCount = kLetterCount * kLetterCount;  // 676
inline constexpr std::size_t kRatingCount = 5;

enum class TokenNamespace : std::uint8_t { Letter, LetterPair, Rating, Category };

// A namespace-qualified symbol: letter 'a'..'z', pair "aa".."zz",
// rating mark R1..R5, or category mark C:<name> (by taxonomy index).
struct Token {
  TokenNamespace ns = TokenNamespace::Letter;
  std::uint32_t value = 0;

  static Token letter(char c);                   // 'a'..'z' (or 'A'..'Z')
  static Token letter_pair(char a, char b);
  static Token rating(int stars);                // 1..5
  static Token category(std::uint32_t taxonomy_index);

  friend bool operator==(const Token&, const Token&) = default;
};

enum class TokenSetKind : std::uint8_t {
  Unigram,
  Digram,
  Rating,
  Category,
  RatingCategory,
  UnigramRatingCategory,
  DigramRatingCategory,
};

inline constexpr TokenSetKind kAllTokenSetKinds[] = {
    TokenSetKind::Unigram,        TokenSetKind::Digram,
    TokenSetKind::Rating,         TokenSetKind::Category,
    TokenSetKind::RatingCategory, TokenSetKind::UnigramRatingCategory,
    TokenSetKind::DigramRatingCategory,
};

bool kind_has_unigrams(TokenSetKind kind);
bool kind_has_digrams(TokenSetKind kind);
bool kind_has_rating(TokenSetKind kind);
bool kind_has_category(TokenSetKind kind);
// The unigram/digram part of a combined kind, if any.
std::optional<TokenSetKind> lexical_component(TokenSetKind kind);

std::string_view to_string(TokenSetKind kind);
std::optional<TokenSetKind> token_set_kind_from_string(std::string_view name);

std::string_view to_string(TokenNamespace ns);

// A closed token vocabulary. Combined kinds lay their parts out
// contiguously: lexical tokens first, then ratings, then categories, so the
// vocabulary size is the sum of the parts (59 and 709 for the defaults).
class TokenSet {
 public:
  explicit TokenSet(TokenSetKind kind, std::shared_ptr<const Taxonomy> taxonomy = nullptr);

  TokenSetKind kind() const { return kind_; }
  std::size_t vocab_size() const { return vocab_size_; }
  const std::shared_ptr<const Taxonomy>& taxonomy() const { return taxonomy_; }

  // Flat index of a token inside this vocabulary; nullopt when the token's
  // namespace is not part of the set.
  std::optional<std::size_t> index_of(Token t) const;
  std::string token_name(std::size_t flat_index) const;

 private:
  TokenSetKind kind_;
  std::shared_ptr<const Taxonomy> taxonomy_;
  std::size_t vocab_size_ = 0;
  std::size_t rating_offset_ = 0;    // flat index of R1
  std::size_t category_offset_ = 0;  // flat index of the first category
};

struct TokenizeOptions {
  // When true, digrams pair consecutive letters across run boundaries (i.e.
  // over the letter sequence left after deleting non-letters). Default pairs
  // only within maximal letter runs.
  bool digram_across_runs = false;
};

// Maximal lowercase-ASCII-letter runs; anything that is not an ASCII letter
// (digits, punctuation, whitespace, non-ASCII bytes) separates runs.
std::vector<std::string> normalize_letters(std::string_view text);

inline int letter_index(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  if (u >= 'a' && u <= 'z') return u - 'a';
  if (u >= 'A' && u <= 'Z') return u - 'A';
  return -1;
}

namespace detail {

template <class F>
void visit_letters(std::string_view text, F&& emit) {
  for (char c : text) {
    const int v = letter_index(c);
    if (v >= 0) emit(static_cast<std::uint32_t>(v));
  }
}

template <class F>
void visit_letter_pairs(std::string_view text, bool across_runs, F&& emit) {
  int prev = -1;
  for (char c : text) {
    const int v = letter_index(c);
    if (v < 0) {
      if (!across_runs) prev = -1;
      continue;
    }
    if (prev >= 0) emit(static_cast<std::uint32_t>(prev * 26 + v));
    prev = v;
  }
}

}  // namespace detail

// Calls emit(Token) for every token of the review under this set, in order:
// lexical tokens through the text, then the rating mark, then the category
// mark. Throws UnknownCategory when the set covers categories and the
// review's category is not in the taxonomy.
template <class F>
void visit_tokens(const Review& r, const TokenSet& ts, const TokenizeOptions& opts, F&& emit) {
  const TokenSetKind kind = ts.kind();
  if (kind_has_unigrams(kind)) {
    detail::visit_letters(r.text, [&](std::uint32_t v) { emit(Token{TokenNamespace::Letter, v}); });
  }
  if (kind_has_digrams(kind)) {
    detail::visit_letter_pairs(r.text, opts.digram_across_runs,
                               [&](std::uint32_t v) { emit(Token{TokenNamespace::LetterPair, v}); });
  }
  if (kind_has_rating(kind)) {
    emit(Token::rating(r.rating));
  }
  if (kind_has_category(kind)) {
    const auto idx = ts.taxonomy()->index_of(r.category);
    if (!idx) throw UnknownCategory(r.category);
    emit(Token::category(*idx));
  }
}

std::vector<Token> extract_tokens(const Review& r, const TokenSet& ts,
                                  const TokenizeOptions& opts = {});

}  // namespace linkrev

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

#include "linkrev/tokenize.hpp"

#include <stdexcept>

namespace linkrev {

Token Token::letter(char c) {
  const int v = letter_index(c);
  if (v < 0) throw Error(std::string("not an ASCII letter: '") + c + "'");
  return Token{TokenNamespace::Letter, static_cast<std::uint32_t>(v)};
}

Token Token::letter_pair(char a, char b) {
  const int va = letter_index(a);
  const int vb = letter_index(b);
  if (va < 0 || vb < 0) throw Error("letter pair needs two ASCII letters");
  return Token{TokenNamespace::LetterPair, static_cast<std::uint32_t>(va * 26 + vb)};
}

Token Token::rating(int stars) {
  if (stars < 1 || stars > 5) throw InvalidRating(0, stars);
  return Token{TokenNamespace::Rating, static_cast<std::uint32_t>(stars - 1)};
}

Token Token::category(std::uint32_t taxonomy_index) {
  return Token{TokenNamespace::Category, taxonomy_index};
}

bool kind_has_unigrams(TokenSetKind kind) {
  return kind == TokenSetKind::Unigram || kind == TokenSetKind::UnigramRatingCategory;
}

bool kind_has_digrams(TokenSetKind kind) {
  return kind == TokenSetKind::Digram || kind == TokenSetKind::DigramRatingCategory;
}

bool kind_has_rating(TokenSetKind kind) {
  switch (kind) {
    case TokenSetKind::Rating:
    case TokenSetKind::RatingCategory:
    case TokenSetKind::UnigramRatingCategory:
    case TokenSetKind::DigramRatingCategory:
      return true;
    default:
      return false;
  }
}

bool kind_has_category(TokenSetKind kind) {
  switch (kind) {
    case TokenSetKind::Category:
    case TokenSetKind::RatingCategory:
    case TokenSetKind::UnigramRatingCategory:
    case TokenSetKind::DigramRatingCategory:
      return true;
    default:
      return false;
  }
}

std::optional<TokenSetKind> lexical_component(TokenSetKind kind) {
  if (kind_has_unigrams(kind)) return TokenSetKind::Unigram;
  if (kind_has_digrams(kind)) return TokenSetKind::Digram;
  return std::nullopt;
}

std::string_view to_string(TokenSetKind kind) {
  switch (kind) {
    case TokenSetKind::Unigram: return "unigram";
    case TokenSetKind::Digram: return "digram";
    case TokenSetKind::Rating: return "rating";
    case TokenSetKind::Category: return "category";
    case TokenSetKind::RatingCategory: return "rating_category";
    case TokenSetKind::UnigramRatingCategory: return "unigram_rating_category";
    case TokenSetKind::DigramRatingCategory: return "digram_rating_category";
  }
  return "?";
}

std::optional<TokenSetKind> token_set_kind_from_string(std::string_view name) {
  for (TokenSetKind k : kAllTokenSetKinds) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string_view to_string(TokenNamespace ns) {
  switch (ns) {
    case TokenNamespace::Letter: return "letter";
    case TokenNamespace::LetterPair: return "letter_pair";
    case TokenNamespace::Rating: return "rating";
    case TokenNamespace::Category: return "category";
  }
  return "?";
}

TokenSet::TokenSet(TokenSetKind kind, std::shared_ptr<const Taxonomy> taxonomy)
    : kind_(kind), taxonomy_(std::move(taxonomy)) {
  if (kind_has_category(kind_) && !taxonomy_) {
    throw InvalidConfig("token set " + std::string(to_string(kind_)) + " requires a taxonomy");
  }
  std::size_t lexical = 0;
  if (kind_has_unigrams(kind_)) lexical = kLetterCount;
  if (kind_has_digrams(kind_)) lexical = kDigramCount;
  rating_offset_ = lexical;
  category_offset_ = lexical + (kind_has_rating(kind_) ? kRatingCount : 0);
  vocab_size_ = category_offset_ + (kind_has_category(kind_) ? taxonomy_->size() : 0);
}

std::optional<std::size_t> TokenSet::index_of(Token t) const {
  switch (t.ns) {
    case TokenNamespace::Letter:
      if (!kind_has_unigrams(kind_) || t.value >= kLetterCount) return std::nullopt;
      return t.value;
    case TokenNamespace::LetterPair:
      if (!kind_has_digrams(kind_) || t.value >= kDigramCount) return std::nullopt;
      return t.value;
    case TokenNamespace::Rating:
      if (!kind_has_rating(kind_) || t.value >= kRatingCount) return std::nullopt;
      return rating_offset_ + t.value;
    case TokenNamespace::Category:
      if (!kind_has_category(kind_) || t.value >= taxonomy_->size()) return std::nullopt;
      return category_offset_ + t.value;
  }
  return std::nullopt;
}

std::string TokenSet::token_name(std::size_t flat_index) const {
  if (flat_index >= vocab_size_) throw std::out_of_range("token index out of range");
  if (kind_has_unigrams(kind_) && flat_index < kLetterCount) {
    return std::string(1, static_cast<char>('a' + flat_index));
  }
  if (kind_has_digrams(kind_) && flat_index < kDigramCount) {
    std::string s(2, 'a');
    s[0] = static_cast<char>('a' + flat_index / 26);
    s[1] = static_cast<char>('a' + flat_index % 26);
    return s;
  }
  if (kind_has_rating(kind_) && flat_index < category_offset_) {
    return "R" + std::to_string(flat_index - rating_offset_ + 1);
  }
  return "C:" + taxonomy_->name(flat_index - category_offset_);
}

std::vector<std::string> normalize_letters(std::string_view text) {
  std::vector<std::string> runs;
  std::string current;
  for (char c : text) {
    const int v = letter_index(c);
    if (v >= 0) {
      current.push_back(static_cast<char>('a' + v));
    } else if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) runs.push_back(std::move(current));
  return runs;
}

std::vector<Token> extract_tokens(const Review& r, const TokenSet& ts,
                                  const TokenizeOptions& opts) {
  std::vector<Token> out;
  visit_tokens(r, ts, opts, [&](Token t) { out.push_back(t); });
  return out;
}

}  // namespace linkrev

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
#include <iosfwd>
#include <span>
#include <vector>

#include "linkrev/tokenize.hpp"

namespace linkrev {

// Dense token tallies over a closed vocabulary.
class TokenCounts {
 public:
  explicit TokenCounts(TokenSet token_set);

  static TokenCounts build(std::span<const Review> reviews, const TokenSet& ts,
                           const TokenizeOptions& opts = {});

  void add_review(const Review& r, const TokenizeOptions& opts = {});
  void add_token(Token t);  // throws OutOfVocabulary

  const TokenSet& token_set() const { return token_set_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t count_at(std::size_t flat_index) const { return counts_.at(flat_index); }
  std::uint64_t count(Token t) const;
  std::span<const std::uint64_t> counts() const { return counts_; }

 private:
  TokenSet token_set_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Laplace-smoothed distribution over the full vocabulary:
// p(t) = (count(t) + 1) / (total + vocab_size). Strictly positive, sums to 1.
class SmoothedDistribution {
 public:
  explicit SmoothedDistribution(const TokenCounts& counts);

  const TokenSet& token_set() const { return token_set_; }
  std::size_t vocab_size() const { return prob_.size(); }
  double prob_at(std::size_t flat_index) const { return prob_.at(flat_index); }
  double log_prob_at(std::size_t flat_index) const { return log_prob_.at(flat_index); }
  std::span<const double> probs() const { return prob_; }
  std::span<const double> log_probs() const { return log_prob_; }

 private:
  TokenSet token_set_;
  std::vector<double> prob_;
  std::vector<double> log_prob_;
};

TokenCounts build_counts(std::span<const Review> reviews, const TokenSet& ts,
                         const TokenizeOptions& opts = {});
SmoothedDistribution smoothed_distribution(const TokenCounts& counts);

// Sum of ln p(token) over the record's tokens (uniform prior dropped).
// Higher is a better match. Empty input yields 0.
double nb_log_likelihood(std::span<const Token> tokens, const SmoothedDistribution& d);
// Count-weighted form; both overloads agree exactly.
double nb_log_likelihood(const TokenCounts& tokens, const SmoothedDistribution& d);

// 0.5 * (D_kl(P||Q) + D_kl(Q||P)). Symmetric by construction, non-negative,
// zero iff the distributions are identical. Throws VocabularyMismatch when
// the vocabularies differ.
double sym_kld(const SmoothedDistribution& p, const SmoothedDistribution& q);

// Weighted-average coefficients merging lexical, rating, and category
// distances into one score.
struct CombineWeights {
  double alpha = 1.0;  // weight of the lexical distance
  double beta = 0.5;   // weight of rating inside the non-lexical average

  void validate() const;  // throws InvalidConfig unless both are in [0,1]
};

inline constexpr double kDefaultBeta = 0.5;

// Chosen lexical weights: 0.997 for unigram-based sets, 0.97 for
// digram-based ones; 1.0 where no non-lexical part exists.
double default_alpha(TokenSetKind kind);
CombineWeights default_weights(TokenSetKind kind);

// alpha * d_lex + (1 - alpha) * (beta * d_rate + (1 - beta) * d_cat)
double combined_distance(double d_lex, double d_rate, double d_cat, const CombineWeights& w);

// Debug dump, "token,count" over the full vocabulary. Not a stable format.
void write_counts_csv(const TokenCounts& counts, std::ostream& out);

}  // namespace linkrev

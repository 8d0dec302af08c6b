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

#include "linkrev/model.hpp"

#include <cmath>
#include <ostream>

namespace linkrev {

TokenCounts::TokenCounts(TokenSet token_set)
    : token_set_(std::move(token_set)), counts_(token_set_.vocab_size(), 0) {}

TokenCounts TokenCounts::build(std::span<const Review> reviews, const TokenSet& ts,
                               const TokenizeOptions& opts) {
  TokenCounts tc(ts);
  for (const Review& r : reviews) tc.add_review(r, opts);
  return tc;
}

void TokenCounts::add_review(const Review& r, const TokenizeOptions& opts) {
  visit_tokens(r, token_set_, opts, [&](Token t) {
    // visit_tokens only emits tokens of the set's own namespaces.
    ++counts_[*token_set_.index_of(t)];
    ++total_;
  });
}

void TokenCounts::add_token(Token t) {
  const auto idx = token_set_.index_of(t);
  if (!idx) throw OutOfVocabulary(std::string(to_string(t.ns)) + " token");
  ++counts_[*idx];
  ++total_;
}

std::uint64_t TokenCounts::count(Token t) const {
  const auto idx = token_set_.index_of(t);
  if (!idx) throw OutOfVocabulary(std::string(to_string(t.ns)) + " token");
  return counts_[*idx];
}

SmoothedDistribution::SmoothedDistribution(const TokenCounts& counts)
    : token_set_(counts.token_set()) {
  const std::size_t v = token_set_.vocab_size();
  const double denom = static_cast<double>(counts.total()) + static_cast<double>(v);
  prob_.resize(v);
  log_prob_.resize(v);
  for (std::size_t i = 0; i < v; ++i) {
    prob_[i] = (static_cast<double>(counts.count_at(i)) + 1.0) / denom;
    log_prob_[i] = std::log(prob_[i]);
  }
}

TokenCounts build_counts(std::span<const Review> reviews, const TokenSet& ts,
                         const TokenizeOptions& opts) {
  return TokenCounts::build(reviews, ts, opts);
}

SmoothedDistribution smoothed_distribution(const TokenCounts& counts) {
  return SmoothedDistribution(counts);
}

double nb_log_likelihood(std::span<const Token> tokens, const SmoothedDistribution& d) {
  TokenCounts tc(d.token_set());
  for (Token t : tokens) tc.add_token(t);
  return nb_log_likelihood(tc, d);
}

double nb_log_likelihood(const TokenCounts& tokens, const SmoothedDistribution& d) {
  if (tokens.token_set().kind() != d.token_set().kind() ||
      tokens.token_set().vocab_size() != d.vocab_size()) {
    throw VocabularyMismatch();
  }
  double sum = 0.0;
  const auto counts = tokens.counts();
  const auto log_probs = d.log_probs();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) sum += static_cast<double>(counts[i]) * log_probs[i];
  }
  return sum;
}

double sym_kld(const SmoothedDistribution& p, const SmoothedDistribution& q) {
  if (p.token_set().kind() != q.token_set().kind() || p.vocab_size() != q.vocab_size()) {
    throw VocabularyMismatch();
  }
  // 0.5 * (sum p ln(p/q) + sum q ln(q/p)) folded into one pass; the folded
  // form is bitwise symmetric in its arguments.
  double sum = 0.0;
  const auto pp = p.probs();
  const auto qp = q.probs();
  const auto pl = p.log_probs();
  const auto ql = q.log_probs();
  for (std::size_t i = 0; i < pp.size(); ++i) {
    sum += (pp[i] - qp[i]) * (pl[i] - ql[i]);
  }
  return 0.5 * sum;
}

void CombineWeights::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must be in [0,1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidConfig("beta must be in [0,1]");
}

double default_alpha(TokenSetKind kind) {
  if (kind_has_unigrams(kind)) return 0.997;
  if (kind_has_digrams(kind)) return 0.97;
  return 1.0;
}

CombineWeights default_weights(TokenSetKind kind) {
  return CombineWeights{default_alpha(kind), kDefaultBeta};
}

double combined_distance(double d_lex, double d_rate, double d_cat, const CombineWeights& w) {
  return w.alpha * d_lex + (1.0 - w.alpha) * (w.beta * d_rate + (1.0 - w.beta) * d_cat);
}

void write_counts_csv(const TokenCounts& counts, std::ostream& out) {
  out << "token,count\n";
  for (std::size_t i = 0; i < counts.token_set().vocab_size(); ++i) {
    out << counts.token_set().token_name(i) << "," << counts.count_at(i) << "\n";
  }
}

}  // namespace linkrev

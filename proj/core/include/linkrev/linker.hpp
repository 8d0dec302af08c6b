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

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linkrev/model.hpp"

namespace linkrev {

enum class Method : std::uint8_t { NB, KLD };

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view name);

struct RankedEntry {
  std::string account_id;
  double score = 0.0;
};

// Every candidate account exactly once. NB lists are sorted by descending
// log-likelihood, KLD lists by ascending symmetric divergence; equal scores
// order by ascending account id.
struct RankedList {
  std::string ar_id;
  Method method = Method::NB;
  std::vector<RankedEntry> entries;
};

struct AccountRecord {
  std::string_view account_id;
  std::span<const Review> reviews;
};

// Per-account smoothed distributions for each configured token-set kind.
class ModelIndex {
 public:
  static ModelIndex build(std::span<const AccountRecord> records,
                          std::span<const TokenSetKind> kinds,
                          std::shared_ptr<const Taxonomy> taxonomy,
                          const TokenizeOptions& opts = {}, unsigned threads = 1);

  std::size_t account_count() const { return accounts_.size(); }
  // Ascending account ids.
  const std::vector<std::string>& accounts() const { return accounts_; }
  bool has_kind(TokenSetKind kind) const { return dists_.count(kind) != 0; }
  const SmoothedDistribution& distribution(std::size_t account_idx, TokenSetKind kind) const;
  const std::shared_ptr<const Taxonomy>& taxonomy() const { return taxonomy_; }
  const TokenizeOptions& tokenize_options() const { return opts_; }

 private:
  std::vector<std::string> accounts_;
  std::map<TokenSetKind, std::vector<SmoothedDistribution>> dists_;
  std::shared_ptr<const Taxonomy> taxonomy_;
  TokenizeOptions opts_;
};

// The token-set kinds an index must carry to rank with (method, ts):
// NB scores one model over the (possibly combined) vocabulary; KLD scores
// combined sets through their component distributions.
std::vector<TokenSetKind> required_kinds(Method method, TokenSetKind ts);

// Scores the anonymous record against every account and returns the full
// sorted candidate list. Throws EmptyIndex / EmptyRecord.
RankedList rank_accounts(std::string ar_id, std::span<const Review> ar, const ModelIndex& idx,
                         Method method, TokenSetKind ts, const CombineWeights& weights);

// 1-based position of the account in the list; throws UnknownAccount.
std::size_t rank_of(const RankedList& list, std::string_view account_id);

// True iff the true account ranks within the top T entries (1-based,
// inclusive).
bool top_t_hit(const RankedList& list, std::string_view true_account, std::size_t t);

// Bijection between accounts and anonymous records.
struct MatchAssignment {
  std::vector<std::pair<std::string, std::string>> pairs;  // (account_id, ar_id), by account_id

  std::optional<std::string_view> ar_for_account(std::string_view account_id) const;
};

// Greedy global assignment: repeatedly take the smallest remaining
// (account, AR) divergence, pair the two, and drop both from every list.
// Implemented as a priority queue with lazy deletion; output matches the
// repeated global-minimum scan. Ties order by (distance, account, AR).
MatchAssignment match_all(std::span<const RankedList> lists);

// CSV with header "rank,account_id,score".
void write_ranked_csv(const RankedList& list, std::ostream& out);
// CSV with header "account_id,ar_id".
void write_assignment_csv(const MatchAssignment& assignment, std::ostream& out);

}  // namespace linkrev

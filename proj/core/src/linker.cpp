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

#include "linkrev/linker.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <queue>
#include <set>

#include "linkrev/parallel.hpp"

namespace linkrev {

std::string_view to_string(Method m) { return m == Method::NB ? "nb" : "kld"; }

std::optional<Method> method_from_string(std::string_view name) {
  if (name == "nb") return Method::NB;
  if (name == "kld") return Method::KLD;
  return std::nullopt;
}

ModelIndex ModelIndex::build(std::span<const AccountRecord> records,
                             std::span<const TokenSetKind> kinds,
                             std::shared_ptr<const Taxonomy> taxonomy,
                             const TokenizeOptions& opts, unsigned threads) {
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].account_id < records[b].account_id;
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (records[order[i]].account_id == records[order[i + 1]].account_id) {
      throw SizeMismatch("duplicate account id " + std::string(records[order[i]].account_id));
    }
  }

  std::vector<TokenSetKind> unique_kinds(kinds.begin(), kinds.end());
  std::sort(unique_kinds.begin(), unique_kinds.end());
  unique_kinds.erase(std::unique(unique_kinds.begin(), unique_kinds.end()), unique_kinds.end());

  std::vector<TokenSet> sets;
  sets.reserve(unique_kinds.size());
  for (TokenSetKind k : unique_kinds) sets.emplace_back(k, taxonomy);

  // One slot per (account, kind); filled in parallel, assembled in order.
  std::vector<std::vector<SmoothedDistribution>> slots(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const AccountRecord& rec = records[order[i]];
    auto& row = slots[i];
    row.reserve(sets.size());
    for (const TokenSet& set : sets) {
      row.emplace_back(TokenCounts::build(rec.reviews, set, opts));
    }
  });

  ModelIndex idx;
  idx.taxonomy_ = std::move(taxonomy);
  idx.opts_ = opts;
  idx.accounts_.reserve(records.size());
  for (std::size_t i : order) idx.accounts_.emplace_back(records[i].account_id);
  for (std::size_t k = 0; k < unique_kinds.size(); ++k) {
    auto& column = idx.dists_[unique_kinds[k]];
    column.reserve(records.size());
    for (auto& row : slots) column.push_back(std::move(row[k]));
  }
  return idx;
}

const SmoothedDistribution& ModelIndex::distribution(std::size_t account_idx,
                                                     TokenSetKind kind) const {
  const auto it = dists_.find(kind);
  if (it == dists_.end()) {
    throw Error("model index has no " + std::string(to_string(kind)) + " distributions");
  }
  return it->second.at(account_idx);
}

std::vector<TokenSetKind> required_kinds(Method method, TokenSetKind ts) {
  if (method == Method::NB) return {ts};
  switch (ts) {
    case TokenSetKind::RatingCategory:
      return {TokenSetKind::Rating, TokenSetKind::Category};
    case TokenSetKind::UnigramRatingCategory:
      return {TokenSetKind::Unigram, TokenSetKind::Rating, TokenSetKind::Category};
    case TokenSetKind::DigramRatingCategory:
      return {TokenSetKind::Digram, TokenSetKind::Rating, TokenSetKind::Category};
    default:
      return {ts};
  }
}

RankedList rank_accounts(std::string ar_id, std::span<const Review> ar, const ModelIndex& idx,
                         Method method, TokenSetKind ts, const CombineWeights& weights) {
  if (idx.account_count() == 0) throw EmptyIndex();
  if (ar.empty()) throw EmptyRecord();
  weights.validate();

  const std::size_t n = idx.account_count();
  const auto& opts = idx.tokenize_options();
  std::vector<double> scores(n);

  if (method == Method::NB) {
    const TokenSet set(ts, idx.taxonomy());
    const TokenCounts ar_counts = TokenCounts::build(ar, set, opts);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = nb_log_likelihood(ar_counts, idx.distribution(i, ts));
    }
  } else {
    const auto lexical = lexical_component(ts);
    const bool combined = kind_has_rating(ts) && kind_has_category(ts);
    if (!combined) {
      const TokenSet set(ts, idx.taxonomy());
      const SmoothedDistribution ar_dist(TokenCounts::build(ar, set, opts));
      for (std::size_t i = 0; i < n; ++i) {
        scores[i] = sym_kld(ar_dist, idx.distribution(i, ts));
      }
    } else {
      const TokenSet rating_set(TokenSetKind::Rating);
      const TokenSet category_set(TokenSetKind::Category, idx.taxonomy());
      const SmoothedDistribution ar_rating(TokenCounts::build(ar, rating_set, opts));
      const SmoothedDistribution ar_category(TokenCounts::build(ar, category_set, opts));
      std::optional<SmoothedDistribution> ar_lex;
      if (lexical) {
        const TokenSet lex_set(*lexical, idx.taxonomy());
        ar_lex.emplace(TokenCounts::build(ar, lex_set, opts));
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double d_rate = sym_kld(ar_rating, idx.distribution(i, TokenSetKind::Rating));
        const double d_cat = sym_kld(ar_category, idx.distribution(i, TokenSetKind::Category));
        if (lexical) {
          const double d_lex = sym_kld(*ar_lex, idx.distribution(i, *lexical));
          scores[i] = combined_distance(d_lex, d_rate, d_cat, weights);
        } else {
          scores[i] = weights.beta * d_rate + (1.0 - weights.beta) * d_cat;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const bool ascending = method == Method::KLD;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
    return idx.accounts()[a] < idx.accounts()[b];
  });

  RankedList list;
  list.ar_id = std::move(ar_id);
  list.method = method;
  list.entries.reserve(n);
  for (std::size_t i : order) list.entries.push_back({idx.accounts()[i], scores[i]});
  return list;
}

std::size_t rank_of(const RankedList& list, std::string_view account_id) {
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    if (list.entries[i].account_id == account_id) return i + 1;
  }
  throw UnknownAccount(std::string(account_id));
}

bool top_t_hit(const RankedList& list, std::string_view true_account, std::size_t t) {
  return rank_of(list, true_account) <= t;
}

std::optional<std::string_view> MatchAssignment::ar_for_account(std::string_view account_id) const {
  const auto it = std::lower_bound(
      pairs.begin(), pairs.end(), account_id,
      [](const auto& pair, std::string_view id) { return pair.first < id; });
  if (it == pairs.end() || it->first != account_id) return std::nullopt;
  return it->second;
}

MatchAssignment match_all(std::span<const RankedList> lists) {
  if (lists.empty()) throw SizeMismatch("no ranked lists");
  const std::size_t n = lists.size();

  std::vector<std::string> accounts;
  accounts.reserve(n);
  for (const RankedEntry& e : lists.front().entries) accounts.push_back(e.account_id);
  std::sort(accounts.begin(), accounts.end());
  if (accounts.size() != n) {
    throw SizeMismatch("need as many accounts as anonymous records");
  }

  std::unordered_map<std::string, std::size_t> account_idx;
  account_idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!account_idx.emplace(accounts[i], i).second) {
      throw SizeMismatch("duplicate account " + accounts[i]);
    }
  }

  // AR tie order is by ascending ar_id, independent of list order.
  std::vector<std::size_t> ar_rank(n);
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lists[a].ar_id < lists[b].ar_id; });
    for (std::size_t r = 0; r + 1 < n; ++r) {
      if (lists[order[r]].ar_id == lists[order[r + 1]].ar_id) {
        throw SizeMismatch("duplicate anonymous record id " + lists[order[r]].ar_id);
      }
    }
    for (std::size_t r = 0; r < n; ++r) ar_rank[order[r]] = r;
  }

  struct Candidate {
    double score;
    std::size_t account;  // index into sorted accounts
    std::size_t ar;       // ar_rank (ascending ar_id)
    std::size_t list;     // index into lists
  };
  const auto later = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.account != b.account) return a.account > b.account;
    return a.ar > b.ar;
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(later)> queue(later);

  for (std::size_t l = 0; l < n; ++l) {
    const RankedList& list = lists[l];
    if (list.method != Method::KLD) throw NonKldInput();
    if (list.entries.size() != n) {
      throw SizeMismatch("list for " + list.ar_id + " does not cover every account");
    }
    std::set<std::string_view> covered;
    for (const RankedEntry& e : list.entries) {
      const auto it = account_idx.find(e.account_id);
      if (it == account_idx.end() || !covered.insert(e.account_id).second) {
        throw SizeMismatch("list for " + list.ar_id + " does not cover every account");
      }
      queue.push({e.score, it->second, ar_rank[l], l});
    }
  }

  // Lazy deletion: popped pairs whose account or AR is already matched are
  // exactly the tuples the pseudo-code would have deleted from the lists.
  std::vector<bool> account_used(n, false);
  std::vector<bool> ar_used(n, false);
  MatchAssignment out;
  out.pairs.reserve(n);
  while (out.pairs.size() < n) {
    const Candidate c = queue.top();
    queue.pop();
    if (account_used[c.account] || ar_used[c.ar]) continue;
    account_used[c.account] = true;
    ar_used[c.ar] = true;
    out.pairs.emplace_back(accounts[c.account], lists[c.list].ar_id);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

void write_ranked_csv(const RankedList& list, std::ostream& out) {
  out << "rank,account_id,score\n";
  char buf[64];
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", list.entries[i].score);
    out << (i + 1) << "," << list.entries[i].account_id << "," << buf << "\n";
  }
}

void write_assignment_csv(const MatchAssignment& assignment, std::ostream& out) {
  out << "account_id,ar_id\n";
  for (const auto& [account, ar] : assignment.pairs) {
    out << account << "," << ar << "\n";
  }
}

}  // namespace linkrev

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

#include "linkrev/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "linkrev/parallel.hpp"
#include "linkrev/rng.hpp"

namespace linkrev {

namespace {

const std::uint64_t kSplitTag = fnv1a64("experiment.split");
const std::uint64_t kRestrictTag = fnv1a64("experiment.restricted_ir");

std::string fmt_lr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (x < 1) throw InvalidConfig("x must be >= 1");
  if (ar_sizes.empty()) throw InvalidConfig("ar_sizes must not be empty");
  for (std::size_t s : ar_sizes) {
    if (s < 1) throw InvalidConfig("ar sizes must be >= 1");
    if (s > x) {
      throw InvalidConfig("ar size " + std::to_string(s) + " exceeds x " + std::to_string(x));
    }
  }
  if (top_t.empty()) throw InvalidConfig("top_t must not be empty");
  for (std::size_t t : top_t) {
    if (t < 1) throw InvalidConfig("top_t values must be >= 1");
  }
  if (methods.empty()) throw InvalidConfig("methods must not be empty");
  if (token_sets.empty()) throw InvalidConfig("token_sets must not be empty");
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) throw InvalidConfig("alpha must be in [0,1]");
  if (beta && !(*beta >= 0.0 && *beta <= 1.0)) throw InvalidConfig("beta must be in [0,1]");
}

CombineWeights ExperimentConfig::weights_for(TokenSetKind kind) const {
  CombineWeights w = default_weights(kind);
  if (alpha) w.alpha = *alpha;
  if (beta) w.beta = *beta;
  return w;
}

std::vector<AuthorSplit> split_records(const Corpus& corpus, const ExperimentConfig& cfg) {
  cfg.validate();
  if (corpus.reviews().empty()) throw EmptyCorpus();

  std::vector<AuthorSplit> splits;
  splits.reserve(corpus.author_count());
  for (std::size_t a = 0; a < corpus.author_count(); ++a) {
    const std::string& author_id = corpus.authors()[a];
    std::vector<Review> reviews = corpus.author_reviews(a);
    if (reviews.size() < cfg.x + 1) {
      throw AuthorTooSmall(author_id, reviews.size(), cfg.x + 1);
    }
    Sampler rng(make_stream({cfg.seed, kSplitTag, fnv1a64(author_id)}));
    rng.shuffle(reviews);

    AuthorSplit split;
    split.author_id = author_id;
    const std::size_t n_identified = reviews.size() - cfg.x;
    split.identified.assign(reviews.begin(), reviews.begin() + n_identified);
    split.anonymous_pool.assign(reviews.begin() + n_identified, reviews.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

namespace {

std::vector<TokenSetKind> union_required_kinds(const ExperimentConfig& cfg) {
  std::vector<TokenSetKind> kinds;
  for (Method m : cfg.methods) {
    for (TokenSetKind ts : cfg.token_sets) {
      const auto needed = required_kinds(m, ts);
      kinds.insert(kinds.end(), needed.begin(), needed.end());
    }
  }
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  return kinds;
}

ModelIndex build_index(const std::vector<AuthorSplit>& splits,
                       const std::vector<std::vector<Review>>* restricted,
                       std::span<const TokenSetKind> kinds, const Corpus& corpus,
                       const ExperimentConfig& cfg, unsigned threads) {
  std::vector<AccountRecord> records;
  records.reserve(splits.size());
  for (std::size_t a = 0; a < splits.size(); ++a) {
    records.push_back({splits[a].author_id,
                       restricted ? std::span<const Review>((*restricted)[a])
                                  : std::span<const Review>(splits[a].identified)});
  }
  return ModelIndex::build(records, kinds, corpus.taxonomy(), cfg.tokenize, threads);
}

// Without-replacement IR sample of size ar_size, re-drawn per (author, size).
std::vector<std::vector<Review>> sample_restricted(const std::vector<AuthorSplit>& splits,
                                                   std::size_t ar_size,
                                                   const ExperimentConfig& cfg) {
  std::vector<std::vector<Review>> out(splits.size());
  for (std::size_t a = 0; a < splits.size(); ++a) {
    const auto& identified = splits[a].identified;
    if (identified.size() < ar_size) {
      throw AuthorTooSmall(splits[a].author_id, identified.size() + cfg.x, cfg.x + ar_size);
    }
    Sampler rng(make_stream({cfg.seed, kRestrictTag, fnv1a64(splits[a].author_id), ar_size}));
    const auto picks = rng.sample_without_replacement(identified.size(), ar_size);
    out[a].reserve(ar_size);
    for (std::size_t i : picks) out[a].push_back(identified[i]);
  }
  return out;
}

}  // namespace

LRReport run_experiment(const Corpus& corpus, const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::vector<AuthorSplit> splits = split_records(corpus, cfg);
  const std::size_t n = splits.size();
  const std::vector<TokenSetKind> kinds = union_required_kinds(cfg);

  std::optional<ModelIndex> full_index;
  if (!cfg.restricted_ir) {
    full_index = build_index(splits, nullptr, kinds, corpus, cfg, threads);
  }

  LRReport report;
  for (std::size_t ar_size : cfg.ar_sizes) {
    std::optional<ModelIndex> restricted_index;
    if (cfg.restricted_ir) {
      const auto sampled = sample_restricted(splits, ar_size, cfg);
      restricted_index = build_index(splits, &sampled, kinds, corpus, cfg, threads);
    }
    const ModelIndex& index = cfg.restricted_ir ? *restricted_index : *full_index;

    for (Method method : cfg.methods) {
      for (TokenSetKind ts : cfg.token_sets) {
        const CombineWeights weights = cfg.weights_for(ts);
        const bool keep_lists = cfg.use_match_all && method == Method::KLD;

        std::vector<std::size_t> true_rank(n);
        std::vector<RankedList> lists(keep_lists ? n : 0);
        parallel_for(n, threads, [&](std::size_t a) {
          const std::span<const Review> ar(splits[a].anonymous_pool.data(), ar_size);
          RankedList list = rank_accounts(splits[a].author_id, ar, index, method, ts, weights);
          true_rank[a] = rank_of(list, splits[a].author_id);
          if (keep_lists) lists[a] = std::move(list);
        });

        for (std::size_t t : cfg.top_t) {
          std::size_t hits = 0;
          for (std::size_t r : true_rank) hits += (r <= t) ? 1 : 0;
          report.rows.push_back({method, ts, ar_size, t,
                                 static_cast<double>(hits) / static_cast<double>(n), n, false});
        }
        if (keep_lists) {
          const MatchAssignment assignment = match_all(lists);
          std::size_t hits = 0;
          for (const auto& [account, ar] : assignment.pairs) hits += (account == ar) ? 1 : 0;
          report.rows.push_back({method, ts, ar_size, 1,
                                 static_cast<double>(hits) / static_cast<double>(n), n, true});
        }
      }
    }
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const LRRow& a, const LRRow& b) {
    return std::tuple(static_cast<int>(a.method), static_cast<int>(a.token_set), a.ar_size,
                      a.top_t, a.match_all) <
           std::tuple(static_cast<int>(b.method), static_cast<int>(b.token_set), b.ar_size,
                      b.top_t, b.match_all);
  });
  return report;
}

std::string_view to_string(TuneTarget t) {
  switch (t) {
    case TuneTarget::Beta: return "beta";
    case TuneTarget::AlphaUnigram: return "alpha_unigram";
    case TuneTarget::AlphaDigram: return "alpha_digram";
  }
  return "?";
}

std::optional<TuneTarget> tune_target_from_string(std::string_view name) {
  if (name == "beta") return TuneTarget::Beta;
  if (name == "alpha_unigram" || name == "alpha-unigram") return TuneTarget::AlphaUnigram;
  if (name == "alpha_digram" || name == "alpha-digram") return TuneTarget::AlphaDigram;
  return std::nullopt;
}

namespace {

constexpr std::size_t kTuneTestReviews = 30;

// Pairwise SymKLD between every test record and every training record for
// one token-set kind; row = test author, column = trained account.
std::vector<std::vector<double>> pairwise_distances(
    const std::vector<std::vector<Review>>& train, const std::vector<std::vector<Review>>& test,
    TokenSetKind kind, const Corpus& corpus, const TokenizeOptions& opts, unsigned threads) {
  const TokenSet set(kind, corpus.taxonomy());
  const std::size_t n = train.size();
  std::vector<SmoothedDistribution> train_dist;
  std::vector<SmoothedDistribution> test_dist;
  train_dist.reserve(n);
  test_dist.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    train_dist.emplace_back(TokenCounts::build(train[a], set, opts));
    test_dist.emplace_back(TokenCounts::build(test[a], set, opts));
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = sym_kld(test_dist[i], train_dist[j]);
  });
  return d;
}

// Top-1 LR of the distance matrix: a hit when the row's own column wins
// (ties toward the lexicographically smaller account id).
double top1_lr(const std::vector<std::vector<double>>& d, const std::vector<std::string>& ids) {
  const std::size_t n = d.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (d[i][j] < d[i][best] || (d[i][j] == d[i][best] && ids[j] < ids[best])) best = j;
    }
    hits += (best == i) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

TuneResult tune_weights(const Corpus& corpus, const ExperimentConfig& cfg, TuneTarget target,
                        unsigned threads) {
  if (corpus.reviews().empty()) throw EmptyCorpus();
  const std::size_t n = corpus.author_count();

  std::vector<std::string> ids(corpus.authors());
  std::vector<std::vector<Review>> train(n);
  std::vector<std::vector<Review>> test(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<Review> reviews = corpus.author_reviews(a);
    if (reviews.size() < kTuneTestReviews + 1) {
      throw AuthorTooSmall(ids[a], reviews.size(), kTuneTestReviews + 1);
    }
    const std::size_t n_train = reviews.size() - kTuneTestReviews;
    train[a].assign(reviews.begin(), reviews.begin() + n_train);
    test[a].assign(reviews.begin() + n_train, reviews.end());
  }

  const auto rating_d =
      pairwise_distances(train, test, TokenSetKind::Rating, corpus, cfg.tokenize, threads);
  const auto category_d =
      pairwise_distances(train, test, TokenSetKind::Category, corpus, cfg.tokenize, threads);

  TuneResult result;
  result.target = target;

  std::vector<std::vector<double>> combined(n, std::vector<double>(n));
  const auto lr_at = [&](double weight, const std::vector<std::vector<double>>& lex_d,
                         double beta) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double rc = beta * rating_d[i][j] + (1.0 - beta) * category_d[i][j];
        combined[i][j] = lex_d.empty() ? rc : weight * lex_d[i][j] + (1.0 - weight) * rc;
      }
    }
    return top1_lr(combined, ids);
  };

  if (target == TuneTarget::Beta) {
    // 0.0 .. 1.0 in 0.1 increments.
    for (int k = 0; k <= 10; ++k) {
      const double beta = static_cast<double>(k) / 10.0;
      result.grid.emplace_back(beta, lr_at(beta, {}, beta));
    }
  } else {
    const TokenSetKind lexical =
        target == TuneTarget::AlphaUnigram ? TokenSetKind::Unigram : TokenSetKind::Digram;
    const auto lex_d = pairwise_distances(train, test, lexical, corpus, cfg.tokenize, threads);
    const double beta = cfg.beta.value_or(kDefaultBeta);

    // Base grid 0.90 .. 0.99 in 0.01 increments (values held in thousandths
    // so the extension continues on the exact same doubles).
    std::vector<int> grid_mils;
    for (int m = 900; m <= 990; m += 10) grid_mils.push_back(m);
    for (int m : grid_mils) {
      const double alpha = static_cast<double>(m) / 1000.0;
      result.grid.emplace_back(alpha, lr_at(alpha, lex_d, beta));
    }
    // Extend into 0.990 .. 1.000 in 0.001 increments when the base grid is
    // non-decreasing with its maximum at 0.99.
    bool non_decreasing = true;
    double base_max = result.grid.front().second;
    for (std::size_t k = 1; k < result.grid.size(); ++k) {
      if (result.grid[k].second < result.grid[k - 1].second) non_decreasing = false;
      base_max = std::max(base_max, result.grid[k].second);
    }
    if (non_decreasing && result.grid.back().second == base_max) {
      for (int m = 991; m <= 1000; ++m) {
        const double alpha = static_cast<double>(m) / 1000.0;
        result.grid.emplace_back(alpha, lr_at(alpha, lex_d, beta));
      }
    }
  }

  result.chosen = result.grid.front().first;
  double best = result.grid.front().second;
  for (const auto& [weight, lr] : result.grid) {
    if (lr > best) {  // ties keep the smaller weight
      best = lr;
      result.chosen = weight;
    }
  }
  return result;
}

void write_lr_csv(const LRReport& report, std::ostream& out) {
  out << "method,token_set,ar_size,top_t,lr,n_authors,match_all\n";
  for (const LRRow& row : report.rows) {
    out << to_string(row.method) << "," << to_string(row.token_set) << "," << row.ar_size << ","
        << row.top_t << "," << fmt_lr(row.lr) << "," << row.n_authors << ","
        << (row.match_all ? 1 : 0) << "\n";
  }
}

void write_tune_csv(const TuneResult& result, std::ostream& out) {
  out << "weight,lr,chosen\n";
  char buf[32];
  for (const auto& [weight, lr] : result.grid) {
    std::snprintf(buf, sizeof(buf), "%.3f", weight);
    out << buf << "," << fmt_lr(lr) << "," << (weight == result.chosen ? 1 : 0) << "\n";
  }
}

void write_config_json(const ExperimentConfig& cfg, std::ostream& out) {
  nlohmann::json j;
  j["x"] = cfg.x;
  j["ar_sizes"] = cfg.ar_sizes;
  j["top_t"] = cfg.top_t;
  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  std::vector<std::string> sets;
  for (TokenSetKind k : cfg.token_sets) sets.emplace_back(to_string(k));
  j["token_sets"] = sets;
  if (cfg.alpha) j["alpha"] = *cfg.alpha; else j["alpha"] = nullptr;
  if (cfg.beta) j["beta"] = *cfg.beta; else j["beta"] = nullptr;
  j["restricted_ir"] = cfg.restricted_ir;
  j["use_match_all"] = cfg.use_match_all;
  j["seed"] = cfg.seed;
  j["digram_across_runs"] = cfg.tokenize.digram_across_runs;
  out << j.dump(2) << "\n";
}

}  // namespace linkrev

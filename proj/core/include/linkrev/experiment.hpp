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
#include <optional>
#include <string>
#include <vector>

#include "linkrev/linker.hpp"

namespace linkrev {

// Study protocol settings. Per-author reviews are shuffled by a substream of
// `seed`; the last `x` form the anonymous pool, the rest the identified
// record. AR(i) is the first i reviews of the pool.
struct ExperimentConfig {
  std::size_t x = 60;  // anonymous-pool size
  std::vector<std::size_t> ar_sizes = {1, 5, 10, 20, 30, 40, 50, 60};
  std::vector<std::size_t> top_t = {1, 10, 50};
  std::vector<Method> methods = {Method::NB, Method::KLD};
  std::vector<TokenSetKind> token_sets = {
      TokenSetKind::Unigram,
      TokenSetKind::Digram,
      TokenSetKind::Rating,
      TokenSetKind::Category,
      TokenSetKind::UnigramRatingCategory,
      TokenSetKind::DigramRatingCategory,
  };
  // Overrides for the per-token-set default weights (beta 0.5, alpha 0.997
  // unigram / 0.97 digram).
  std::optional<double> alpha;
  std::optional<double> beta;
  bool restricted_ir = false;  // truncate each IR to the AR size (sampled)
  bool use_match_all = false;  // extra global-assignment Top-1 rows (KLD)
  std::uint64_t seed = 0;
  TokenizeOptions tokenize;

  void validate() const;  // throws InvalidConfig
  CombineWeights weights_for(TokenSetKind kind) const;
};

struct AuthorSplit {
  std::string author_id;
  std::vector<Review> identified;      // size N_U - x
  std::vector<Review> anonymous_pool;  // size x; AR(i) = first i reviews
};

// Deterministic per-author shuffle + split. Throws AuthorTooSmall when an
// author has fewer than x+1 reviews.
std::vector<AuthorSplit> split_records(const Corpus& corpus, const ExperimentConfig& cfg);

struct LRRow {
  Method method = Method::NB;
  TokenSetKind token_set = TokenSetKind::Unigram;
  std::size_t ar_size = 0;
  std::size_t top_t = 0;
  double lr = 0.0;
  std::size_t n_authors = 0;
  bool match_all = false;
};

struct LRReport {
  std::vector<LRRow> rows;  // sorted by (method, token_set, ar_size, top_t, match_all)
};

LRReport run_experiment(const Corpus& corpus, const ExperimentConfig& cfg, unsigned threads = 1);

enum class TuneTarget { Beta, AlphaUnigram, AlphaDigram };

std::string_view to_string(TuneTarget t);
std::optional<TuneTarget> tune_target_from_string(std::string_view name);

struct TuneResult {
  TuneTarget target = TuneTarget::Beta;
  std::vector<std::pair<double, double>> grid;  // (weight, top-1 LR), ascending weight
  double chosen = 0.0;                          // argmax LR, ties toward the smaller weight
};

// Grid search on a per-author train/test split (last 30 reviews test).
// Beta sweeps 0.0..1.0 step 0.1; alpha sweeps 0.90..0.99 step 0.01 and
// extends to 0.990..1.000 step 0.001 when the LR is non-decreasing across
// the base grid with its maximum at 0.99.
TuneResult tune_weights(const Corpus& corpus, const ExperimentConfig& cfg, TuneTarget target,
                        unsigned threads = 1);

// CSV with header "method,token_set,ar_size,top_t,lr,n_authors,match_all".
void write_lr_csv(const LRReport& report, std::ostream& out);
// CSV with header "weight,lr,chosen".
void write_tune_csv(const TuneResult& result, std::ostream& out);
// Config echo (JSON); the sidecar next to a report CSV.
void write_config_json(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace linkrev

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
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linkrev/errors.hpp"

namespace linkrev {

// One contribution: text, star rating, category, author id.
struct Review {
  std::string review_id;
  std::string author_id;
  std::string text;
  int rating = 1;  // 1..5
  std::string category;
};

// Closed, ordered set of category names.
class Taxonomy {
 public:
  explicit Taxonomy(std::vector<std::string> names);

  // "cat00".."catNN" names, zero-padded; the synthetic default is 28.
  static std::shared_ptr<const Taxonomy> synthetic(std::size_t size);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::uint32_t> index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Provenance {
  enum class Kind { Ingested, Synthetic };
  Kind kind = Kind::Ingested;
  std::uint64_t seed = 0;  // meaningful for Synthetic only
};

// Immutable review collection. Review order is preserved per author; the
// taxonomy is closed once constructed.
class Corpus {
 public:
  // If taxonomy is null it is derived from the categories observed, in
  // first-seen order. Validates ratings, category membership, id uniqueness.
  explicit Corpus(std::vector<Review> reviews,
                  std::shared_ptr<const Taxonomy> taxonomy = nullptr,
                  Provenance provenance = {});

  const std::vector<Review>& reviews() const { return reviews_; }
  const std::shared_ptr<const Taxonomy>& taxonomy() const { return taxonomy_; }
  const Provenance& provenance() const { return provenance_; }

  std::size_t author_count() const { return authors_.size(); }
  // Author ids in first-seen order.
  const std::vector<std::string>& authors() const { return authors_; }
  std::optional<std::size_t> author_index(std::string_view author_id) const;
  // Indices into reviews(), in insertion order.
  std::span<const std::size_t> author_review_indices(std::size_t author_idx) const;
  std::vector<Review> author_reviews(std::size_t author_idx) const;

 private:
  std::vector<Review> reviews_;
  std::shared_ptr<const Taxonomy> taxonomy_;
  Provenance provenance_;
  std::vector<std::string> authors_;
  std::vector<std::vector<std::size_t>> by_author_;
  std::unordered_map<std::string, std::size_t> author_index_;
};

// JSON-Lines I/O. One review per line with keys
// review_id, author_id, text, rating, category.
Corpus ingest_jsonl(std::istream& in);
Corpus ingest_jsonl(const std::filesystem::path& path);
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

// Summary of one per-author quantity plus its empirical CDF.
struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::vector<std::pair<double, double>> cdf;  // (value, cumulative fraction)
};

struct StatsReport {
  std::size_t n_authors = 0;
  std::size_t n_reviews = 0;
  SummaryStats reviews_per_author;
  SummaryStats mean_words_per_review;  // per-author mean review length in words
};

StatsReport corpus_stats(const Corpus& corpus);  // throws EmptyCorpus

// CSV with header "metric,value".
void write_stats_csv(const StatsReport& report, std::ostream& out);
// CSV with header "value,cum_fraction".
void write_cdf_csv(const SummaryStats& stats, std::ostream& out);

// Whitespace-delimited word count; used by corpus_stats.
std::size_t word_count(std::string_view text);

}  // namespace linkrev

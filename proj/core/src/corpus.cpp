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

#include "linkrev/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

namespace linkrev {

namespace {

// Stable float formatting for the CSV outputs.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

Taxonomy::Taxonomy(std::vector<std::string> names) : names_(std::move(names)) {
  index_.reserve(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw Error("duplicate category in taxonomy: " + names_[i]);
    }
  }
}

std::shared_ptr<const Taxonomy> Taxonomy::synthetic(std::size_t size) {
  std::size_t width = 2;
  for (std::size_t v = size > 0 ? size - 1 : 0; v >= 100; v /= 10) ++width;
  std::vector<std::string> names;
  names.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "cat%0*zu", static_cast<int>(width), i);
    names.emplace_back(buf);
  }
  return std::make_shared<const Taxonomy>(std::move(names));
}

std::optional<std::uint32_t> Taxonomy::index_of(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Corpus::Corpus(std::vector<Review> reviews, std::shared_ptr<const Taxonomy> taxonomy,
               Provenance provenance)
    : reviews_(std::move(reviews)), taxonomy_(std::move(taxonomy)), provenance_(provenance) {
  if (!taxonomy_) {
    std::vector<std::string> seen;
    std::unordered_set<std::string> seen_set;
    for (const Review& r : reviews_) {
      if (seen_set.insert(r.category).second) seen.push_back(r.category);
    }
    taxonomy_ = std::make_shared<const Taxonomy>(std::move(seen));
  }

  std::unordered_set<std::string> ids;
  ids.reserve(reviews_.size());
  for (std::size_t i = 0; i < reviews_.size(); ++i) {
    const Review& r = reviews_[i];
    if (r.rating < 1 || r.rating > 5) throw InvalidRating(0, r.rating);
    if (!ids.insert(r.review_id).second) throw DuplicateReviewId(r.review_id);
    if (!taxonomy_->index_of(r.category)) throw UnknownCategory(r.category);
    auto [it, inserted] = author_index_.emplace(r.author_id, authors_.size());
    if (inserted) {
      authors_.push_back(r.author_id);
      by_author_.emplace_back();
    }
    by_author_[it->second].push_back(i);
  }
}

std::optional<std::size_t> Corpus::author_index(std::string_view author_id) const {
  const auto it = author_index_.find(std::string(author_id));
  if (it == author_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> Corpus::author_review_indices(std::size_t author_idx) const {
  return by_author_.at(author_idx);
}

std::vector<Review> Corpus::author_reviews(std::size_t author_idx) const {
  std::vector<Review> out;
  const auto& idx = by_author_.at(author_idx);
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(reviews_[i]);
  return out;
}

Corpus ingest_jsonl(std::istream& in) {
  std::vector<Review> reviews;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw MalformedLine(line_no, "not a JSON object");
    for (const char* key : {"review_id", "author_id", "text", "rating", "category"}) {
      if (!j.contains(key)) throw MalformedLine(line_no, std::string("missing key ") + key);
    }
    if (!j["review_id"].is_string() || !j["author_id"].is_string() || !j["text"].is_string() ||
        !j["category"].is_string()) {
      throw MalformedLine(line_no, "wrong field type");
    }
    if (!j["rating"].is_number()) throw MalformedLine(line_no, "rating is not a number");
    const double raw_rating = j["rating"].get<double>();
    const int rating = static_cast<int>(raw_rating);
    if (rating != raw_rating || rating < 1 || rating > 5) {
      throw InvalidRating(line_no, static_cast<int>(raw_rating));
    }
    Review r;
    r.review_id = j["review_id"].get<std::string>();
    r.author_id = j["author_id"].get<std::string>();
    r.text = j["text"].get<std::string>();
    r.rating = rating;
    r.category = j["category"].get<std::string>();
    if (!ids.insert(r.review_id).second) throw DuplicateReviewId(r.review_id);
    reviews.push_back(std::move(r));
  }
  return Corpus(std::move(reviews), nullptr, {Provenance::Kind::Ingested, 0});
}

Corpus ingest_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ingest_jsonl(in);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Review& r : corpus.reviews()) {
    const nlohmann::json j = {
        {"review_id", r.review_id}, {"author_id", r.author_id}, {"text", r.text},
        {"rating", r.rating},       {"category", r.category},
    };
    out << j.dump() << '\n';
  }
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_jsonl(corpus, out);
}

std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!ws && !in_word) ++n;
    in_word = !ws;
  }
  return n;
}

namespace {

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  s.min = values.front();
  s.max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool last_of_value = (i + 1 == values.size()) || (values[i + 1] != values[i]);
    if (last_of_value) s.cdf.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  return s;
}

}  // namespace

StatsReport corpus_stats(const Corpus& corpus) {
  if (corpus.reviews().empty()) throw EmptyCorpus();
  StatsReport report;
  report.n_authors = corpus.author_count();
  report.n_reviews = corpus.reviews().size();

  std::vector<double> counts;
  std::vector<double> mean_words;
  counts.reserve(report.n_authors);
  mean_words.reserve(report.n_authors);
  for (std::size_t a = 0; a < corpus.author_count(); ++a) {
    const auto idx = corpus.author_review_indices(a);
    counts.push_back(static_cast<double>(idx.size()));
    std::size_t words = 0;
    for (std::size_t i : idx) words += word_count(corpus.reviews()[i].text);
    mean_words.push_back(static_cast<double>(words) / static_cast<double>(idx.size()));
  }
  report.reviews_per_author = summarize(std::move(counts));
  report.mean_words_per_review = summarize(std::move(mean_words));
  return report;
}

void write_stats_csv(const StatsReport& report, std::ostream& out) {
  out << "metric,value\n";
  out << "n_authors," << report.n_authors << "\n";
  out << "n_reviews," << report.n_reviews << "\n";
  const auto emit = [&](const char* prefix, const SummaryStats& s) {
    out << prefix << "_min," << fmt_double(s.min) << "\n";
    out << prefix << "_max," << fmt_double(s.max) << "\n";
    out << prefix << "_mean," << fmt_double(s.mean) << "\n";
    out << prefix << "_stddev," << fmt_double(s.stddev) << "\n";
  };
  emit("reviews_per_author", report.reviews_per_author);
  emit("mean_words_per_review", report.mean_words_per_review);
}

void write_cdf_csv(const SummaryStats& stats, std::ostream& out) {
  out << "value,cum_fraction\n";
  for (const auto& [value, fraction] : stats.cdf) {
    out << fmt_double(value) << "," << fmt_double(fraction) << "\n";
  }
}

}  // namespace linkrev

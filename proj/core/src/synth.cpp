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

#include "linkrev/synth.hpp"

#include <cmath>
#include <cstdio>

#include "linkrev/parallel.hpp"
#include "linkrev/rng.hpp"

namespace linkrev {

namespace {

// Log-space spread of the per-review word count.
constexpr double kWordCountLogSigma = 0.5;
// Word length is 1 + Poisson(3.5) letters, mean ~4.5.
constexpr double kWordLengthLambda = 3.5;

const std::uint64_t kSynthTag = fnv1a64("synth.author");

std::string padded_id(char prefix, std::size_t index, std::size_t max_value) {
  std::size_t width = 1;
  for (std::size_t v = max_value; v >= 10; v /= 10) ++width;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, static_cast<int>(width), index);
  return buf;
}

Sampler author_stream(const SynthConfig& cfg, std::size_t author_index) {
  return Sampler(make_stream({cfg.seed, kSynthTag, author_index}));
}

AuthorProfile draw_profile(Sampler& rng, const SynthConfig& cfg) {
  AuthorProfile p;
  const auto letters = rng.dirichlet(26, cfg.letter_concentration);
  std::copy(letters.begin(), letters.end(), p.letter.begin());
  const auto ratings = rng.dirichlet(5, cfg.rating_concentration);
  std::copy(ratings.begin(), ratings.end(), p.rating.begin());
  p.category = rng.dirichlet(cfg.taxonomy_size, cfg.category_concentration);
  return p;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_authors < 1) throw InvalidConfig("n_authors must be >= 1");
  if (reviews_per_author < 1) throw InvalidConfig("reviews_per_author must be >= 1");
  if (!(mean_words > 0.0)) throw InvalidConfig("mean_words must be positive");
  if (!(letter_concentration > 0.0)) throw InvalidConfig("letter_concentration must be positive");
  if (!(rating_concentration > 0.0)) throw InvalidConfig("rating_concentration must be positive");
  if (!(category_concentration > 0.0)) {
    throw InvalidConfig("category_concentration must be positive");
  }
  if (taxonomy_size < 1) throw InvalidConfig("taxonomy_size must be >= 1");
}

AuthorProfile author_profile(const SynthConfig& cfg, std::size_t author_index) {
  cfg.validate();
  Sampler rng = author_stream(cfg, author_index);
  return draw_profile(rng, cfg);
}

Corpus generate_synthetic(const SynthConfig& cfg, unsigned threads) {
  cfg.validate();
  auto taxonomy = Taxonomy::synthetic(cfg.taxonomy_size);

  std::vector<std::vector<Review>> per_author(cfg.n_authors);
  parallel_for(cfg.n_authors, threads, [&](std::size_t a) {
    Sampler rng = author_stream(cfg, a);
    const AuthorProfile profile = draw_profile(rng, cfg);
    const std::string author_id = padded_id('a', a, cfg.n_authors - 1);

    std::vector<Review>& reviews = per_author[a];
    reviews.reserve(cfg.reviews_per_author);
    std::string text;
    for (std::size_t r = 0; r < cfg.reviews_per_author; ++r) {
      const double raw = rng.lognormal_mean(cfg.mean_words, kWordCountLogSigma);
      const std::size_t n_words = std::max<std::size_t>(1, std::llround(raw));
      text.clear();
      for (std::size_t w = 0; w < n_words; ++w) {
        if (w > 0) text.push_back(' ');
        const std::size_t len = 1 + rng.poisson(kWordLengthLambda);
        for (std::size_t i = 0; i < len; ++i) {
          text.push_back(static_cast<char>('a' + rng.categorical(profile.letter)));
        }
      }
      Review review;
      review.author_id = author_id;
      review.review_id = author_id + "-" + padded_id('r', r, cfg.reviews_per_author - 1);
      review.text = text;
      review.rating = static_cast<int>(rng.categorical(profile.rating)) + 1;
      review.category = taxonomy->name(rng.categorical(profile.category));
      reviews.push_back(std::move(review));
    }
  });

  std::vector<Review> all;
  all.reserve(cfg.n_authors * cfg.reviews_per_author);
  for (auto& reviews : per_author) {
    for (auto& r : reviews) all.push_back(std::move(r));
  }
  return Corpus(std::move(all), std::move(taxonomy), {Provenance::Kind::Synthetic, cfg.seed});
}

}  // namespace linkrev

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

#include <array>
#include <cstdint>
#include <vector>

#include "linkrev/corpus.hpp"

namespace linkrev {

// Deterministic synthetic corpus generator. Every author gets a profile
// (letter / rating / category distributions) drawn from a substream keyed by
// (seed, author index), so generation is reproducible at any parallelism.
struct SynthConfig {
  std::size_t n_authors = 1;
  std::size_t reviews_per_author = 1;
  std::uint64_t seed = 0;
  double mean_words = 149.0;
  double letter_concentration = 1.0;    // symmetric Dirichlet over 26 letters
  double rating_concentration = 1.0;    // over 5 stars
  double category_concentration = 1.0;  // over the taxonomy
  std::size_t taxonomy_size = 28;

  void validate() const;  // throws InvalidConfig
};

struct AuthorProfile {
  std::array<double, 26> letter{};
  std::array<double, 5> rating{};
  std::vector<double> category;
};

// The profile the generator uses for this author; exposed so tests can check
// empirical distributions against it.
AuthorProfile author_profile(const SynthConfig& cfg, std::size_t author_index);

Corpus generate_synthetic(const SynthConfig& cfg, unsigned threads = 1);

}  // namespace linkrev

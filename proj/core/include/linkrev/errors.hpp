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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linkrev {

// Base class for every data/usage error the library reports.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MalformedLine : Error {
  std::size_t line_no;
  MalformedLine(std::size_t line, const std::string& detail)
      : Error("malformed line " + std::to_string(line) + ": " + detail), line_no(line) {}
};

struct InvalidRating : Error {
  std::size_t line_no;  // 0 when the rating did not come from a file
  InvalidRating(std::size_t line, int rating)
      : Error("rating " + std::to_string(rating) + " out of range 1..5" +
              (line ? " at line " + std::to_string(line) : std::string())),
        line_no(line) {}
};

struct DuplicateReviewId : Error {
  std::string id;
  explicit DuplicateReviewId(std::string review_id)
      : Error("duplicate review id: " + review_id), id(std::move(review_id)) {}
};

struct InvalidConfig : Error {
  explicit InvalidConfig(const std::string& detail) : Error("invalid config: " + detail) {}
};

struct EmptyCorpus : Error {
  EmptyCorpus() : Error("corpus is empty") {}
};

struct UnknownCategory : Error {
  std::string category;
  explicit UnknownCategory(std::string name)
      : Error("category not in taxonomy: " + name), category(std::move(name)) {}
};

struct OutOfVocabulary : Error {
  explicit OutOfVocabulary(const std::string& token_name)
      : Error("token outside the model vocabulary: " + token_name) {}
};

struct VocabularyMismatch : Error {
  VocabularyMismatch() : Error("distributions are over different vocabularies") {}
};

struct EmptyIndex : Error {
  EmptyIndex() : Error("model index has no accounts") {}
};

struct EmptyRecord : Error {
  EmptyRecord() : Error("anonymous record has no reviews") {}
};

struct UnknownAccount : Error {
  std::string account_id;
  explicit UnknownAccount(std::string id)
      : Error("account not present in ranked list: " + id), account_id(std::move(id)) {}
};

struct SizeMismatch : Error {
  explicit SizeMismatch(const std::string& detail) : Error("size mismatch: " + detail) {}
};

struct NonKldInput : Error {
  NonKldInput() : Error("match_all requires KLD ranked lists") {}
};

struct AuthorTooSmall : Error {
  std::string author_id;
  std::size_t count;
  AuthorTooSmall(std::string id, std::size_t n_reviews, std::size_t required)
      : Error("author " + id + " has " + std::to_string(n_reviews) + " reviews, needs at least " +
              std::to_string(required)),
        author_id(std::move(id)),
        count(n_reviews) {}
};

}  // namespace linkrev

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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "linkrev/experiment.hpp"
#include "linkrev/synth.hpp"

namespace fs = std::filesystem;
using namespace linkrev;

namespace {

// ---- criterion 7 corpus shape -------------------------------------------
// 200 authors with subtly distinct letter profiles: weak at AR size 1,
// near-perfect at size 60, so the Top-1 LR climbs across the whole range
// instead of saturating early. Rating/category profiles carry moderate
// signal so their combination visibly beats either alone.
constexpr std::size_t kQualAuthors = 200;
constexpr std::size_t kQualReviews = 330;
constexpr std::uint64_t kQualCorpusSeed = 4242;
constexpr double kQualLetterConcentration = 250.0;
constexpr double kQualRatingConcentration = 2.0;
constexpr double kQualCategoryConcentration = 4.0;

std::ostringstream g_detail;

#define EXPECT(cond, msg)                                  \
  do {                                                     \
    if (!(cond)) {                                         \
      g_detail << "      " << msg << "\n";                 \
      ok = false;                                          \
    }                                                      \
  } while (0)

Token random_token(const TokenSet& ts, std::mt19937_64& rng) {
  std::vector<Token> candidates;
  const TokenSetKind kind = ts.kind();
  if (kind_has_unigrams(kind)) {
    candidates.push_back(Token{TokenNamespace::Letter, std::uint32_t(rng() % 26)});
  }
  if (kind_has_digrams(kind)) {
    candidates.push_back(Token{TokenNamespace::LetterPair, std::uint32_t(rng() % 676)});
  }
  if (kind_has_rating(kind)) candidates.push_back(Token::rating(1 + int(rng() % 5)));
  if (kind_has_category(kind)) {
    candidates.push_back(Token::category(std::uint32_t(rng() % ts.taxonomy()->size())));
  }
  return candidates[rng() % candidates.size()];
}

double find_lr(const LRReport& report, Method m, TokenSetKind ts, std::size_t ar_size,
               std::size_t t, bool match_all = false) {
  for (const LRRow& row : report.rows) {
    if (row.method == m && row.token_set == ts && row.ar_size == ar_size && row.top_t == t &&
        row.match_all == match_all) {
      return row.lr;
    }
  }
  throw Error("row not found in report");
}

// Spearman rank correlation with tie-averaged ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double mean_rank = (double(i) + double(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = mean_rank;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= double(n);
  my /= double(n);
  double num = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

// ---- criteria -------------------------------------------------------------

bool criterion_vocabulary() {
  bool ok = true;
  const auto taxonomy = Taxonomy::synthetic(28);
  EXPECT(TokenSet(TokenSetKind::Unigram).vocab_size() == 26, "unigram vocabulary != 26");
  EXPECT(TokenSet(TokenSetKind::Digram).vocab_size() == 676, "digram vocabulary != 676");
  EXPECT(TokenSet(TokenSetKind::Rating).vocab_size() == 5, "rating vocabulary != 5");
  EXPECT(TokenSet(TokenSetKind::Category, taxonomy).vocab_size() == 28,
         "category vocabulary != 28");
  EXPECT(TokenSet(TokenSetKind::UnigramRatingCategory, taxonomy).vocab_size() == 59,
         "combined unigram vocabulary != 59");
  EXPECT(TokenSet(TokenSetKind::DigramRatingCategory, taxonomy).vocab_size() == 709,
         "combined digram vocabulary != 709");
  return ok;
}

bool criterion_smoothing() {
  bool ok = true;
  std::mt19937_64 rng(101);
  const auto taxonomy = Taxonomy::synthetic(28);
  for (TokenSetKind kind : kAllTokenSetKinds) {
    const TokenSet ts(kind, taxonomy);
    for (int iter = 0; iter < 1000 && ok; ++iter) {
      TokenCounts counts(ts);
      const std::size_t n = rng() % 2000;
      for (std::size_t i = 0; i < n; ++i) counts.add_token(random_token(ts, rng));
      const auto d = smoothed_distribution(counts);
      double sum = 0.0;
      double min_p = 1.0;
      for (double p : d.probs()) {
        sum += p;
        min_p = std::min(min_p, p);
      }
      EXPECT(min_p > 0.0, "non-positive probability for " << to_string(kind));
      EXPECT(std::abs(sum - 1.0) < 1e-9,
             "sum " << sum << " deviates by " << std::abs(sum - 1.0) << " for "
                    << to_string(kind));
    }
  }
  return ok;
}

bool criterion_sym_kld() {
  bool ok = true;
  std::mt19937_64 rng(202);
  const TokenSet rating_set(TokenSetKind::Rating);
  for (int iter = 0; iter < 1000 && ok; ++iter) {
    TokenCounts a(rating_set);
    TokenCounts b(rating_set);
    const std::size_t na = rng() % 60;
    const std::size_t nb = rng() % 60;
    for (std::size_t i = 0; i < na; ++i) a.add_token(Token::rating(1 + int(rng() % 5)));
    for (std::size_t i = 0; i < nb; ++i) b.add_token(Token::rating(1 + int(rng() % 5)));
    const auto p = smoothed_distribution(a);
    const auto q = smoothed_distribution(b);
    const double d = sym_kld(p, q);
    EXPECT(d >= 0.0, "negative divergence " << d);
    EXPECT(d == sym_kld(q, p), "asymmetric result at iteration " << iter);
    const bool equal_probs = std::equal(p.probs().begin(), p.probs().end(), q.probs().begin());
    EXPECT((d == 0.0) == equal_probs, "zero-iff-equal violated at iteration " << iter);
  }

  // (0.75, 0.25) vs (0.25, 0.75) over a two-token vocabulary.
  const auto taxonomy =
      std::make_shared<const Taxonomy>(std::vector<std::string>{"x", "y"});
  const TokenSet two(TokenSetKind::Category, taxonomy);
  TokenCounts pc(two);
  pc.add_token(Token::category(0));
  pc.add_token(Token::category(0));
  TokenCounts qc(two);
  qc.add_token(Token::category(1));
  qc.add_token(Token::category(1));
  const double hand = sym_kld(smoothed_distribution(pc), smoothed_distribution(qc));
  EXPECT(std::abs(hand - 0.549306) <= 1e-6, "hand value " << hand << " != 0.549306");
  return ok;
}

bool criterion_rank_equivalence() {
  bool ok = true;
  std::mt19937_64 rng(303);
  const TokenSet ts(TokenSetKind::Unigram);
  for (int iter = 0; iter < 100 && ok; ++iter) {
    const std::size_t n_accounts = 2 + rng() % 9;  // <= 10
    std::vector<SmoothedDistribution> models;
    for (std::size_t k = 0; k < n_accounts; ++k) {
      TokenCounts tc(ts);
      const std::size_t n = 1 + rng() % 80;
      for (std::size_t i = 0; i < n; ++i) {
        tc.add_token(Token{TokenNamespace::Letter, std::uint32_t(rng() % 26)});
      }
      models.push_back(smoothed_distribution(tc));
    }
    TokenCounts ar(ts);
    const std::size_t n_tokens = 1 + rng() % 50;  // <= 50
    for (std::size_t i = 0; i < n_tokens; ++i) {
      ar.add_token(Token{TokenNamespace::Letter, std::uint32_t(rng() % 26)});
    }

    std::vector<double> nb(n_accounts);
    std::vector<double> div(n_accounts);
    for (std::size_t k = 0; k < n_accounts; ++k) {
      nb[k] = nb_log_likelihood(ar, models[k]);
      double v = 0.0;
      for (std::size_t t = 0; t < 26; ++t) {
        if (ar.count_at(t) == 0) continue;
        const double e = double(ar.count_at(t)) / double(ar.total());
        v += e * std::log(e / models[k].prob_at(t));
      }
      div[k] = v;
    }
    std::vector<std::size_t> nb_order(n_accounts);
    std::vector<std::size_t> div_order(n_accounts);
    for (std::size_t k = 0; k < n_accounts; ++k) nb_order[k] = div_order[k] = k;
    std::sort(nb_order.begin(), nb_order.end(), [&](std::size_t a, std::size_t b) {
      if (nb[a] != nb[b]) return nb[a] > nb[b];
      return a < b;
    });
    std::sort(div_order.begin(), div_order.end(), [&](std::size_t a, std::size_t b) {
      if (div[a] != div[b]) return div[a] < div[b];
      return a < b;
    });
    EXPECT(nb_order == div_order, "rankings diverge at iteration " << iter);
  }
  return ok;
}

bool criterion_match_all() {
  bool ok = true;
  std::mt19937_64 rng(404);

  const auto lists_from_matrix = [](const std::vector<std::vector<double>>& d) {
    const std::size_t n = d.size();
    std::vector<RankedList> lists(n);
    for (std::size_t ar = 0; ar < n; ++ar) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "ar%03zu", ar);
      lists[ar].ar_id = buf;
      lists[ar].method = Method::KLD;
      for (std::size_t acc = 0; acc < n; ++acc) {
        std::snprintf(buf, sizeof(buf), "ir%03zu", acc);
        lists[ar].entries.push_back({buf, d[acc][ar]});
      }
      std::sort(lists[ar].entries.begin(), lists[ar].entries.end(),
                [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score < b.score;
                  return a.account_id < b.account_id;
                });
    }
    return lists;
  };

  // Bijection on random instances up to 50x50.
  for (int iter = 0; iter < 100 && ok; ++iter) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (auto& row : d) {
      for (double& v : row) v = double(rng() % 1000000) / 10000.0;
    }
    const MatchAssignment m = match_all(lists_from_matrix(d));
    std::set<std::string> accounts;
    std::set<std::string> ars;
    for (const auto& [acc, ar] : m.pairs) {
      accounts.insert(acc);
      ars.insert(ar);
    }
    EXPECT(m.pairs.size() == n && accounts.size() == n && ars.size() == n,
           "not a bijection for n=" << n << " at iteration " << iter);
  }

  // The 2x2 contention example.
  const MatchAssignment contention =
      match_all(lists_from_matrix({{0.1, 0.2}, {0.5, 0.3}}));
  const std::pair<std::string, std::string> want0("ir000", "ar000");
  const std::pair<std::string, std::string> want1("ir001", "ar001");
  const bool contention_ok = contention.pairs.size() == 2 && contention.pairs[0] == want0 &&
                             contention.pairs[1] == want1;
  EXPECT(contention_ok, "2x2 contention resolved incorrectly");

  // Identity on diagonally dominant matrices.
  for (int iter = 0; iter < 100 && ok; ++iter) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = (i == j) ? double(rng() % 100) / 1000.0
                           : 0.2 + double(rng() % 10000) / 1000.0;
      }
    }
    const MatchAssignment m = match_all(lists_from_matrix(d));
    for (std::size_t i = 0; i < n && ok; ++i) {
      EXPECT(m.pairs[i].first.substr(2) == m.pairs[i].second.substr(2),
             "diagonal instance not matched to identity at iteration " << iter);
    }
  }
  return ok;
}

bool criterion_protocol() {
  bool ok = true;
  SynthConfig synth;
  synth.n_authors = 30;
  synth.reviews_per_author = 70;
  synth.seed = 606;
  const Corpus corpus = generate_synthetic(synth, 0);

  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.use_match_all = true;
  cfg.token_sets.push_back(TokenSetKind::RatingCategory);

  // AR nesting and IR/AR disjointness on the split itself.
  const auto splits = split_records(corpus, cfg);
  for (const AuthorSplit& s : splits) {
    std::set<std::string> ir;
    for (const Review& r : s.identified) ir.insert(r.review_id);
    for (const Review& r : s.anonymous_pool) {
      EXPECT(ir.count(r.review_id) == 0, "IR and AR share review " << r.review_id);
    }
    EXPECT(s.anonymous_pool.size() == cfg.x, "pool size != x");
    // AR(i) is the first i pool reviews, so AR(i) must prefix AR(j) for i<j.
    for (std::size_t i = 1; i < cfg.ar_sizes.size(); ++i) {
      const std::size_t small = cfg.ar_sizes[i - 1];
      const std::size_t large = cfg.ar_sizes[i];
      const std::vector<Review> ar_small(s.anonymous_pool.begin(),
                                         s.anonymous_pool.begin() + small);
      const std::vector<Review> ar_large(s.anonymous_pool.begin(),
                                         s.anonymous_pool.begin() + large);
      bool prefix = true;
      for (std::size_t k = 0; k < ar_small.size(); ++k) {
        prefix &= ar_small[k].review_id == ar_large[k].review_id;
      }
      EXPECT(prefix, "AR prefix nesting violated");
    }
  }

  const LRReport report = run_experiment(corpus, cfg, 0);
  for (Method m : cfg.methods) {
    for (TokenSetKind ts : cfg.token_sets) {
      for (std::size_t size : cfg.ar_sizes) {
        double prev = -1.0;
        for (std::size_t t : cfg.top_t) {
          const double lr = find_lr(report, m, ts, size, t);
          EXPECT(lr >= prev, "LR not monotone in T for " << to_string(m) << "/"
                                                         << to_string(ts) << "@" << size);
          EXPECT(lr >= 0.0 && lr <= 1.0, "LR outside [0,1]");
          prev = lr;
        }
      }
    }
  }
  return ok;
}

bool criterion_qualitative() {
  bool ok = true;
  SynthConfig synth;
  synth.n_authors = kQualAuthors;
  synth.reviews_per_author = kQualReviews;
  synth.seed = kQualCorpusSeed;
  synth.letter_concentration = kQualLetterConcentration;
  synth.rating_concentration = kQualRatingConcentration;
  synth.category_concentration = kQualCategoryConcentration;
  const Corpus corpus = generate_synthetic(synth, 0);

  ExperimentConfig cfg;
  cfg.top_t = {1};
  cfg.methods = {Method::NB, Method::KLD};
  cfg.token_sets = {TokenSetKind::Digram, TokenSetKind::Rating, TokenSetKind::Category,
                    TokenSetKind::RatingCategory, TokenSetKind::DigramRatingCategory};
  cfg.use_match_all = true;
  cfg.seed = 1;
  const LRReport first = run_experiment(corpus, cfg, 0);

  // (a) digram-NB: near-perfect at AR size 60, weak at size 1.
  const double lr60 = find_lr(first, Method::NB, TokenSetKind::Digram, 60, 1);
  const double lr1 = find_lr(first, Method::NB, TokenSetKind::Digram, 1, 1);
  EXPECT(lr60 >= 0.95, "digram NB Top-1 at AR=60 is " << lr60 << " < 0.95");
  EXPECT(lr1 <= 0.5, "digram NB Top-1 at AR=1 is " << lr1 << " > 0.5");

  // (b) Spearman(ar_size, Top-1 LR) averaged over 5 split seeds.
  std::vector<double> sizes(cfg.ar_sizes.begin(), cfg.ar_sizes.end());
  double rho_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<double> lrs;
    if (seed == 1) {
      for (std::size_t s : cfg.ar_sizes) {
        lrs.push_back(find_lr(first, Method::NB, TokenSetKind::Digram, s, 1));
      }
    } else {
      ExperimentConfig sweep = cfg;
      sweep.methods = {Method::NB};
      sweep.token_sets = {TokenSetKind::Digram};
      sweep.use_match_all = false;
      sweep.seed = seed;
      const LRReport r = run_experiment(corpus, sweep, 0);
      for (std::size_t s : sweep.ar_sizes) {
        lrs.push_back(find_lr(r, Method::NB, TokenSetKind::Digram, s, 1));
      }
    }
    rho_sum += spearman(sizes, lrs);
  }
  const double rho = rho_sum / 5.0;
  EXPECT(rho >= 0.9, "mean Spearman(ar_size, Top-1 LR) is " << rho << " < 0.9");

  // (c) rating+category beats each component alone at AR size 60.
  const double rc = find_lr(first, Method::NB, TokenSetKind::RatingCategory, 60, 1);
  const double rating_only = find_lr(first, Method::NB, TokenSetKind::Rating, 60, 1);
  const double category_only = find_lr(first, Method::NB, TokenSetKind::Category, 60, 1);
  EXPECT(rc > rating_only,
         "rating+category " << rc << " does not exceed rating " << rating_only);
  EXPECT(rc > category_only,
         "rating+category " << rc << " does not exceed category " << category_only);

  // (d) the global assignment never scores below per-record KLD Top-1.
  const double kld_top1 =
      find_lr(first, Method::KLD, TokenSetKind::DigramRatingCategory, 60, 1);
  const double match_all_top1 =
      find_lr(first, Method::KLD, TokenSetKind::DigramRatingCategory, 60, 1, true);
  EXPECT(match_all_top1 >= kld_top1,
         "match-all " << match_all_top1 << " below per-record " << kld_top1);
  return ok;
}

bool criterion_determinism() {
  bool ok = true;
  const fs::path dir =
      fs::temp_directory_path() / ("linkrev_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const auto shell = [&](const std::string& args) {
    const std::string cmd = std::string(LINKREV_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };

  const std::string corpus = (dir / "c.jsonl").string();
  EXPECT(shell("synth --authors 8 --reviews 70 --seed 99 -o " + corpus) == 0,
         "synth invocation failed");
  const std::string flags =
      "run " + corpus + " --tokens digram,unigram_rating_category --ar-sizes 1,10,30 "
      "--top-t 1,10 --match-all --seed 17 ";
  EXPECT(shell(flags + "--threads 1 -o " + (dir / "t1.csv").string()) == 0, "run t1 failed");
  EXPECT(shell(flags + "--threads 1 -o " + (dir / "t1b.csv").string()) == 0, "run rerun failed");
  EXPECT(shell(flags + "--threads 2 -o " + (dir / "t2.csv").string()) == 0, "run t2 failed");
  EXPECT(shell(flags + "--threads 4 -o " + (dir / "t4.csv").string()) == 0, "run t4 failed");

  const std::string t1 = slurp(dir / "t1.csv");
  EXPECT(!t1.empty(), "empty report");
  EXPECT(t1 == slurp(dir / "t1b.csv"), "identical invocations produced different bytes");
  EXPECT(t1 == slurp(dir / "t2.csv"), "thread count 2 changed the report bytes");
  EXPECT(t1 == slurp(dir / "t4.csv"), "thread count 4 changed the report bytes");
  EXPECT(slurp(dir / "t1.csv.config.json") == slurp(dir / "t2.csv.config.json"),
         "sidecar config differs across thread counts");

  std::error_code ec;
  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* label;
    std::function<bool()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "vocabulary sizes 26/676/5/28 and 59/709", criterion_vocabulary},
      {2, "laplace smoothing: positive, sums to 1 (1000 random counts/set)", criterion_smoothing},
      {3, "symmetric KLD: >=0, symmetric, zero iff equal, hand value", criterion_sym_kld},
      {4, "NB ranking equals ascending asymmetric KLD (100 instances)", criterion_rank_equivalence},
      {5, "match-all: bijection, 2x2 contention, diagonal identity", criterion_match_all},
      {6, "protocol exactness: LR monotone in T, AR nesting, IR/AR disjoint", criterion_protocol},
      {7, "qualitative LR shape on the 200-author synthetic corpus", criterion_qualitative},
      {8, "byte-identical run output at any thread count", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    g_detail.str("");
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      g_detail << "      exception: " << e.what() << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %d: %s  (%.1fs)\n", ok ? "PASS" : "FAIL", c.number, c.label,
                secs);
    if (!ok) {
      std::fputs(g_detail.str().c_str(), stdout);
      ++failures;
    }
  }
  return failures;
}

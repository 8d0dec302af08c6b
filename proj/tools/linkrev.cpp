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

// Review-linkability toolkit CLI.
//
//   linkrev synth      deterministic synthetic review corpus -> JSONL
//   linkrev stats      corpus summary -> metric/CDF CSVs
//   linkrev run        full linkability-ratio experiment -> report CSV
//   linkrev tune       combine-weight grid search -> weight/LR CSV
//   linkrev link       rank accounts for one anonymous record -> CSV
//   linkrev match-all  global greedy assignment of an AR set -> CSV
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linkrev/experiment.hpp"
#include "linkrev/parallel.hpp"
#include "linkrev/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace linkrev;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_verbose = false;

void note(const std::string& message) {
  if (g_verbose) std::cerr << "linkrev: " << message << "\n";
}

unsigned threads_from_env() {
  if (const char* env = std::getenv("LINKREV_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;  // auto
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Writes via `emit` either to the file or, with an empty path, to stdout.
template <class F>
void with_output(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output(path);
    emit(out);
  }
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& name : names) {
    const auto m = method_from_string(name);
    if (!m) throw UsageError("unknown method: " + name);
    out.push_back(*m);
  }
  return out;
}

std::vector<TokenSetKind> parse_token_sets(const std::vector<std::string>& names) {
  std::vector<TokenSetKind> out;
  for (const auto& name : names) {
    const auto k = token_set_kind_from_string(name);
    if (!k) throw UsageError("unknown token set: " + name);
    out.push_back(*k);
  }
  return out;
}

// Options shared by every experiment-flavored subcommand.
struct RunFlags {
  std::string corpus_path;
  std::string output;
  ExperimentConfig cfg;
  std::vector<std::string> method_names{"nb", "kld"};
  std::vector<std::string> token_names{"unigram",  "digram",
                                       "rating",   "category",
                                       "unigram_rating_category",
                                       "digram_rating_category"};
  double alpha = -1.0;  // <0 means "use the per-token-set default"
  double beta = -1.0;
  unsigned threads = threads_from_env();
};

void add_weight_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--alpha", flags.alpha, "Lexical weight override (default 0.997/0.97)");
  cmd->add_option("--beta", flags.beta, "Rating-vs-category weight override (default 0.5)");
}

void finalize_weights(RunFlags& flags) {
  if (flags.alpha >= 0.0) flags.cfg.alpha = flags.alpha;
  if (flags.beta >= 0.0) flags.cfg.beta = flags.beta;
}

Corpus load_corpus(const std::string& path) {
  Corpus corpus = ingest_jsonl(fs::path(path));
  note("loaded " + std::to_string(corpus.reviews().size()) + " reviews by " +
       std::to_string(corpus.author_count()) + " authors from " + path);
  return corpus;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Review-linkability analysis toolkit"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", g_verbose, "Progress notes on stderr");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus (JSONL)");
  SynthConfig synth_cfg;
  std::string synth_out;
  unsigned synth_threads = threads_from_env();
  synth->add_option("--authors", synth_cfg.n_authors, "Number of authors")->required();
  synth->add_option("--reviews", synth_cfg.reviews_per_author, "Reviews per author")->required();
  synth->add_option("--seed", synth_cfg.seed, "Generator seed")->required();
  synth->add_option("--mean-words", synth_cfg.mean_words, "Mean review length in words")->capture_default_str();
  synth->add_option("--letter-conc", synth_cfg.letter_concentration,
                    "Dirichlet concentration of letter profiles")->capture_default_str();
  synth->add_option("--rating-conc", synth_cfg.rating_concentration,
                    "Dirichlet concentration of rating profiles")->capture_default_str();
  synth->add_option("--category-conc", synth_cfg.category_concentration,
                    "Dirichlet concentration of category profiles")->capture_default_str();
  synth->add_option("--taxonomy", synth_cfg.taxonomy_size, "Number of categories")->capture_default_str();
  synth->add_option("--threads", synth_threads, "Worker threads (0 = all cores)");
  synth->add_option("-o,--output", synth_out, "Output JSONL path (default: stdout)");

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "Summarize a corpus into metric and CDF CSVs");
  std::string stats_corpus;
  std::string stats_dir = ".";
  stats->add_option("corpus", stats_corpus, "Corpus JSONL")->required();
  stats->add_option("-o,--outdir", stats_dir, "Directory for stats.csv and cdf_*.csv")->capture_default_str();

  // ---- run ----
  auto* run = app.add_subcommand("run", "Run the linkability experiment and write the LR report");
  RunFlags run_flags;
  run->add_option("corpus", run_flags.corpus_path, "Corpus JSONL")->required();
  run->add_option("--seed", run_flags.cfg.seed, "Split/shuffle seed")->required();
  run->add_option("--x", run_flags.cfg.x, "Anonymous-pool size per author")->capture_default_str();
  run->add_option("--ar-sizes", run_flags.cfg.ar_sizes, "Anonymous-record sizes")->capture_default_str()
      ->delimiter(',');
  run->add_option("--top-t", run_flags.cfg.top_t, "Hit thresholds")->capture_default_str()->delimiter(',');
  run->add_option("--methods,--method", run_flags.method_names, "nb,kld")->capture_default_str()->delimiter(',');
  run->add_option("--tokens", run_flags.token_names, "Token sets")->capture_default_str()->delimiter(',');
  add_weight_flags(run, run_flags);
  run->add_flag("--restricted-ir", run_flags.cfg.restricted_ir,
                "Down-sample each identified record to the AR size");
  run->add_flag("--match-all", run_flags.cfg.use_match_all,
                "Also report global-assignment Top-1 rows (KLD)");
  run->add_flag("--digram-across-runs", run_flags.cfg.tokenize.digram_across_runs,
                "Pair letters across non-letter boundaries");
  run->add_option("--threads", run_flags.threads, "Worker threads (0 = all cores)");
  run->add_option("-o,--output", run_flags.output,
                  "Report CSV path; a .config.json sidecar is written next to it "
                  "(default: stdout, no sidecar)");

  // ---- tune ----
  auto* tune = app.add_subcommand("tune", "Grid-search a combine weight on a train/test split");
  RunFlags tune_flags;
  std::string tune_target_name;
  tune->add_option("corpus", tune_flags.corpus_path, "Corpus JSONL")->required();
  tune->add_option("--target", tune_target_name, "beta | alpha-unigram | alpha-digram")
      ->required();
  add_weight_flags(tune, tune_flags);
  tune->add_flag("--digram-across-runs", tune_flags.cfg.tokenize.digram_across_runs,
                 "Pair letters across non-letter boundaries");
  tune->add_option("--threads", tune_flags.threads, "Worker threads (0 = all cores)");
  tune->add_option("-o,--output", tune_flags.output, "Grid CSV path (default: stdout)");

  // ---- link ----
  auto* link = app.add_subcommand("link", "Rank all accounts for one anonymous record");
  RunFlags link_flags;
  std::string link_ar_path;
  std::string link_method = "nb";
  std::string link_tokens = "digram";
  std::string link_dump_dir;
  link->add_option("corpus", link_flags.corpus_path, "Corpus JSONL (identified records)")
      ->required();
  link->add_option("--ar", link_ar_path, "Anonymous record JSONL")->required();
  link->add_option("--method", link_method, "nb | kld")->capture_default_str();
  link->add_option("--tokens", link_tokens, "Token set")->capture_default_str();
  add_weight_flags(link, link_flags);
  link->add_flag("--digram-across-runs", link_flags.cfg.tokenize.digram_across_runs,
                 "Pair letters across non-letter boundaries");
  link->add_option("--threads", link_flags.threads, "Worker threads (0 = all cores)");
  link->add_option("--dump-counts", link_dump_dir,
                   "Also write per-account token,count CSVs into this directory");
  link->add_option("-o,--output", link_flags.output, "Ranked CSV path (default: stdout)");

  // ---- match-all ----
  auto* match = app.add_subcommand("match-all", "Greedy global assignment of an AR set (KLD)");
  RunFlags match_flags;
  std::string match_ars_path;
  std::string match_tokens = "digram_rating_category";
  match->add_option("corpus", match_flags.corpus_path, "Corpus JSONL (identified records)")
      ->required();
  match->add_option("--ars", match_ars_path,
                    "Anonymous records JSONL; each author id is one record")
      ->required();
  match->add_option("--tokens", match_tokens, "Token set")->capture_default_str();
  add_weight_flags(match, match_flags);
  match->add_flag("--digram-across-runs", match_flags.cfg.tokenize.digram_across_runs,
                  "Pair letters across non-letter boundaries");
  match->add_option("--threads", match_flags.threads, "Worker threads (0 = all cores)");
  match->add_option("-o,--output", match_flags.output, "Assignment CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      synth_cfg.validate();
      const Corpus corpus = generate_synthetic(synth_cfg, resolve_threads(synth_threads));
      note("generated " + std::to_string(corpus.reviews().size()) + " reviews");
      with_output(synth_out, [&](std::ostream& out) { write_jsonl(corpus, out); });
      return 0;
    }

    if (stats->parsed()) {
      const Corpus corpus = load_corpus(stats_corpus);
      const StatsReport report = corpus_stats(corpus);
      fs::create_directories(stats_dir);
      {
        auto out = open_output((fs::path(stats_dir) / "stats.csv").string());
        write_stats_csv(report, out);
      }
      {
        auto out = open_output((fs::path(stats_dir) / "cdf_reviews_per_author.csv").string());
        write_cdf_csv(report.reviews_per_author, out);
      }
      {
        auto out = open_output((fs::path(stats_dir) / "cdf_mean_words_per_review.csv").string());
        write_cdf_csv(report.mean_words_per_review, out);
      }
      return 0;
    }

    if (run->parsed()) {
      run_flags.cfg.methods = parse_methods(run_flags.method_names);
      run_flags.cfg.token_sets = parse_token_sets(run_flags.token_names);
      finalize_weights(run_flags);
      run_flags.cfg.validate();  // before touching the corpus
      const Corpus corpus = load_corpus(run_flags.corpus_path);
      const LRReport report = run_experiment(corpus, run_flags.cfg, run_flags.threads);
      note("report has " + std::to_string(report.rows.size()) + " rows");
      with_output(run_flags.output, [&](std::ostream& out) { write_lr_csv(report, out); });
      if (!run_flags.output.empty()) {
        auto out = open_output(run_flags.output + ".config.json");
        write_config_json(run_flags.cfg, out);
      }
      return 0;
    }

    if (tune->parsed()) {
      const auto target = tune_target_from_string(tune_target_name);
      if (!target) throw UsageError("unknown tune target: " + tune_target_name);
      finalize_weights(tune_flags);
      const Corpus corpus = load_corpus(tune_flags.corpus_path);
      const TuneResult result = tune_weights(corpus, tune_flags.cfg, *target, tune_flags.threads);
      with_output(tune_flags.output, [&](std::ostream& out) { write_tune_csv(result, out); });
      return 0;
    }

    if (link->parsed()) {
      const auto method = method_from_string(link_method);
      if (!method) throw UsageError("unknown method: " + link_method);
      const auto kind = token_set_kind_from_string(link_tokens);
      if (!kind) throw UsageError("unknown token set: " + link_tokens);
      finalize_weights(link_flags);

      const Corpus corpus = load_corpus(link_flags.corpus_path);
      const Corpus ar = load_corpus(link_ar_path);
      if (ar.reviews().empty()) throw EmptyRecord();

      std::vector<std::vector<Review>> account_reviews;
      std::vector<AccountRecord> records;
      account_reviews.reserve(corpus.author_count());
      for (std::size_t a = 0; a < corpus.author_count(); ++a) {
        account_reviews.push_back(corpus.author_reviews(a));
        records.push_back({corpus.authors()[a], account_reviews.back()});
      }
      const auto kinds = required_kinds(*method, *kind);
      const ModelIndex index = ModelIndex::build(records, kinds, corpus.taxonomy(),
                                                 link_flags.cfg.tokenize,
                                                 resolve_threads(link_flags.threads));
      const RankedList ranked =
          rank_accounts(fs::path(link_ar_path).stem().string(), ar.reviews(), index, *method,
                        *kind, link_flags.cfg.weights_for(*kind));
      with_output(link_flags.output, [&](std::ostream& out) { write_ranked_csv(ranked, out); });

      if (!link_dump_dir.empty()) {
        fs::create_directories(link_dump_dir);
        const TokenSet set(*kind, corpus.taxonomy());
        for (std::size_t a = 0; a < corpus.author_count(); ++a) {
          const TokenCounts counts =
              TokenCounts::build(account_reviews[a], set, link_flags.cfg.tokenize);
          auto out = open_output((fs::path(link_dump_dir) /
                                  ("counts_" + corpus.authors()[a] + "_" +
                                   std::string(to_string(*kind)) + ".csv"))
                                     .string());
          write_counts_csv(counts, out);
        }
      }
      return 0;
    }

    if (match->parsed()) {
      const auto kind = token_set_kind_from_string(match_tokens);
      if (!kind) throw UsageError("unknown token set: " + match_tokens);
      finalize_weights(match_flags);

      const Corpus corpus = load_corpus(match_flags.corpus_path);
      const Corpus ars = load_corpus(match_ars_path);
      if (ars.reviews().empty()) throw EmptyRecord();

      std::vector<std::vector<Review>> account_reviews;
      std::vector<AccountRecord> records;
      account_reviews.reserve(corpus.author_count());
      for (std::size_t a = 0; a < corpus.author_count(); ++a) {
        account_reviews.push_back(corpus.author_reviews(a));
        records.push_back({corpus.authors()[a], account_reviews.back()});
      }
      const unsigned threads = resolve_threads(match_flags.threads);
      const auto kinds = required_kinds(Method::KLD, *kind);
      const ModelIndex index =
          ModelIndex::build(records, kinds, corpus.taxonomy(), match_flags.cfg.tokenize, threads);
      const CombineWeights weights = match_flags.cfg.weights_for(*kind);

      std::vector<RankedList> lists(ars.author_count());
      parallel_for(ars.author_count(), threads, [&](std::size_t a) {
        const auto reviews = ars.author_reviews(a);
        lists[a] = rank_accounts(ars.authors()[a], reviews, index, Method::KLD, *kind, weights);
      });
      const MatchAssignment assignment = match_all(lists);
      with_output(match_flags.output,
                  [&](std::ostream& out) { write_assignment_csv(assignment, out); });
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return 1;
  } catch (const InvalidConfig& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.get_subcommands().front()->help();
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }

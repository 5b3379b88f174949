// Acceptance suite: one pass/fail line per criterion. Returns the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "delex/colearn.hpp"
#include "delex/commands.hpp"
#include "delex/errors.hpp"
#include "delex/eval.hpp"
#include "delex/synth.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace delex;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  double seconds = 0.0;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      passed = false;
      failures.push_back(what);
    }
  }
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// The frozen planted-operator spec shared by criteria 5 and 7.
SynthSpec planted_spec() {
  SynthSpec spec;
  spec.rng_seed = 20100711;
  spec.sentence_count = 100000;
  spec.operators = default_operator_names(20);
  spec.pnpis = default_pnpi_names(12);
  spec.seed_count = 2;
  spec.background_vocab = 400;
  spec.cooccur_prob = 0.7;
  spec.operator_sentence_rate = 0.30;
  spec.pnpi_background_rate = 0.08;
  spec.coverage = SynthCoverage::kChained;
  return spec;
}

CoLearnConfig paper_defaults(std::vector<std::string> seeds) {
  CoLearnConfig config;
  config.seeds = std::move(seeds);
  config.n0 = 10;
  config.n_r = 1;
  config.iterations = 9;
  config.filter.filter_questions = true;
  return config;
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence on 100 random corpora.
void criterion_oracle_equivalence(Criterion& c) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto random = testutil::random_corpus(seed, 500, 200);
    auto corpus = testutil::corpus_from(random.text);
    auto index = CorpusIndex::build(corpus);

    SentenceFilter filter;
    if (seed % 2 == 0) filter.exact = {"t5"};
    if (seed % 3 == 0) filter.prefixes = {"n-"};
    filter.filter_questions = (seed % 4 == 0);
    const RelFreqMode mode = (seed % 2 == 0) ? RelFreqMode::kSentence : RelFreqMode::kToken;
    const oracle::Mode omode = (seed % 2 == 0) ? oracle::Mode::kSentence : oracle::Mode::kToken;
    const std::uint32_t min_count = (seed % 5 == 0) ? 2 : 1;

    std::vector<std::string> triggers = {"t1", "t" + std::to_string(7 + seed % 6)};
    if (seed % 7 == 0) triggers.push_back("zz-absent");
    const std::set<std::string> trigger_set(triggers.begin(), triggers.end());
    const oracle::Filter ofilter{filter.exact, filter.prefixes, filter.filter_questions};

    // f direction: left contexts under the sentence filter.
    // f_r direction: right contexts, unfiltered.
    for (int direction = 0; direction < 2; ++direction) {
      ExtractionResult extraction;
      std::vector<oracle::Span> ospans;
      Exclusions exclusions;
      std::set<std::string> oexclude = trigger_set;
      std::vector<std::string> oprefixes;
      if (direction == 0) {
        extraction = extract_left_contexts(corpus, index, triggers, filter);
        ospans = oracle::left_contexts(random.sentences, trigger_set, ofilter);
        exclusions.exact = triggers;
        exclusions.exact.insert(exclusions.exact.end(), filter.exact.begin(), filter.exact.end());
        exclusions.prefixes = filter.prefixes;
        oexclude.insert(filter.exact.begin(), filter.exact.end());
        oprefixes = filter.prefixes;
      } else {
        extraction = extract_right_contexts(corpus, index, triggers);
        ospans = oracle::right_contexts(random.sentences, trigger_set);
        exclusions.exact = triggers;
      }

      if (extraction.spans.size() != ospans.size()) {
        c.expect(false, "seed " + std::to_string(seed) + ": span count mismatch");
        return;
      }
      if (extraction.spans.empty()) continue;

      auto mine = score_candidates(
          corpus, index, collect_candidates(corpus, extraction.spans, exclusions, min_count),
          static_cast<std::uint32_t>(extraction.spans.size()), mode);
      auto expected = oracle::rank(random.sentences, ospans, oexclude, oprefixes,
                                   static_cast<int>(min_count), omode);

      if (mine.size() != expected.size()) {
        c.expect(false, "seed " + std::to_string(seed) + ": ranking length mismatch (" +
                            std::to_string(mine.size()) + " vs " +
                            std::to_string(expected.size()) + ")");
        return;
      }
      for (std::size_t i = 0; i < mine.size(); ++i) {
        const bool same_rational =
            mine[i].token == expected[i].token &&
            mine[i].context_hits == static_cast<std::uint32_t>(expected[i].hits) &&
            mine[i].context_total == static_cast<std::uint32_t>(expected[i].total) &&
            mine[i].freq_num == static_cast<std::uint64_t>(expected[i].freq_num) &&
            mine[i].freq_den == static_cast<std::uint64_t>(expected[i].freq_den);
        const bool close_score = std::abs(mine[i].score - expected[i].score()) < 1e-12;
        if (!(same_rational && close_score)) {
          c.expect(false, "seed " + std::to_string(seed) + " rank " + std::to_string(i + 1) +
                              ": " + mine[i].token + " vs " + expected[i].token);
          return;
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 2. Toy-corpus regression, hand-counted and frozen.
void criterion_toy_regression(Criterion& c) {
  auto corpus = testutil::corpus_from(testutil::kToyCorpus);
  auto index = CorpusIndex::build(corpus);

  auto config = paper_defaults({"any"});
  auto ranking = de_step(corpus, index, config.seeds, config);
  c.expect(ranking.size() == 4, "f ranking should have 4 candidates");
  if (ranking.size() == 4) {
    c.expect(ranking[0].token == "doubts", "doubts must rank first");
    c.expect(ranking[0].score == 2.0, "f(doubts) == 2.0");
    c.expect(ranking[2].token == "denied", "denied must rank third");
    c.expect(ranking[2].score == 1.0, "f(denied) == 1.0");
  }

  auto extraction = extract_right_contexts(corpus, index, std::vector<std::string>{"denied"});
  Exclusions exclusions;
  exclusions.exact = {"denied"};
  auto fr = score_candidates(corpus, index,
                             collect_candidates(corpus, extraction.spans, exclusions),
                             static_cast<std::uint32_t>(extraction.spans.size()),
                             RelFreqMode::kSentence);
  bool found = false;
  for (const auto& cand : fr) {
    if (cand.token == "wrongdoing") {
      found = true;
      c.expect(cand.score == 2.0, "f_r(wrongdoing) == 2.0");
    }
    if (cand.token == "any") c.expect(cand.score == 1.0, "f_r(any) == 1.0");
  }
  c.expect(found, "wrongdoing present in the f_r ranking");
}

// ---------------------------------------------------------------------------
// 3. Schedule invariants, property-tested over randomized configs.
void criterion_schedule_invariants(Criterion& c) {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 12; ++round) {
    SynthSpec spec;
    spec.rng_seed = 1000 + round;
    spec.sentence_count = 2500 + static_cast<std::uint32_t>(rng() % 2500);
    spec.operators = default_operator_names(6 + rng() % 8);
    spec.pnpis = default_pnpi_names(5 + rng() % 6);
    spec.seed_count = 1 + rng() % 3;
    auto synth = generate_synthetic_corpus(spec);
    auto index = CorpusIndex::build(synth.corpus);

    CoLearnConfig config;
    config.seeds = synth.seed_pnpis;
    config.n0 = 1 + static_cast<int>(rng() % 5);
    config.n_r = 1 + static_cast<int>(rng() % 3);
    config.iterations = static_cast<int>(rng() % 7);
    config.scoring.relfreq = (rng() % 2) ? RelFreqMode::kSentence : RelFreqMode::kToken;

    auto result = run_colearn(synth.corpus, index, config);
    const std::size_t seeds = config.seeds.size();
    for (const auto& record : result.history) {
      const auto t = static_cast<std::size_t>(record.iteration);
      c.expect(record.de_cutoff == config.n0 + record.iteration,
               "round " + std::to_string(round) + ": n == n0 + t");
      c.expect(record.pnpis.size() == seeds + t * static_cast<std::size_t>(config.n_r),
               "round " + std::to_string(round) + ": |N| == |seed| + t*n_r at t=" +
                   std::to_string(t));
      std::set<std::string> members(record.pnpis.begin(), record.pnpis.end());
      for (const auto& chosen : record.new_pnpis) {
        c.expect(!members.count(chosen), "chosen pNPI not already a member");
      }
    }
    if (!result.early_termination) {
      c.expect(result.history.size() == static_cast<std::size_t>(config.iterations) + 1,
               "round " + std::to_string(round) + ": T+1 rankings");
      c.expect(result.pnpi_set.size() ==
                   seeds + static_cast<std::size_t>(config.iterations) * config.n_r,
               "round " + std::to_string(round) + ": final |N|");
    } else {
      c.expect(result.history.size() < static_cast<std::size_t>(config.iterations) + 1 ||
                   result.history.back().new_pnpis.size() <
                       static_cast<std::size_t>(config.n_r),
               "early termination implies a shortfall");
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Determinism / replay: byte-identical output trees.
void criterion_replay(Criterion& c) {
  const fs::path dir = fs::temp_directory_path() / "delex_acceptance_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SynthSpec spec;
  spec.rng_seed = 99;
  spec.sentence_count = 3000;
  spec.operators = default_operator_names(8);
  spec.pnpis = default_pnpi_names(6);
  auto synth = generate_synthetic_corpus(spec);
  {
    std::ofstream out((dir / "corpus.txt").string(), std::ios::binary);
    out << synth.corpus_text;
    std::ofstream seeds((dir / "seeds.txt").string(), std::ios::binary);
    for (const auto& s : synth.seed_pnpis) seeds << s << "\n";
  }

  std::ostringstream sink, errsink;
  RunConfig config;
  config.corpus_path = (dir / "corpus.txt").string();
  config.seeds_path = (dir / "seeds.txt").string();
  config.out_dir = (dir / "run1").string();
  config.n0 = 4;
  config.iterations = 3;
  c.expect(cmd_run(config, sink, errsink) == kExitOk, "first run succeeds");

  RunConfig again = config;
  again.out_dir = (dir / "run2").string();
  c.expect(cmd_run(again, sink, errsink) == kExitOk, "second run succeeds");

  RunConfig replay;
  replay.replay_manifest = (dir / "run1" / "manifest.json").string();
  replay.out_dir = (dir / "run3").string();
  c.expect(cmd_run(replay, sink, errsink) == kExitOk, "replayed run succeeds");

  const std::vector<std::string> leaves = {"iter_0.tsv", "iter_1.tsv", "iter_2.tsv",
                                           "iter_3.tsv", "pnpis.tsv", "manifest.json"};
  for (const auto& leaf : leaves) {
    const std::string a = read_file((dir / "run1" / leaf).string());
    c.expect(a == read_file((dir / "run2" / leaf).string()), leaf + ": rerun differs");
    c.expect(a == read_file((dir / "run3" / leaf).string()), leaf + ": replay differs");
    c.expect(a.find("<unreadable") == std::string::npos, leaf + " exists");
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// 5. Planted-operator trend, frozen-seed regression.
void criterion_planted_trend(Criterion& c) {
  auto synth = generate_synthetic_corpus(planted_spec());
  auto index = CorpusIndex::build(synth.corpus);
  auto result = run_colearn(synth.corpus, index, paper_defaults(synth.seed_pnpis));

  c.expect(!result.early_termination.has_value(), "run completes all 10 iterations");
  if (result.history.size() != 10) {
    c.expect(false, "expected 10 rankings, got " + std::to_string(result.history.size()));
    return;
  }

  const auto p = [&](int iteration, std::uint32_t k) {
    return precision_at_k(result.history[iteration].de_ranking, synth.gold, k);
  };

  const auto p10_5 = p(5, 10);
  const auto p30_0 = p(0, 30);
  const auto p30_9 = p(9, 30);
  std::printf("    measured: p@10(iter5)=%.3f  p@30(iter0)=%.3f  p@30(iter9)=%.3f\n",
              p10_5.precision, p30_0.precision, p30_9.precision);

  c.expect(p10_5.precision >= 0.9, "precision@10 at iteration 5 >= 0.9");
  c.expect(p30_9.precision - p30_0.precision >= 0.2,
           "precision@30 gains >= 0.2 absolute from iteration 0 to 9");

  // Frozen regression values, measured once from this rng seed.
  c.expect(p30_0.de_count == 4, "pinned: iteration 0 finds the 4 seed-reachable operators");
  c.expect(p10_5.de_count == 10, "pinned: iteration 5 top-10 all operators");
  c.expect(p30_9.de_count == 20, "pinned: iteration 9 top-30 holds all 20 operators");

  // The learned pNPI sequence is the planted chain.
  std::vector<std::string> learned;
  for (const auto& e : result.pnpi_set) {
    if (e.added_after_iteration >= 0) learned.push_back(e.token);
  }
  c.expect(learned == std::vector<std::string>{"pnpi02", "pnpi03", "pnpi04", "pnpi05", "pnpi06",
                                               "pnpi07", "pnpi08", "pnpi09", "pnpi10"},
           "pinned: learned pNPIs follow the planted chain");
}

// ---------------------------------------------------------------------------
// 6. Seed-sufficiency analogue: iterating does not hurt.
void criterion_seed_sufficiency(Criterion& c) {
  SynthSpec spec = planted_spec();
  spec.coverage = SynthCoverage::kFull;
  spec.cooccur_prob = 1.0;
  auto synth = generate_synthetic_corpus(spec);
  auto index = CorpusIndex::build(synth.corpus);
  auto result = run_colearn(synth.corpus, index, paper_defaults(synth.seed_pnpis));

  if (result.history.size() != 10) {
    c.expect(false, "expected 10 rankings, got " + std::to_string(result.history.size()));
    return;
  }
  const double p0 = precision_at_k(result.history[0].de_ranking, synth.gold, 30).precision;
  const double p9 = precision_at_k(result.history[9].de_ranking, synth.gold, 30).precision;
  std::printf("    measured: p@30(iter0)=%.3f  p@30(iter9)=%.3f\n", p0, p9);
  c.expect(std::abs(p9 - p0) <= 0.03, "precision@30 unchanged within +-0.03");
  c.expect(p0 >= 0.6, "the sufficient seed already finds the operators at iteration 0");
}

// ---------------------------------------------------------------------------
// 7. Reproduction path: full file-based pipeline at desk scale, extrapolated.
void criterion_reproduction_path(Criterion& c) {
  const fs::path dir = fs::temp_directory_path() / "delex_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);

  Timer timer;
  std::ostringstream sink, errsink;
  save_synth_spec((dir / "spec.json").string(), planted_spec());
  c.expect(cmd_synth(SynthConfig{(dir / "spec.json").string(), (dir / "synth").string()}, sink,
                     errsink) == kExitOk,
           "synth succeeds");

  RunConfig run;
  run.corpus_path = (dir / "synth" / "corpus.txt").string();
  run.seeds_path = (dir / "synth" / "seeds.txt").string();
  run.out_dir = (dir / "run").string();
  run.cache_path = (dir / "corpus.idx").string();
  c.expect(cmd_run(run, sink, errsink) == kExitOk, "run succeeds with paper defaults");

  EvalConfig eval;
  eval.run_dir = (dir / "run").string();
  eval.labels_path = (dir / "synth" / "labels.tsv").string();
  eval.ks = {10, 20, 30};
  eval.out_path = (dir / "report.tsv").string();
  c.expect(cmd_eval(eval, sink, errsink) == kExitOk, "eval succeeds");

  const double elapsed = timer.seconds();
  const double scale = 1450000.0 / 100000.0;
  std::printf("    desk-scale pipeline: %.1fs for 1e5 sentences; x%.1f extrapolation "
              "~%.1f min for 1.45M\n",
              elapsed, scale, elapsed * scale / 60.0);
  c.expect(elapsed < 120.0, "desk-scale pipeline under 2 minutes (extrapolates under 30)");

  const std::string report = read_file(eval.out_path);
  c.expect(report.find("iteration\tk\t") == 0, "per-iteration report produced");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* name;
    void (*fn)(Criterion&);
    double budget_seconds;
  };
  const std::vector<Entry> entries = {
      {1, "oracle equivalence (100 random corpora)", criterion_oracle_equivalence, 60.0},
      {2, "toy-corpus regression", criterion_toy_regression, 10.0},
      {3, "schedule invariants (randomized configs)", criterion_schedule_invariants, 60.0},
      {4, "determinism / replay", criterion_replay, 60.0},
      {5, "planted-operator trend", criterion_planted_trend, 120.0},
      {6, "seed sufficiency", criterion_seed_sufficiency, 120.0},
      {7, "reproduction path (desk-scale proxy)", criterion_reproduction_path, 120.0},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    Criterion criterion{entry.number, entry.name};
    Timer timer;
    try {
      entry.fn(criterion);
    } catch (const std::exception& e) {
      criterion.expect(false, std::string("exception: ") + e.what());
    }
    criterion.seconds = timer.seconds();
    criterion.expect(criterion.seconds < entry.budget_seconds,
                     "runtime " + std::to_string(criterion.seconds) + "s exceeds budget");

    std::printf("[%d] %s: %s (%.1fs)\n", criterion.number, criterion.name.c_str(),
                criterion.passed ? "PASS" : "FAIL", criterion.seconds);
    if (!criterion.passed) {
      ++failures;
      for (const auto& f : criterion.failures) std::printf("    FAIL: %s\n", f.c_str());
    }
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}

#pragma once

#include "delex/colearn.hpp"
#include "delex/eval.hpp"
#include "delex/synth.hpp"

namespace delex {

// Everything a run needs; the manifest persists this plus the corpus digest
// so a finished run can be replayed bit-identically.
struct RunConfig {
  std::string corpus_path;
  std::string seeds_path;
  std::string blacklist_path;  // optional
  bool filter_questions = true;
  bool filter_de_contexts = false;
  RelFreqMode relfreq = RelFreqMode::kSentence;
  std::uint32_t min_context_count = 1;
  int n0 = 10;
  int n_r = 1;
  int iterations = 9;
  std::string out_dir;
  std::string cache_path;       // optional index cache to reuse or create
  std::string replay_manifest;  // when set, config is loaded from this manifest

  void validate() const;  // throws ConfigError for out-of-range parameters
};

struct IndexConfig {
  std::string corpus_path;
  std::string cache_path;  // defaults to corpus_path + ".idx"
};

struct EvalConfig {
  std::string ranking_path;  // a single ranking TSV ...
  std::string run_dir;       // ... or a run directory (per-iteration table)
  std::string labels_path;
  std::vector<std::uint32_t> ks;
  std::string out_path;  // empty = stdout
};

struct SynthConfig {
  std::string spec_path;
  std::string out_dir;
};

// Builds the index and persists it, reusing a cache hit when the file is
// already keyed to this corpus. Prints sentence and token totals.
int cmd_index(const IndexConfig& config, std::ostream& out, std::ostream& err);

// Runs the co-learning loop, persisting iter_<t>.tsv, pnpis.tsv and
// manifest.json under out_dir as iterations complete. Returns kExitOk or
// kExitEarlyTermination.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Precision-at-k report for one ranking, or a per-iteration table for a
// whole run directory.
int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& err);

// Generates corpus.txt, labels.tsv, seeds.txt and synth.json under out_dir.
int cmd_synth(const SynthConfig& config, std::ostream& out, std::ostream& err);

// Manifest round-trip used by --replay; load returns the embedded config and
// the digest the corpus must still match.
struct RunManifest {
  RunConfig config;
  std::vector<std::string> seeds;      // resolved seed tokens
  SentenceFilter filter;               // resolved blacklist
  std::string corpus_digest;
  std::string tokenizer_description;
  std::optional<EarlyTermination> early_termination;
  int completed_iterations = 0;
};

RunManifest load_manifest(const std::string& path);

}  // namespace delex

#pragma once

#include <functional>

#include "delex/scoring.hpp"

namespace delex {

struct CoLearnConfig {
  std::vector<std::string> seeds;  // initial pseudo-NPI set, in order
  int n0 = 10;                     // DE cutoff at iteration 0
  int n_r = 1;                     // pNPIs adopted per iteration
  int iterations = 9;              // co-learning rounds after the baseline
  SentenceFilter filter;
  bool filter_de_contexts = false;  // apply the sentence filter on the DE side too
  ScoringOptions scoring;
};

// The ordered pseudo-NPI set; seeds carry added_after_iteration = -1,
// learned entries the iteration whose pNPI step chose them.
struct PnpiEntry {
  std::string token;
  int added_after_iteration;
  bool operator==(const PnpiEntry&) const = default;
};

struct IterationRecord {
  int iteration = 0;
  int de_cutoff = 0;                    // n in force during this iteration
  std::vector<std::string> pnpis;       // snapshot used by this DE step
  std::vector<RankedCandidate> de_ranking;
  std::vector<std::string> new_pnpis;   // chosen by this iteration's pNPI step
};

struct EarlyTermination {
  int iteration;
  std::string reason;
};

struct CoLearnResult {
  std::vector<IterationRecord> history;
  std::vector<PnpiEntry> pnpi_set;
  std::optional<EarlyTermination> early_termination;
  std::vector<std::string> warnings;
};

// DE learning: left contexts of the pseudo-NPI set, candidates scored by f.
// The pNPI set and the blacklist are excluded from candidates. Throws
// CoverageError when no pNPI yields a single context.
std::vector<RankedCandidate> de_step(const Corpus& corpus, const CorpusIndex& index,
                                     std::span<const std::string> pnpis,
                                     const CoLearnConfig& config,
                                     std::vector<std::string>* warnings = nullptr);

// pNPI learning: right contexts of the top-n DE candidates, scored by f_r;
// returns up to n_r tokens not yet in the pNPI set. Fewer than n_r returned
// means the candidate pool is exhausted.
std::vector<std::string> pnpi_step(const Corpus& corpus, const CorpusIndex& index,
                                   std::span<const RankedCandidate> de_ranking, int de_cutoff,
                                   std::span<const std::string> pnpis,
                                   const CoLearnConfig& config,
                                   std::vector<std::string>* warnings = nullptr);

// Invoked after each iteration record is complete, so callers can persist
// results as the run progresses.
using IterationCallback = std::function<void(const IterationRecord&, const CoLearnResult&)>;

// Full loop: iteration 0 is the plain seed run, then `iterations` rounds of
// (pNPI learning, DE learning). Stops early, with a record, when the pNPI
// candidate pool is exhausted.
CoLearnResult run_colearn(const Corpus& corpus, const CorpusIndex& index,
                          const CoLearnConfig& config, const IterationCallback& on_iteration = {});

}  // namespace delex

#include "delex/colearn.hpp"

#include <algorithm>

#include "delex/errors.hpp"

namespace delex {

namespace {

void warn(std::vector<std::string>* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

std::vector<std::string> dedupe_keep_order(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<RankedCandidate> de_step(const Corpus& corpus, const CorpusIndex& index,
                                     std::span<const std::string> pnpis,
                                     const CoLearnConfig& config,
                                     std::vector<std::string>* warnings) {
  if (pnpis.empty()) throw ConfigError("DE step requires a non-empty pseudo-NPI set");

  auto extraction = extract_left_contexts(corpus, index, pnpis, config.filter);
  for (const auto& t : extraction.missing_triggers) {
    warn(warnings, "pseudo-NPI '" + t + "' does not occur in the corpus");
  }
  if (extraction.spans.empty()) {
    std::string msg = "no NPI contexts found; every pseudo-NPI is absent or filtered:";
    for (const auto& t : pnpis) msg += " " + t;
    throw CoverageError(msg);
  }

  Exclusions exclusions;
  exclusions.exact.assign(pnpis.begin(), pnpis.end());
  exclusions.exact.insert(exclusions.exact.end(), config.filter.exact.begin(),
                          config.filter.exact.end());
  exclusions.prefixes = config.filter.prefixes;

  auto candidates = collect_candidates(corpus, extraction.spans, exclusions,
                                       config.scoring.min_context_count);
  return score_candidates(corpus, index, candidates,
                          static_cast<std::uint32_t>(extraction.spans.size()),
                          config.scoring.relfreq);
}

std::vector<std::string> pnpi_step(const Corpus& corpus, const CorpusIndex& index,
                                   std::span<const RankedCandidate> de_ranking, int de_cutoff,
                                   std::span<const std::string> pnpis,
                                   const CoLearnConfig& config,
                                   std::vector<std::string>* warnings) {
  if (de_ranking.empty()) return {};

  const std::size_t top_n = std::min<std::size_t>(de_ranking.size(), static_cast<std::size_t>(de_cutoff));
  if (top_n < static_cast<std::size_t>(de_cutoff)) {
    warn(warnings, "DE ranking has only " + std::to_string(de_ranking.size()) +
                       " entries; using all of them as the operator set");
  }
  std::vector<std::string> de_set;
  de_set.reserve(top_n);
  for (std::size_t i = 0; i < top_n; ++i) de_set.push_back(de_ranking[i].token);

  auto extraction = extract_right_contexts(corpus, index, de_set,
                                           config.filter_de_contexts ? &config.filter : nullptr);
  if (extraction.spans.empty()) return {};

  Exclusions exclusions;
  exclusions.exact = de_set;
  exclusions.exact.insert(exclusions.exact.end(), pnpis.begin(), pnpis.end());

  auto candidates = collect_candidates(corpus, extraction.spans, exclusions,
                                       config.scoring.min_context_count);
  auto ranking = score_candidates(corpus, index, candidates,
                                  static_cast<std::uint32_t>(extraction.spans.size()),
                                  config.scoring.relfreq);

  std::vector<std::string> chosen;
  for (const RankedCandidate& c : ranking) {
    if (chosen.size() >= static_cast<std::size_t>(config.n_r)) break;
    chosen.push_back(c.token);
  }
  return chosen;
}

CoLearnResult run_colearn(const Corpus& corpus, const CorpusIndex& index,
                          const CoLearnConfig& config, const IterationCallback& on_iteration) {
  if (config.seeds.empty()) throw ConfigError("seed set is empty");
  if (config.n0 < 1) throw ConfigError("n0 must be >= 1");
  if (config.n_r < 1) throw ConfigError("n_r must be >= 1");
  if (config.iterations < 0) throw ConfigError("iteration count must be >= 0");

  CoLearnResult result;
  std::vector<std::string> pnpis = dedupe_keep_order(config.seeds);
  if (pnpis.size() != config.seeds.size()) {
    result.warnings.push_back("duplicate seed tokens dropped");
  }
  for (const auto& s : pnpis) result.pnpi_set.push_back(PnpiEntry{s, -1});

  int n = config.n0;
  for (int t = 0; t <= config.iterations; ++t) {
    IterationRecord record;
    record.iteration = t;
    record.de_cutoff = n;
    record.pnpis = pnpis;
    record.de_ranking = de_step(corpus, index, pnpis, config, &result.warnings);

    if (t < config.iterations) {
      auto chosen = pnpi_step(corpus, index, record.de_ranking, n, pnpis, config,
                              &result.warnings);
      record.new_pnpis = chosen;
      for (const auto& c : chosen) {
        pnpis.push_back(c);
        result.pnpi_set.push_back(PnpiEntry{c, t});
      }
      ++n;
      if (chosen.size() < static_cast<std::size_t>(config.n_r)) {
        result.early_termination = EarlyTermination{
            t, "pNPI candidate pool exhausted at iteration " + std::to_string(t) + ": selected " +
                   std::to_string(chosen.size()) + " of " + std::to_string(config.n_r)};
        result.history.push_back(std::move(record));
        if (on_iteration) on_iteration(result.history.back(), result);
        break;
      }
    }

    result.history.push_back(std::move(record));
    if (on_iteration) on_iteration(result.history.back(), result);
  }
  return result;
}

}  // namespace delex

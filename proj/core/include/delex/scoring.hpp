#pragma once

#include <iosfwd>

#include "delex/context.hpp"

namespace delex {

// Denominator of the ratio score. Sentence mode divides containment by the
// sentence count; token mode divides occurrences by the corpus token total.
enum class RelFreqMode { kSentence, kToken };

const char* to_string(RelFreqMode mode);
std::optional<RelFreqMode> relfreq_mode_from(std::string_view name);

struct ScoringOptions {
  RelFreqMode relfreq = RelFreqMode::kSentence;
  std::uint32_t min_context_count = 1;
};

// A candidate with its containment-in-context fraction, corpus relative
// frequency and ratio score. freq_num/freq_den is the exact relative
// frequency; rankings are ordered on the exact rationals, never on the
// rounded doubles.
struct RankedCandidate {
  std::string token;
  std::uint32_t context_hits = 0;
  std::uint32_t context_total = 0;
  std::uint64_t freq_num = 0;
  std::uint64_t freq_den = 0;
  double rel_freq = 0.0;  // freq_num / freq_den
  double score = 0.0;     // (context_hits / context_total) / rel_freq

  bool operator==(const RankedCandidate&) const = default;
};

struct CandidateCount {
  TokenId token;
  std::uint32_t context_hits;
  bool operator==(const CandidateCount&) const = default;
};

// Tokens removed from candidate collection (trigger sets, blacklists).
struct Exclusions {
  std::vector<std::string> exact;
  std::vector<std::string> prefixes;
};

// Counts, per candidate token, the number of distinct spans containing it
// (containment, not multiplicity). Punctuation-only tokens and excluded
// tokens are dropped; tokens with fewer than min_context_count hits are
// dropped. Result is sorted by token id.
std::vector<CandidateCount> collect_candidates(const Corpus& corpus,
                                               std::span<const ContextSpan> spans,
                                               const Exclusions& exclusions,
                                               std::uint32_t min_context_count = 1);

// Ranks candidates by score descending; ties broken by higher context_hits,
// then lexicographic token order. Throws CoverageError when context_total
// is zero.
std::vector<RankedCandidate> score_candidates(const Corpus& corpus, const CorpusIndex& index,
                                              std::span<const CandidateCount> candidates,
                                              std::uint32_t context_total, RelFreqMode mode);

// The strict ordering used for every ranking, exact-rational comparison.
bool ranks_before(const RankedCandidate& a, const RankedCandidate& b);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// TSV with header: rank, token, score, context_hits, context_total, rel_freq.
void write_ranking_tsv(std::ostream& out, std::span<const RankedCandidate> ranking);
void write_ranking_tsv(const std::string& path, std::span<const RankedCandidate> ranking);
std::vector<RankedCandidate> read_ranking_tsv(const std::string& path);

}  // namespace delex

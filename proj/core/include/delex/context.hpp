#pragma once

#include "delex/corpus.hpp"
#include "delex/index.hpp"

namespace delex {

enum class Side : std::uint8_t { kLeft, kRight };

// One NPI context (tokens left of a trigger) or DE context (tokens right of
// a trigger). The span is the half-open position range [begin, end) in the
// sentence; it never contains or crosses a , or ; token, and it excludes the
// trigger itself. Empty spans are kept: they still count toward totals.
struct ContextSpan {
  std::uint32_t sentence_id;
  TokenId trigger;
  std::uint32_t trigger_pos;
  Side side;
  std::uint32_t begin;
  std::uint32_t end;

  std::uint32_t size() const { return end - begin; }
  bool operator==(const ContextSpan&) const = default;
};

// Sentence-level filter for NPI-context extraction: sentences holding a
// well-known environment (blacklisted token, or a question mark when
// filter_questions is set) are skipped so that new operators can surface.
struct SentenceFilter {
  std::vector<std::string> exact;
  std::vector<std::string> prefixes;  // stored with their trailing '-'
  bool filter_questions = false;
};

// One token per line; a trailing '-' marks a prefix form. '#' starts a
// comment line. Throws IoError when the file cannot be read.
SentenceFilter load_blacklist(const std::string& path);

bool matches_blacklist(std::string_view token, const SentenceFilter& filter);
bool sentence_passes(const Corpus& corpus, std::uint32_t sentence_id, const SentenceFilter& filter);

struct ExtractionResult {
  std::vector<ContextSpan> spans;             // ordered by (sentence, trigger position)
  std::vector<std::string> missing_triggers;  // requested but absent from the corpus
};

// One span per trigger occurrence in a sentence that passes the filter;
// the span runs from the nearest preceding delimiter (or sentence start)
// up to, excluding, the trigger. Throws ConfigError when triggers is empty.
ExtractionResult extract_left_contexts(const Corpus& corpus, const CorpusIndex& index,
                                       std::span<const std::string> triggers,
                                       const SentenceFilter& filter);

// One span per trigger occurrence; the span runs from just after the trigger
// up to, excluding, the first delimiter or sentence end. No sentence filter
// is applied unless one is passed explicitly.
ExtractionResult extract_right_contexts(const Corpus& corpus, const CorpusIndex& index,
                                        std::span<const std::string> triggers,
                                        const SentenceFilter* filter = nullptr);

}  // namespace delex

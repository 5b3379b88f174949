#include "delex/context.hpp"

#include <algorithm>
#include <fstream>

#include "delex/errors.hpp"

namespace delex {

SentenceFilter load_blacklist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open blacklist file: " + path);
  SentenceFilter filter;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    std::string token = line.substr(first, last - first + 1);
    if (token[0] == '#') continue;
    if (token.size() > 1 && token.back() == '-') {
      filter.prefixes.push_back(token);
    } else {
      filter.exact.push_back(token);
    }
  }
  return filter;
}

bool matches_blacklist(std::string_view token, const SentenceFilter& filter) {
  for (const auto& e : filter.exact) {
    if (token == e) return true;
  }
  for (const auto& p : filter.prefixes) {
    if (token.starts_with(p)) return true;
  }
  return false;
}

bool sentence_passes(const Corpus& corpus, std::uint32_t sentence_id, const SentenceFilter& filter) {
  for (TokenId t : corpus.sentence(sentence_id)) {
    const std::string& text = corpus.token_text(t);
    if (filter.filter_questions && text == "?") return false;
    if (matches_blacklist(text, filter)) return false;
  }
  return true;
}

namespace {

// Per-corpus bitmaps so extraction touches token ids, not strings.
struct CompiledFilter {
  std::vector<bool> blocked;  // token id is blacklisted (or '?' when filtering questions)
  bool active = false;

  CompiledFilter(const Corpus& corpus, const SentenceFilter& filter) {
    active = filter.filter_questions || !filter.exact.empty() || !filter.prefixes.empty();
    if (!active) return;
    const auto& vocab = corpus.vocab();
    blocked.assign(vocab.size(), false);
    for (const auto& e : filter.exact) {
      if (auto id = vocab.find(e)) blocked[*id] = true;
    }
    if (!filter.prefixes.empty()) {
      for (TokenId t = 0; t < vocab.size(); ++t) {
        if (blocked[t]) continue;
        for (const auto& p : filter.prefixes) {
          if (vocab.text(t).starts_with(p)) {
            blocked[t] = true;
            break;
          }
        }
      }
    }
    if (filter.filter_questions) {
      if (auto id = vocab.find("?")) blocked[*id] = true;
    }
  }

  bool passes(std::span<const TokenId> sentence) const {
    if (!active) return true;
    for (TokenId t : sentence) {
      if (blocked[t]) return false;
    }
    return true;
  }
};

struct Occurrence {
  std::uint32_t sentence;
  std::uint32_t position;
  TokenId trigger;
};

// Resolves trigger strings, records missing ones, and merges the postings of
// the found ones into (sentence, position) order.
std::vector<Occurrence> trigger_occurrences(const Corpus& corpus, const CorpusIndex& index,
                                            std::span<const std::string> triggers,
                                            ExtractionResult& result) {
  if (triggers.empty()) throw ConfigError("context extraction requires at least one trigger token");

  std::vector<TokenId> ids;
  for (const auto& t : triggers) {
    if (auto id = corpus.vocab().find(t)) {
      if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
    } else if (std::find(result.missing_triggers.begin(), result.missing_triggers.end(), t) ==
               result.missing_triggers.end()) {
      result.missing_triggers.push_back(t);
    }
  }

  std::vector<Occurrence> occurrences;
  for (TokenId id : ids) {
    for (const Posting& p : index.postings(id)) {
      occurrences.push_back(Occurrence{p.sentence, p.position, id});
    }
  }
  std::sort(occurrences.begin(), occurrences.end(), [](const Occurrence& a, const Occurrence& b) {
    return a.sentence != b.sentence ? a.sentence < b.sentence : a.position < b.position;
  });
  return occurrences;
}

}  // namespace

ExtractionResult extract_left_contexts(const Corpus& corpus, const CorpusIndex& index,
                                       std::span<const std::string> triggers,
                                       const SentenceFilter& filter) {
  ExtractionResult result;
  const auto occurrences = trigger_occurrences(corpus, index, triggers, result);
  const CompiledFilter compiled(corpus, filter);

  std::uint32_t cached_sentence = UINT32_MAX;
  bool cached_pass = false;
  for (const Occurrence& occ : occurrences) {
    if (occ.sentence != cached_sentence) {
      cached_sentence = occ.sentence;
      cached_pass = compiled.passes(corpus.sentence(occ.sentence));
    }
    if (!cached_pass) continue;
    auto sentence = corpus.sentence(occ.sentence);
    std::uint32_t begin = occ.position;
    while (begin > 0 && !is_context_delimiter(corpus.token_text(sentence[begin - 1]))) {
      --begin;
    }
    result.spans.push_back(ContextSpan{occ.sentence, occ.trigger, occ.position, Side::kLeft,
                                       begin, occ.position});
  }
  return result;
}

ExtractionResult extract_right_contexts(const Corpus& corpus, const CorpusIndex& index,
                                        std::span<const std::string> triggers,
                                        const SentenceFilter* filter) {
  ExtractionResult result;
  const auto occurrences = trigger_occurrences(corpus, index, triggers, result);
  const CompiledFilter compiled(corpus, filter ? *filter : SentenceFilter{});

  std::uint32_t cached_sentence = UINT32_MAX;
  bool cached_pass = false;
  for (const Occurrence& occ : occurrences) {
    if (occ.sentence != cached_sentence) {
      cached_sentence = occ.sentence;
      cached_pass = compiled.passes(corpus.sentence(occ.sentence));
    }
    if (!cached_pass) continue;
    auto sentence = corpus.sentence(occ.sentence);
    const std::uint32_t n = static_cast<std::uint32_t>(sentence.size());
    std::uint32_t end = occ.position + 1;
    while (end < n && !is_context_delimiter(corpus.token_text(sentence[end]))) {
      ++end;
    }
    result.spans.push_back(ContextSpan{occ.sentence, occ.trigger, occ.position, Side::kRight,
                                       occ.position + 1, end});
  }
  return result;
}

}  // namespace delex

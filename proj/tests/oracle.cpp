#include "oracle.hpp"

#include <algorithm>
#include <cctype>

namespace oracle {

bool is_delimiter(const std::string& token) { return token == "," || token == ";"; }

bool is_punctuation(const std::string& token) {
  if (token.empty()) return false;
  for (unsigned char c : token) {
    if (c >= 0x80 || std::isalnum(c)) return false;
  }
  return true;
}

bool passes(const Sentence& sentence, const Filter& filter) {
  for (const std::string& token : sentence) {
    if (filter.filter_questions && token == "?") return false;
    for (const auto& e : filter.exact) {
      if (token == e) return false;
    }
    for (const auto& p : filter.prefixes) {
      if (token.rfind(p, 0) == 0) return false;
    }
  }
  return true;
}

Stats recount(const std::vector<Sentence>& sentences) {
  Stats stats;
  stats.sentence_count = static_cast<int>(sentences.size());
  for (int sid = 0; sid < stats.sentence_count; ++sid) {
    std::set<std::string> seen;
    for (int pos = 0; pos < static_cast<int>(sentences[sid].size()); ++pos) {
      const std::string& token = sentences[sid][pos];
      ++stats.token_total;
      ++stats.occurrences[token];
      stats.postings[token].emplace_back(sid, pos);
      if (seen.insert(token).second) ++stats.containment[token];
    }
  }
  return stats;
}

std::vector<Span> left_contexts(const std::vector<Sentence>& sentences,
                                const std::set<std::string>& triggers, const Filter& filter) {
  std::vector<Span> spans;
  for (int sid = 0; sid < static_cast<int>(sentences.size()); ++sid) {
    const Sentence& sentence = sentences[sid];
    if (!passes(sentence, filter)) continue;
    for (int pos = 0; pos < static_cast<int>(sentence.size()); ++pos) {
      if (!triggers.count(sentence[pos])) continue;
      Span span{sid, sentence[pos], pos, {}};
      int begin = pos;
      while (begin > 0 && !is_delimiter(sentence[begin - 1])) --begin;
      span.tokens.assign(sentence.begin() + begin, sentence.begin() + pos);
      spans.push_back(std::move(span));
    }
  }
  return spans;
}

std::vector<Span> right_contexts(const std::vector<Sentence>& sentences,
                                 const std::set<std::string>& triggers, const Filter* filter) {
  std::vector<Span> spans;
  for (int sid = 0; sid < static_cast<int>(sentences.size()); ++sid) {
    const Sentence& sentence = sentences[sid];
    if (filter && !passes(sentence, *filter)) continue;
    for (int pos = 0; pos < static_cast<int>(sentence.size()); ++pos) {
      if (!triggers.count(sentence[pos])) continue;
      Span span{sid, sentence[pos], pos, {}};
      int end = pos + 1;
      while (end < static_cast<int>(sentence.size()) && !is_delimiter(sentence[end])) ++end;
      span.tokens.assign(sentence.begin() + pos + 1, sentence.begin() + end);
      spans.push_back(std::move(span));
    }
  }
  return spans;
}

std::vector<Scored> rank(const std::vector<Sentence>& sentences, const std::vector<Span>& spans,
                         const std::set<std::string>& exclude_exact,
                         const std::vector<std::string>& exclude_prefixes, int min_context_count,
                         Mode mode) {
  const Stats stats = recount(sentences);

  std::map<std::string, long long> hits;
  for (const Span& span : spans) {
    std::set<std::string> seen;
    for (const std::string& token : span.tokens) {
      if (is_punctuation(token)) continue;
      if (exclude_exact.count(token)) continue;
      bool prefixed = false;
      for (const auto& p : exclude_prefixes) {
        if (token.rfind(p, 0) == 0) {
          prefixed = true;
          break;
        }
      }
      if (prefixed) continue;
      if (seen.insert(token).second) ++hits[token];
    }
  }

  std::vector<Scored> ranked;
  for (const auto& [token, count] : hits) {
    if (count < min_context_count) continue;
    Scored s;
    s.token = token;
    s.hits = count;
    s.total = static_cast<long long>(spans.size());
    if (mode == Mode::kSentence) {
      s.freq_num = stats.containment.at(token);
      s.freq_den = stats.sentence_count;
    } else {
      s.freq_num = stats.occurrences.at(token);
      s.freq_den = stats.token_total;
    }
    ranked.push_back(std::move(s));
  }

  std::sort(ranked.begin(), ranked.end(), [](const Scored& a, const Scored& b) {
    const __int128 lhs = static_cast<__int128>(a.hits) * b.freq_num;
    const __int128 rhs = static_cast<__int128>(b.hits) * a.freq_num;
    if (lhs != rhs) return lhs > rhs;
    if (a.hits != b.hits) return a.hits > b.hits;
    return a.token < b.token;
  });
  return ranked;
}

}  // namespace oracle

#include "delex/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "delex/errors.hpp"

namespace delex {

const char* to_string(RelFreqMode mode) {
  return mode == RelFreqMode::kSentence ? "sentence" : "token";
}

std::optional<RelFreqMode> relfreq_mode_from(std::string_view name) {
  if (name == "sentence") return RelFreqMode::kSentence;
  if (name == "token") return RelFreqMode::kToken;
  return std::nullopt;
}

std::vector<CandidateCount> collect_candidates(const Corpus& corpus,
                                               std::span<const ContextSpan> spans,
                                               const Exclusions& exclusions,
                                               std::uint32_t min_context_count) {
  const auto& vocab = corpus.vocab();

  // Precompute non-candidate ids once; spans then stay in id space.
  std::vector<bool> dropped(vocab.size(), false);
  for (TokenId t = 0; t < vocab.size(); ++t) {
    const std::string& text = vocab.text(t);
    if (is_punctuation_token(text)) {
      dropped[t] = true;
      continue;
    }
    for (const auto& p : exclusions.prefixes) {
      if (text.starts_with(p)) {
        dropped[t] = true;
        break;
      }
    }
  }
  for (const auto& e : exclusions.exact) {
    if (auto id = vocab.find(e)) dropped[*id] = true;
  }

  std::unordered_map<TokenId, std::uint32_t> hits;
  std::vector<TokenId> seen;  // distinct tokens within the current span
  for (const ContextSpan& span : spans) {
    auto sentence = corpus.sentence(span.sentence_id);
    seen.clear();
    for (std::uint32_t pos = span.begin; pos < span.end; ++pos) {
      TokenId t = sentence[pos];
      if (dropped[t]) continue;
      if (std::find(seen.begin(), seen.end(), t) == seen.end()) seen.push_back(t);
    }
    for (TokenId t : seen) ++hits[t];
  }

  std::vector<CandidateCount> result;
  result.reserve(hits.size());
  for (const auto& [token, count] : hits) {
    if (count >= min_context_count) result.push_back(CandidateCount{token, count});
  }
  std::sort(result.begin(), result.end(),
            [](const CandidateCount& a, const CandidateCount& b) { return a.token < b.token; });
  return result;
}

bool ranks_before(const RankedCandidate& a, const RankedCandidate& b) {
  // score = (hits / total) * (freq_den / freq_num); total and freq_den are
  // shared across one run, so comparing hits/freq_num cross-multiplied is
  // exact. unsigned __int128 keeps the product well inside range.
  const unsigned __int128 lhs =
      static_cast<unsigned __int128>(a.context_hits) * b.freq_num;
  const unsigned __int128 rhs =
      static_cast<unsigned __int128>(b.context_hits) * a.freq_num;
  if (lhs != rhs) return lhs > rhs;
  if (a.context_hits != b.context_hits) return a.context_hits > b.context_hits;
  return a.token < b.token;
}

std::vector<RankedCandidate> score_candidates(const Corpus& corpus, const CorpusIndex& index,
                                              std::span<const CandidateCount> candidates,
                                              std::uint32_t context_total, RelFreqMode mode) {
  if (context_total == 0) {
    throw CoverageError("no contexts to score: trigger tokens yield zero contexts in this corpus");
  }

  const std::uint64_t freq_den =
      mode == RelFreqMode::kSentence ? index.sentence_count() : index.token_total();

  std::vector<RankedCandidate> ranking;
  ranking.reserve(candidates.size());
  for (const CandidateCount& c : candidates) {
    RankedCandidate rc;
    rc.token = corpus.token_text(c.token);
    rc.context_hits = c.context_hits;
    rc.context_total = context_total;
    rc.freq_num = mode == RelFreqMode::kSentence ? index.containment(c.token)
                                                 : index.occurrences(c.token);
    rc.freq_den = freq_den;
    rc.rel_freq = static_cast<double>(rc.freq_num) / static_cast<double>(rc.freq_den);
    rc.score = (static_cast<double>(rc.context_hits) / static_cast<double>(rc.context_total)) /
               rc.rel_freq;
    ranking.push_back(std::move(rc));
  }
  std::sort(ranking.begin(), ranking.end(), ranks_before);
  return ranking;
}

std::string format_double(double value) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void write_ranking_tsv(std::ostream& out, std::span<const RankedCandidate> ranking) {
  out << "rank\ttoken\tscore\tcontext_hits\tcontext_total\trel_freq\n";
  std::size_t rank = 0;
  for (const RankedCandidate& c : ranking) {
    out << ++rank << '\t' << c.token << '\t' << format_double(c.score) << '\t' << c.context_hits
        << '\t' << c.context_total << '\t' << format_double(c.rel_freq) << '\n';
  }
}

void write_ranking_tsv(const std::string& path, std::span<const RankedCandidate> ranking) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write ranking file: " + path);
  write_ranking_tsv(out, ranking);
  if (!out) throw IoError("failed while writing ranking file: " + path);
}

std::vector<RankedCandidate> read_ranking_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ranking file: " + path);

  std::vector<RankedCandidate> ranking;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("rank\t")) continue;

    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (fields.size() != 6) {
      throw ParseError(path, line_no, "expected 6 tab-separated columns, got " +
                                          std::to_string(fields.size()));
    }
    RankedCandidate c;
    try {
      c.token = fields[1];
      c.score = std::stod(fields[2]);
      c.context_hits = static_cast<std::uint32_t>(std::stoul(fields[3]));
      c.context_total = static_cast<std::uint32_t>(std::stoul(fields[4]));
      c.rel_freq = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw ParseError(path, line_no, "malformed ranking row");
    }
    ranking.push_back(std::move(c));
  }
  return ranking;
}

}  // namespace delex

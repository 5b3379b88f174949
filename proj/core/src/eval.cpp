#include "delex/eval.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "delex/errors.hpp"

namespace delex {

const char* to_string(GoldLabel label) {
  switch (label) {
    case GoldLabel::kDe: return "DE";
    case GoldLabel::kNotDe: return "NOT_DE";
    case GoldLabel::kHard: return "HARD";
  }
  return "?";
}

std::optional<GoldLabel> gold_label_from(std::string_view name) {
  if (name == "DE") return GoldLabel::kDe;
  if (name == "NOT_DE") return GoldLabel::kNotDe;
  if (name == "HARD") return GoldLabel::kHard;
  return std::nullopt;
}

std::optional<GoldLabel> GoldLabelSet::lookup(const std::string& token) const {
  auto it = labels.find(token);
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

GoldLabelSet load_labels_tsv(const std::string& path, const TokenizerConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path);

  GoldLabelSet gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, line_no, "expected token<TAB>label");
    }
    const std::string raw_token = line.substr(0, tab);
    const std::string label_text = line.substr(tab + 1);

    auto normalized = tokenize(raw_token, config);
    if (normalized.size() != 1) {
      throw ParseError(path, line_no, "'" + raw_token + "' does not normalize to one token");
    }
    auto label = gold_label_from(label_text);
    if (!label) {
      throw ParseError(path, line_no, "unknown label '" + label_text +
                                          "' (expected DE, NOT_DE or HARD)");
    }
    auto [it, inserted] = gold.labels.emplace(normalized[0], *label);
    if (!inserted) {
      throw ParseError(path, line_no, "duplicate label for token '" + normalized[0] + "'");
    }
  }
  return gold;
}

void save_labels_tsv(const std::string& path, const GoldLabelSet& gold) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write labels file: " + path);
  // Sorted for reproducible files.
  std::vector<const std::pair<const std::string, GoldLabel>*> rows;
  rows.reserve(gold.labels.size());
  for (const auto& kv : gold.labels) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  for (const auto* row : rows) {
    out << row->first << '\t' << to_string(row->second) << '\n';
  }
  if (!out) throw IoError("failed while writing labels file: " + path);
}

PrecisionReport precision_at_k(std::span<const std::string> ranked_tokens,
                               const GoldLabelSet& gold, std::uint32_t k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > ranked_tokens.size()) {
    throw ConfigError("k=" + std::to_string(k) + " exceeds ranking length " +
                      std::to_string(ranked_tokens.size()));
  }
  PrecisionReport report;
  report.k = k;
  for (std::uint32_t i = 0; i < k; ++i) {
    auto label = gold.lookup(ranked_tokens[i]);
    if (!label) {
      ++report.unlabeled_count;  // treated as NOT_DE for precision, reported apart
    } else if (*label == GoldLabel::kDe) {
      ++report.de_count;
    } else if (*label == GoldLabel::kHard) {
      ++report.hard_count;
    } else {
      ++report.not_de_count;
    }
  }
  report.precision = static_cast<double>(report.de_count) / static_cast<double>(k);
  return report;
}

namespace {

std::vector<std::string> tokens_of(std::span<const RankedCandidate> ranking) {
  std::vector<std::string> tokens;
  tokens.reserve(ranking.size());
  for (const auto& c : ranking) tokens.push_back(c.token);
  return tokens;
}

}  // namespace

PrecisionReport precision_at_k(std::span<const RankedCandidate> ranking,
                               const GoldLabelSet& gold, std::uint32_t k) {
  return precision_at_k(tokens_of(ranking), gold, k);
}

std::vector<PrecisionReport> precision_curve(std::span<const std::string> ranked_tokens,
                                             const GoldLabelSet& gold,
                                             std::span<const std::uint32_t> ks) {
  std::vector<PrecisionReport> reports;
  reports.reserve(ks.size());
  for (std::uint32_t k : ks) reports.push_back(precision_at_k(ranked_tokens, gold, k));
  return reports;
}

std::vector<PrecisionReport> precision_curve(std::span<const RankedCandidate> ranking,
                                             const GoldLabelSet& gold,
                                             std::span<const std::uint32_t> ks) {
  return precision_curve(tokens_of(ranking), gold, ks);
}

void write_report_tsv(std::ostream& out, std::span<const PrecisionReport> reports, int iteration) {
  if (iteration >= 0) out << "iteration\t";
  out << "k\tde\thard\tnot_de\tunlabeled\tprecision\n";
  for (const PrecisionReport& r : reports) {
    if (iteration >= 0) out << iteration << '\t';
    out << r.k << '\t' << r.de_count << '\t' << r.hard_count << '\t' << r.not_de_count << '\t'
        << r.unlabeled_count << '\t' << format_double(r.precision) << '\n';
  }
}

}  // namespace delex

#pragma once

#include <unordered_map>

#include "delex/scoring.hpp"

namespace delex {

enum class GoldLabel { kDe, kNotDe, kHard };

const char* to_string(GoldLabel label);
std::optional<GoldLabel> gold_label_from(std::string_view name);

// Token -> {DE, NOT_DE, HARD}. Tokens are normalized with the same fold as
// the corpus tokenizer when loaded from file.
struct GoldLabelSet {
  std::unordered_map<std::string, GoldLabel> labels;

  std::optional<GoldLabel> lookup(const std::string& token) const;
};

// TSV "token<TAB>label" with labels DE | NOT_DE | HARD; '#' starts a comment.
GoldLabelSet load_labels_tsv(const std::string& path, const TokenizerConfig& config = {});
void save_labels_tsv(const std::string& path, const GoldLabelSet& gold);

struct PrecisionReport {
  std::uint32_t k = 0;
  std::uint32_t de_count = 0;
  std::uint32_t hard_count = 0;
  std::uint32_t not_de_count = 0;
  std::uint32_t unlabeled_count = 0;
  double precision = 0.0;  // de_count / k; Hard never counts toward the numerator

  bool operator==(const PrecisionReport&) const = default;
};

// Counts labels over the top k tokens. Unlabeled tokens count as NOT_DE for
// precision but are reported separately. Throws ConfigError when k is 0 or
// exceeds the ranking length; the list is never silently truncated.
PrecisionReport precision_at_k(std::span<const std::string> ranked_tokens,
                               const GoldLabelSet& gold, std::uint32_t k);
PrecisionReport precision_at_k(std::span<const RankedCandidate> ranking,
                               const GoldLabelSet& gold, std::uint32_t k);

std::vector<PrecisionReport> precision_curve(std::span<const std::string> ranked_tokens,
                                             const GoldLabelSet& gold,
                                             std::span<const std::uint32_t> ks);
std::vector<PrecisionReport> precision_curve(std::span<const RankedCandidate> ranking,
                                             const GoldLabelSet& gold,
                                             std::span<const std::uint32_t> ks);

// TSV with header: k, de, hard, not_de, unlabeled, precision. When
// iteration >= 0 an iteration column is prepended.
void write_report_tsv(std::ostream& out, std::span<const PrecisionReport> reports, int iteration = -1);

}  // namespace delex

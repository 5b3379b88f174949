#pragma once

#include "delex/corpus.hpp"
#include "delex/eval.hpp"

namespace delex {

// How planted operators pair with planted pseudo-NPIs.
//   kChained: operator group g co-occurs with pNPIs {g, g+1, g+2}, so the
//             seed pNPIs only reach the first groups and later groups are
//             reachable only through newly learned pNPIs.
//   kFull:    every operator co-occurs with every pNPI; the seed alone
//             already covers all operators.
enum class SynthCoverage { kChained, kFull };

const char* to_string(SynthCoverage coverage);
std::optional<SynthCoverage> synth_coverage_from(std::string_view name);

struct SynthSpec {
  std::uint64_t rng_seed = 1;
  std::uint32_t sentence_count = 100000;
  std::vector<std::string> operators;  // planted DE operators (labeled DE)
  std::vector<std::string> pnpis;      // planted pseudo-NPIs (labeled NOT_DE)
  std::uint32_t seed_count = 2;        // leading pNPIs exported as the seed set
  std::uint32_t background_vocab = 400;
  double cooccur_prob = 0.7;             // q: operator followed by a pNPI in its right context
  double operator_sentence_rate = 0.30;  // share of sentences built around an operator
  double pnpi_background_rate = 0.08;    // noise: pNPI used with no operator nearby
  SynthCoverage coverage = SynthCoverage::kChained;

  void validate() const;  // throws ConfigError on a degenerate spec
};

// "deop00".."deopNN" / "pnpi00".."pnpiNN" defaults.
std::vector<std::string> default_operator_names(std::uint32_t count);
std::vector<std::string> default_pnpi_names(std::uint32_t count);

// JSON spec file; operator/pnpi sets may be given as explicit lists
// ("operators") or as counts ("operator_count") expanded to default names.
SynthSpec load_synth_spec(const std::string& path);
void save_synth_spec(const std::string& path, const SynthSpec& spec);

struct SynthOutput {
  std::string corpus_text;             // one sentence per line
  Corpus corpus;                       // the same text, ingested
  GoldLabelSet gold;                   // operators DE, everything else NOT_DE
  std::vector<std::string> seed_pnpis; // first seed_count planted pNPIs
};

// Deterministic for a fixed rng_seed: the same spec always yields the same
// corpus text, labels and seeds.
SynthOutput generate_synthetic_corpus(const SynthSpec& spec);

}  // namespace delex

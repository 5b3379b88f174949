#include "delex/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "delex/errors.hpp"

namespace delex {

namespace {

// Self-contained generator so corpora stay stable across platforms and
// standard-library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

std::string numbered(const char* stem, std::uint32_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02u", stem, i);
  return buf;
}

}  // namespace

const char* to_string(SynthCoverage coverage) {
  return coverage == SynthCoverage::kChained ? "chained" : "full";
}

std::optional<SynthCoverage> synth_coverage_from(std::string_view name) {
  if (name == "chained") return SynthCoverage::kChained;
  if (name == "full") return SynthCoverage::kFull;
  return std::nullopt;
}

std::vector<std::string> default_operator_names(std::uint32_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) names.push_back(numbered("deop", i));
  return names;
}

std::vector<std::string> default_pnpi_names(std::uint32_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) names.push_back(numbered("pnpi", i));
  return names;
}

void SynthSpec::validate() const {
  if (operators.empty()) throw ConfigError("synthetic spec: operator set is empty");
  if (pnpis.empty()) throw ConfigError("synthetic spec: pNPI set is empty");
  for (const auto& op : operators) {
    if (std::find(pnpis.begin(), pnpis.end(), op) != pnpis.end()) {
      throw ConfigError("synthetic spec: '" + op + "' is both an operator and a pNPI");
    }
  }
  for (const auto* set : {&operators, &pnpis}) {
    for (const auto& t : *set) {
      auto normalized = tokenize(t);
      if (normalized.size() != 1 || normalized[0] != t) {
        throw ConfigError("synthetic spec: '" + t + "' is not a single normalized token");
      }
    }
  }
  if (seed_count < 1 || seed_count > pnpis.size()) {
    throw ConfigError("synthetic spec: seed_count must be in [1, pnpi count]");
  }
  if (!(cooccur_prob > 0.0 && cooccur_prob <= 1.0)) {
    throw ConfigError("synthetic spec: cooccur_prob must be in (0, 1]");
  }
  if (operator_sentence_rate < 0.0 || pnpi_background_rate < 0.0 ||
      operator_sentence_rate + pnpi_background_rate > 1.0) {
    throw ConfigError("synthetic spec: sentence rates must be nonnegative and sum to <= 1");
  }
  if (sentence_count == 0) throw ConfigError("synthetic spec: sentence_count must be >= 1");
  if (background_vocab < 2) throw ConfigError("synthetic spec: background_vocab must be >= 2");
}

SynthOutput generate_synthetic_corpus(const SynthSpec& spec) {
  spec.validate();

  const std::uint32_t op_count = static_cast<std::uint32_t>(spec.operators.size());
  const std::uint32_t pnpi_count = static_cast<std::uint32_t>(spec.pnpis.size());

  std::vector<std::string> background;
  background.reserve(spec.background_vocab);
  for (std::uint32_t i = 0; i < spec.background_vocab; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%03u", i);
    background.emplace_back(buf);
  }

  // Operators come in groups of two; group g pairs with pNPIs {g, g+1, g+2}.
  // The chain is what forces the loop to learn new pNPIs before it can see
  // the later operator groups.
  std::vector<std::vector<std::uint32_t>> compat(op_count);
  for (std::uint32_t op = 0; op < op_count; ++op) {
    if (spec.coverage == SynthCoverage::kFull) {
      compat[op].resize(pnpi_count);
      for (std::uint32_t j = 0; j < pnpi_count; ++j) compat[op][j] = j;
    } else {
      const std::uint32_t g = op / 2;
      for (std::uint32_t j : {g, g + 1, g + 2}) {
        const std::uint32_t clamped = std::min(j, pnpi_count - 1);
        if (std::find(compat[op].begin(), compat[op].end(), clamped) == compat[op].end()) {
          compat[op].push_back(clamped);
        }
      }
    }
  }

  SplitMix64 rng(spec.rng_seed);
  std::string text;
  text.reserve(static_cast<std::size_t>(spec.sentence_count) * 48);

  std::vector<std::string> tokens;
  for (std::uint32_t s = 0; s < spec.sentence_count; ++s) {
    tokens.clear();
    const auto push_background = [&](std::uint32_t n) {
      for (std::uint32_t i = 0; i < n; ++i) tokens.push_back(background[rng.below(spec.background_vocab)]);
    };

    const double r = rng.unit();
    if (r < spec.operator_sentence_rate) {
      const std::uint32_t op = rng.below(op_count);
      push_background(1 + rng.below(3));
      if (rng.unit() < 0.5) tokens.push_back(",");
      tokens.push_back(spec.operators[op]);
      if (rng.unit() < spec.cooccur_prob) {
        push_background(rng.below(3));
        const auto& pool = compat[op];
        tokens.push_back(spec.pnpis[pool[rng.below(static_cast<std::uint32_t>(pool.size()))]]);
        push_background(1 + rng.below(3));
      } else {
        push_background(1 + rng.below(4));
      }
    } else if (r < spec.operator_sentence_rate + spec.pnpi_background_rate) {
      push_background(1 + rng.below(4));
      tokens.push_back(spec.pnpis[rng.below(pnpi_count)]);
      push_background(rng.below(4));
    } else {
      const std::uint32_t len = 5 + rng.below(8);
      push_background(len);
      if (len >= 3 && rng.unit() < 0.3) {
        tokens.insert(tokens.begin() + (1 + rng.below(len - 2)), ",");
      }
    }
    if (rng.unit() < 0.5) tokens.push_back(".");

    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) text.push_back(' ');
      text += tokens[i];
    }
    text.push_back('\n');
  }

  SynthOutput out;
  out.corpus_text = std::move(text);
  std::istringstream stream(out.corpus_text);
  out.corpus = ingest(stream, TokenizerConfig{}, "<synthetic>");

  for (const auto& op : spec.operators) out.gold.labels.emplace(op, GoldLabel::kDe);
  for (const auto& p : spec.pnpis) out.gold.labels.emplace(p, GoldLabel::kNotDe);
  for (const auto& w : background) out.gold.labels.emplace(w, GoldLabel::kNotDe);

  out.seed_pnpis.assign(spec.pnpis.begin(), spec.pnpis.begin() + spec.seed_count);
  return out;
}

namespace {

using nlohmann::json;

std::vector<std::string> names_from(const json& j, const std::string& list_key,
                                    const std::string& count_key,
                                    std::vector<std::string> (*defaults)(std::uint32_t),
                                    const std::string& path) {
  if (j.contains(list_key)) {
    return j.at(list_key).get<std::vector<std::string>>();
  }
  if (j.contains(count_key)) {
    return defaults(j.at(count_key).get<std::uint32_t>());
  }
  throw ConfigError(path + ": spec needs either '" + list_key + "' or '" + count_key + "'");
}

}  // namespace

SynthSpec load_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synthetic spec: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }

  static const std::vector<std::string> known = {
      "rng_seed",     "sentence_count",   "operators",        "operator_count",
      "pnpis",        "pnpi_count",       "seed_count",       "background_vocab",
      "cooccur_prob", "operator_sentence_rate", "pnpi_background_rate", "coverage"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(path + ": unknown spec field '" + key + "'");
    }
  }

  SynthSpec spec;
  try {
    spec.operators = names_from(j, "operators", "operator_count", default_operator_names, path);
    spec.pnpis = names_from(j, "pnpis", "pnpi_count", default_pnpi_names, path);
    if (j.contains("rng_seed")) spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("sentence_count")) spec.sentence_count = j.at("sentence_count").get<std::uint32_t>();
    if (j.contains("seed_count")) spec.seed_count = j.at("seed_count").get<std::uint32_t>();
    if (j.contains("background_vocab")) spec.background_vocab = j.at("background_vocab").get<std::uint32_t>();
    if (j.contains("cooccur_prob")) spec.cooccur_prob = j.at("cooccur_prob").get<double>();
    if (j.contains("operator_sentence_rate")) spec.operator_sentence_rate = j.at("operator_sentence_rate").get<double>();
    if (j.contains("pnpi_background_rate")) spec.pnpi_background_rate = j.at("pnpi_background_rate").get<double>();
    if (j.contains("coverage")) {
      auto coverage = synth_coverage_from(j.at("coverage").get<std::string>());
      if (!coverage) throw ConfigError(path + ": coverage must be 'chained' or 'full'");
      spec.coverage = *coverage;
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": bad spec value: " + e.what());
  }
  spec.validate();
  return spec;
}

void save_synth_spec(const std::string& path, const SynthSpec& spec) {
  nlohmann::ordered_json j;
  j["rng_seed"] = spec.rng_seed;
  j["sentence_count"] = spec.sentence_count;
  j["operators"] = spec.operators;
  j["pnpis"] = spec.pnpis;
  j["seed_count"] = spec.seed_count;
  j["background_vocab"] = spec.background_vocab;
  j["cooccur_prob"] = spec.cooccur_prob;
  j["operator_sentence_rate"] = spec.operator_sentence_rate;
  j["pnpi_background_rate"] = spec.pnpi_background_rate;
  j["coverage"] = to_string(spec.coverage);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write synthetic spec: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed while writing synthetic spec: " + path);
}

}  // namespace delex

#include "delex/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "delex/errors.hpp"

namespace fs = std::filesystem;

namespace delex {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> load_token_lines(const std::string& path, const TokenizerConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open token file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    std::string raw = line.substr(first, last - first + 1);
    if (raw[0] == '#') continue;
    auto normalized = tokenize(raw, config);
    if (normalized.size() != 1) {
      throw ParseError(path, line_no, "'" + raw + "' does not normalize to one token");
    }
    tokens.push_back(normalized[0]);
  }
  return tokens;
}

SentenceFilter normalized_blacklist(const std::string& path, const TokenizerConfig& config) {
  SentenceFilter raw = load_blacklist(path);
  SentenceFilter filter;
  for (const auto& e : raw.exact) {
    auto n = tokenize(e, config);
    if (n.size() != 1) throw ConfigError(path + ": blacklist entry '" + e + "' is not one token");
    filter.exact.push_back(n[0]);
  }
  for (const auto& p : raw.prefixes) {
    auto n = tokenize(p, config);
    if (n.size() != 1) throw ConfigError(path + ": blacklist prefix '" + p + "' is not one token");
    filter.prefixes.push_back(n[0]);
  }
  return filter;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed while writing file: " + path);
}

void write_pnpis_tsv(const std::string& path, std::span<const PnpiEntry> pnpis) {
  std::string body = "order\ttoken\tadded_after_iteration\n";
  std::size_t order = 0;
  for (const PnpiEntry& e : pnpis) {
    body += std::to_string(++order);
    body += '\t';
    body += e.token;
    body += '\t';
    body += e.added_after_iteration < 0 ? "seed" : std::to_string(e.added_after_iteration);
    body += '\n';
  }
  write_text_file(path, body);
}

ordered_json manifest_json(const RunConfig& config, const std::vector<std::string>& seeds,
                           const SentenceFilter& filter, const Corpus& corpus,
                           const CorpusIndex& index, const CoLearnResult& result) {
  ordered_json m;
  m["tool"] = "delex";
  m["manifest_format"] = 1;
  m["corpus"] = {{"path", config.corpus_path},
                 {"digest", corpus.source_digest()},
                 {"sentences", index.sentence_count()},
                 {"tokens", index.token_total()}};
  m["tokenizer"] = corpus.tokenizer().describe();
  m["filter"] = {{"blacklist_exact", filter.exact},
                 {"blacklist_prefixes", filter.prefixes},
                 {"filter_questions", config.filter_questions},
                 {"filter_de_contexts", config.filter_de_contexts}};
  m["scoring"] = {{"relfreq", to_string(config.relfreq)},
                  {"min_context_count", config.min_context_count}};
  m["colearn"] = {{"seeds", seeds},
                  {"n0", config.n0},
                  {"n_r", config.n_r},
                  {"iterations", config.iterations},
                  {"pnpi_policy", "append-only"}};
  m["provenance"] = {{"seeds_path", config.seeds_path},
                     {"blacklist_path", config.blacklist_path}};
  if (result.early_termination) {
    m["outcome"] = {{"completed_iterations", result.history.size()},
                    {"early_termination",
                     {{"iteration", result.early_termination->iteration},
                      {"reason", result.early_termination->reason}}}};
  } else {
    m["outcome"] = {{"completed_iterations", result.history.size()},
                    {"early_termination", nullptr}};
  }
  return m;
}

}  // namespace

void RunConfig::validate() const {
  if (replay_manifest.empty() && corpus_path.empty()) {
    throw ConfigError("run: --corpus is required");
  }
  if (out_dir.empty()) throw ConfigError("run: --out is required");
  if (replay_manifest.empty() && seeds_path.empty()) {
    throw ConfigError("run: --seeds is required (or use --replay)");
  }
  if (n0 < 1) throw ConfigError("run: --n0 must be >= 1");
  if (n_r < 1) throw ConfigError("run: --nr must be >= 1");
  if (iterations < 0) throw ConfigError("run: --iters must be >= 0");
  if (min_context_count < 1) throw ConfigError("run: --min-count must be >= 1");
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }

  RunManifest manifest;
  try {
    manifest.config.corpus_path = m.at("corpus").at("path").get<std::string>();
    manifest.corpus_digest = m.at("corpus").at("digest").get<std::string>();
    manifest.tokenizer_description = m.at("tokenizer").get<std::string>();

    const auto& filter = m.at("filter");
    manifest.filter.exact = filter.at("blacklist_exact").get<std::vector<std::string>>();
    manifest.filter.prefixes = filter.at("blacklist_prefixes").get<std::vector<std::string>>();
    manifest.config.filter_questions = filter.at("filter_questions").get<bool>();
    manifest.config.filter_de_contexts = filter.at("filter_de_contexts").get<bool>();

    const auto& scoring = m.at("scoring");
    auto relfreq = relfreq_mode_from(scoring.at("relfreq").get<std::string>());
    if (!relfreq) throw ConfigError(path + ": unknown relfreq mode");
    manifest.config.relfreq = *relfreq;
    manifest.config.min_context_count = scoring.at("min_context_count").get<std::uint32_t>();

    const auto& colearn = m.at("colearn");
    manifest.seeds = colearn.at("seeds").get<std::vector<std::string>>();
    manifest.config.n0 = colearn.at("n0").get<int>();
    manifest.config.n_r = colearn.at("n_r").get<int>();
    manifest.config.iterations = colearn.at("iterations").get<int>();

    if (m.contains("provenance")) {
      manifest.config.seeds_path = m.at("provenance").value("seeds_path", "");
      manifest.config.blacklist_path = m.at("provenance").value("blacklist_path", "");
    }
    if (m.contains("outcome")) {
      manifest.completed_iterations = m.at("outcome").value("completed_iterations", 0);
      if (m.at("outcome").contains("early_termination") &&
          !m.at("outcome").at("early_termination").is_null()) {
        const auto& e = m.at("outcome").at("early_termination");
        manifest.early_termination =
            EarlyTermination{e.at("iteration").get<int>(), e.at("reason").get<std::string>()};
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": manifest missing field: " + e.what());
  }
  return manifest;
}

int cmd_index(const IndexConfig& config, std::ostream& out, std::ostream& err) {
  if (config.corpus_path.empty()) throw ConfigError("index: --corpus is required");
  const std::string cache = config.cache_path.empty() ? config.corpus_path + ".idx"
                                                      : config.cache_path;

  Corpus corpus = ingest_file(config.corpus_path);
  std::string why;
  auto cached = CorpusIndex::load_cache(cache, corpus, &why);
  CorpusIndex index;
  if (cached) {
    index = std::move(*cached);
    out << "index cache hit: " << cache << "\n";
  } else {
    if (fs::exists(cache)) err << "warning: rebuilding index cache (" << why << ")\n";
    index = CorpusIndex::build(corpus);
    index.save_cache(cache, corpus);
    out << "index cache written: " << cache << "\n";
  }
  out << "sentences\t" << index.sentence_count() << "\n";
  out << "tokens\t" << index.token_total() << "\n";
  out << "vocabulary\t" << index.vocab_size() << "\n";
  out << "digest\t" << corpus.source_digest() << "\n";
  return kExitOk;
}

int cmd_run(const RunConfig& run_config, std::ostream& out, std::ostream& err) {
  RunConfig config = run_config;
  config.validate();

  std::vector<std::string> seeds;
  SentenceFilter filter;
  if (!config.replay_manifest.empty()) {
    RunManifest manifest = load_manifest(config.replay_manifest);
    // The replay keeps the recorded inputs; only the output directory and
    // cache location come from the caller.
    manifest.config.out_dir = config.out_dir;
    manifest.config.cache_path = config.cache_path;
    seeds = manifest.seeds;
    filter = manifest.filter;
    config = manifest.config;
    config.replay_manifest = run_config.replay_manifest;
    config.validate();
  } else {
    seeds = load_token_lines(config.seeds_path, TokenizerConfig{});
    if (seeds.empty()) throw ConfigError(config.seeds_path + ": seed file has no tokens");
    if (!config.blacklist_path.empty()) {
      filter = normalized_blacklist(config.blacklist_path, TokenizerConfig{});
    }
  }
  filter.filter_questions = config.filter_questions;

  Corpus corpus = ingest_file(config.corpus_path);
  if (!config.replay_manifest.empty()) {
    RunManifest manifest = load_manifest(config.replay_manifest);
    if (manifest.corpus_digest != corpus.source_digest()) {
      throw ConfigError("replay: corpus at " + config.corpus_path +
                        " does not match the manifest digest (" + corpus.source_digest() +
                        " vs " + manifest.corpus_digest + ")");
    }
  }

  CorpusIndex index;
  if (!config.cache_path.empty()) {
    std::string why;
    auto cached = CorpusIndex::load_cache(config.cache_path, corpus, &why);
    if (cached) {
      index = std::move(*cached);
      err << "index cache hit: " << config.cache_path << "\n";
    } else {
      if (fs::exists(config.cache_path)) {
        err << "warning: rebuilding index cache (" << why << ")\n";
      }
      index = CorpusIndex::build(corpus);
      index.save_cache(config.cache_path, corpus);
    }
  } else {
    index = CorpusIndex::build(corpus);
  }

  fs::create_directories(config.out_dir);

  CoLearnConfig colearn;
  colearn.seeds = seeds;
  colearn.n0 = config.n0;
  colearn.n_r = config.n_r;
  colearn.iterations = config.iterations;
  colearn.filter = filter;
  colearn.filter_de_contexts = config.filter_de_contexts;
  colearn.scoring.relfreq = config.relfreq;
  colearn.scoring.min_context_count = config.min_context_count;

  const fs::path out_dir(config.out_dir);
  std::size_t warnings_reported = 0;
  const auto on_iteration = [&](const IterationRecord& record, const CoLearnResult& partial) {
    write_ranking_tsv((out_dir / ("iter_" + std::to_string(record.iteration) + ".tsv")).string(),
                      record.de_ranking);
    write_pnpis_tsv((out_dir / "pnpis.tsv").string(), partial.pnpi_set);
    for (; warnings_reported < partial.warnings.size(); ++warnings_reported) {
      err << "warning: " << partial.warnings[warnings_reported] << "\n";
    }
    out << "iteration " << record.iteration << ": " << record.de_ranking.size()
        << " DE candidates";
    if (!record.new_pnpis.empty()) {
      out << "; new pNPIs:";
      for (const auto& p : record.new_pnpis) out << ' ' << p;
    }
    out << "\n";
  };

  CoLearnResult result = run_colearn(corpus, index, colearn, on_iteration);
  for (; warnings_reported < result.warnings.size(); ++warnings_reported) {
    err << "warning: " << result.warnings[warnings_reported] << "\n";
  }

  ordered_json manifest = manifest_json(config, seeds, filter, corpus, index, result);
  write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");

  if (result.early_termination) {
    err << "early termination: " << result.early_termination->reason << "\n";
    return kExitEarlyTermination;
  }
  out << "run complete: " << result.history.size() << " rankings in " << config.out_dir << "\n";
  return kExitOk;
}

int cmd_eval(const EvalConfig& config, std::ostream& out, std::ostream& err) {
  if (config.labels_path.empty()) throw ConfigError("eval: --labels is required");
  if (config.ks.empty()) throw ConfigError("eval: --ks is required");
  if (config.ranking_path.empty() == config.run_dir.empty()) {
    throw ConfigError("eval: give exactly one of --ranking or --run-dir");
  }

  const GoldLabelSet gold = load_labels_tsv(config.labels_path);

  std::ostringstream body;
  if (!config.ranking_path.empty()) {
    auto ranking = read_ranking_tsv(config.ranking_path);
    auto reports = precision_curve(ranking, gold, config.ks);
    write_report_tsv(body, reports);
  } else {
    bool found_any = false;
    for (int t = 0;; ++t) {
      const fs::path path = fs::path(config.run_dir) / ("iter_" + std::to_string(t) + ".tsv");
      if (!fs::exists(path)) break;
      auto ranking = read_ranking_tsv(path.string());
      auto reports = precision_curve(ranking, gold, config.ks);
      if (!found_any) {
        body << "iteration\tk\tde\thard\tnot_de\tunlabeled\tprecision\n";
        found_any = true;
      }
      for (const PrecisionReport& r : reports) {
        body << t << '\t' << r.k << '\t' << r.de_count << '\t' << r.hard_count << '\t'
             << r.not_de_count << '\t' << r.unlabeled_count << '\t'
             << format_double(r.precision) << '\n';
      }
    }
    if (!found_any) {
      throw ConfigError("eval: no iter_<t>.tsv files under " + config.run_dir);
    }
  }

  if (config.out_path.empty()) {
    out << body.str();
  } else {
    write_text_file(config.out_path, body.str());
    out << "report written: " << config.out_path << "\n";
  }
  (void)err;
  return kExitOk;
}

int cmd_synth(const SynthConfig& config, std::ostream& out, std::ostream& err) {
  if (config.spec_path.empty()) throw ConfigError("synth: --spec is required");
  if (config.out_dir.empty()) throw ConfigError("synth: --out is required");

  const SynthSpec spec = load_synth_spec(config.spec_path);
  SynthOutput synth = generate_synthetic_corpus(spec);

  fs::create_directories(config.out_dir);
  const fs::path out_dir(config.out_dir);
  write_text_file((out_dir / "corpus.txt").string(), synth.corpus_text);
  save_labels_tsv((out_dir / "labels.tsv").string(), synth.gold);
  std::string seeds_body;
  for (const auto& s : synth.seed_pnpis) {
    seeds_body += s;
    seeds_body += '\n';
  }
  write_text_file((out_dir / "seeds.txt").string(), seeds_body);
  save_synth_spec((out_dir / "synth.json").string(), spec);

  out << "synthetic corpus: " << synth.corpus.sentence_count() << " sentences, "
      << spec.operators.size() << " planted operators, " << spec.pnpis.size()
      << " planted pNPIs, digest " << synth.corpus.source_digest() << "\n";
  out << "wrote corpus.txt, labels.tsv, seeds.txt, synth.json under " << config.out_dir << "\n";
  (void)err;
  return kExitOk;
}

}  // namespace delex

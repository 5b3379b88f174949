// delex: discovers downward-entailing operators from raw text by iterating
// between DE-operator retrieval (from pseudo-NPI contexts) and pseudo-NPI
// retrieval (from DE-operator contexts).

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "delex/commands.hpp"
#include "delex/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"delex: downward-entailing operator discovery from raw text"};
  app.require_subcommand(1);

  delex::IndexConfig index_config;
  auto* index = app.add_subcommand("index", "build and cache a corpus index");
  index->add_option("--corpus", index_config.corpus_path, "corpus file, one sentence per line")
      ->required();
  index->add_option("--cache", index_config.cache_path,
                    "index cache path (default: <corpus>.idx)");

  delex::RunConfig run_config;
  std::string relfreq_name = "sentence";
  auto* run = app.add_subcommand("run", "run the co-learning loop");
  run->add_option("--corpus", run_config.corpus_path, "corpus file, one sentence per line");
  run->add_option("--seeds", run_config.seeds_path, "seed pseudo-NPI file, one token per line");
  run->add_option("--blacklist", run_config.blacklist_path,
                  "well-known-environment file; trailing '-' marks a prefix form");
  run->add_flag("--filter-questions,!--no-filter-questions", run_config.filter_questions,
                "skip sentences containing '?' during NPI-context extraction (default: on)");
  run->add_flag("--filter-de-contexts", run_config.filter_de_contexts,
                "apply the sentence filter on the DE-context side too (default: off)");
  run->add_option("--relfreq", relfreq_name, "relative-frequency mode: sentence|token")
      ->check(CLI::IsMember({"sentence", "token"}));
  run->add_option("--min-count", run_config.min_context_count,
                  "minimum context hits for a candidate (default: 1)");
  run->add_option("--n0", run_config.n0, "initial DE cutoff n (default: 10)");
  run->add_option("--nr", run_config.n_r, "pNPIs adopted per iteration (default: 1)");
  run->add_option("--iters", run_config.iterations, "co-learning iterations (default: 9)");
  run->add_option("--out", run_config.out_dir, "output directory")->required();
  run->add_option("--cache", run_config.cache_path, "optional index cache to reuse or create");
  run->add_option("--replay", run_config.replay_manifest,
                  "replay a previous run from its manifest.json");

  delex::EvalConfig eval_config;
  auto* eval = app.add_subcommand("eval", "precision-at-k report for ranked lists");
  eval->add_option("--ranking", eval_config.ranking_path, "one ranking TSV");
  eval->add_option("--run-dir", eval_config.run_dir, "run directory with iter_<t>.tsv files");
  eval->add_option("--labels", eval_config.labels_path, "gold labels TSV (token<TAB>label)")
      ->required();
  eval->add_option("--ks", eval_config.ks, "cutoffs, e.g. --ks 10,20,30")
      ->required()
      ->delimiter(',');
  eval->add_option("--out", eval_config.out_path, "report file (default: stdout)");

  delex::SynthConfig synth_config;
  auto* synth = app.add_subcommand("synth", "generate a planted-operator corpus");
  synth->add_option("--spec", synth_config.spec_path, "synthetic spec JSON")->required();
  synth->add_option("--out", synth_config.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? delex::kExitOk : delex::kExitConfig;
  }

  try {
    if (*index) return delex::cmd_index(index_config, std::cout, std::cerr);
    if (*run) return delex::cmd_run(run_config, std::cout, std::cerr);
    if (*eval) return delex::cmd_eval(eval_config, std::cout, std::cerr);
    if (*synth) return delex::cmd_synth(synth_config, std::cout, std::cerr);
  } catch (const delex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return delex::kExitIo;
  }
  return delex::kExitOk;
}

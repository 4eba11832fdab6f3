// Command-line front-end for the controversy detection pipeline:
//   controversy synth      generate a labeled benchmark corpus
//   controversy extract    feature + diagnostics CSVs from a corpus
//   controversy train      boosted-stump model from labeled threads
//   controversy evaluate   ablation metrics table (cross-validated)
//   controversy subthreads per-subtree predictions under a trained model

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "controversy/pipeline.hpp"

namespace {

void add_common_flags(CLI::App* cmd, controversy::Config& cfg) {
  cmd->add_option("--out", cfg.out_dir, "Output directory")->envname("CONTROVERSY_OUT");
  cmd->add_option("--seed", cfg.seed, "Random seed (printed on every run)")
      ->envname("CONTROVERSY_SEED");
  cmd->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)")
      ->envname("CONTROVERSY_JOBS");
}

void add_dataset_flags(CLI::App* cmd, controversy::Config& cfg, bool required) {
  auto* threads = cmd->add_option("--threads", cfg.threads_path, "threads.jsonl path")
                      ->envname("CONTROVERSY_THREADS");
  auto* follows = cmd->add_option("--follows", cfg.follows_path, "follows.tsv path")
                      ->envname("CONTROVERSY_FOLLOWS");
  if (required) {
    threads->required();
    follows->required();
  }
  cmd->add_option("--k", cfg.k, "Keep threads with more than k users")
      ->envname("CONTROVERSY_K");
  cmd->add_flag("--strict", cfg.strict, "Reject malformed input instead of skipping it")
      ->envname("CONTROVERSY_STRICT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controversy detection from reply/follow interaction motifs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Optional config file (flags override it)");

  controversy::Config cfg;

  auto* extract = app.add_subcommand("extract", "Write features.csv and diagnostics.csv");
  add_dataset_flags(extract, cfg, true);
  add_common_flags(extract, cfg);

  auto* train = app.add_subcommand("train", "Train a model; writes model.json and a report");
  add_dataset_flags(train, cfg, true);
  add_common_flags(train, cfg);
  train->add_option("--mask", cfg.mask,
                    "Feature mask: baseline | baseline+dyadic | baseline+dyadic+triadic | "
                    "dyadic-only | all (default baseline+dyadic+triadic)")
      ->envname("CONTROVERSY_MASK");
  train->add_option("--rounds", cfg.rounds, "Boosting rounds")->envname("CONTROVERSY_ROUNDS");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Cross-validated metrics; full mask/filter grid unless --mask is given");
  add_dataset_flags(evaluate, cfg, true);
  add_common_flags(evaluate, cfg);
  evaluate->add_option("--mask", cfg.mask, "Evaluate a single mask at the configured --k")
      ->envname("CONTROVERSY_MASK");
  evaluate->add_option("--rounds", cfg.rounds, "Boosting rounds")->envname("CONTROVERSY_ROUNDS");
  evaluate->add_option("--folds", cfg.folds, "Cross-validation folds")
      ->envname("CONTROVERSY_FOLDS");
  evaluate->add_option("--protocol", cfg.protocol, "cv | split")
      ->envname("CONTROVERSY_PROTOCOL");
  evaluate->add_option("--holdout", cfg.holdout, "Test fraction for --protocol split");
  evaluate->add_flag("--group-by-source", cfg.group_by_source,
                     "Keep threads from one source page in one fold");

  auto* subthreads = app.add_subcommand(
      "subthreads", "Classify direct-reply subtrees of non-controversial threads");
  add_dataset_flags(subthreads, cfg, true);
  add_common_flags(subthreads, cfg);
  subthreads->add_option("--model", cfg.model_path, "model.json path")
      ->required()
      ->envname("CONTROVERSY_MODEL");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  add_common_flags(synth, cfg);
  synth->add_option("--params", cfg.params_path, "Generator parameter JSON file")
      ->envname("CONTROVERSY_PARAMS");

  CLI11_PARSE(app, argc, argv);
  cfg.seed_from_flag = synth->count("--seed") > 0;

  try {
    if (extract->parsed()) {
      controversy::run_extract(cfg, std::cout);
    } else if (train->parsed()) {
      controversy::run_train(cfg, std::cout);
    } else if (evaluate->parsed()) {
      controversy::run_evaluate(cfg, std::cout);
    } else if (subthreads->parsed()) {
      controversy::run_subthreads(cfg, std::cout);
    } else if (synth->parsed()) {
      controversy::run_synth(cfg, std::cout);
    }
  } catch (const controversy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "signrec/commands.hpp"

using namespace signrec;

int main(int argc, char** argv) {
  CLI::App app{"Sign-aware graph recommender"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "Config file (flat key = value lines)");
  auto* seed_opt = app.add_option("--seed", global.seed, "Override the experiment seed");
  auto* threads_opt = app.add_option("--threads", global.threads, "Worker threads for evaluation");
  app.add_flag("--deterministic", global.deterministic,
               "Force single-threaded, bit-reproducible execution");

  std::string input_path, dataset_dir, run_dir, out_path;
  std::vector<std::string> user_tokens;
  int k = 10;
  int fold = 0;
  bool no_filter = false;

  auto* prepare = app.add_subcommand("prepare", "Parse a rating log and write dataset folds");
  prepare->add_option("input", input_path, "Raw rating log")->required();
  prepare->add_option("out_dir", dataset_dir, "Dataset directory to create")->required();

  auto* train = app.add_subcommand("train", "Train one run over every fold");
  train->add_option("dataset_dir", dataset_dir, "Prepared dataset directory")->required();
  train->add_option("run_dir", run_dir, "Run directory to create")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score the best checkpoints of a run");
  evaluate->add_option("run_dir", run_dir, "Run directory")->required();
  evaluate->add_flag("--no-filter", no_filter, "Skip the dislike filter when ranking");
  evaluate->add_option("--out", out_path, "Report CSV path (default: inside the run)");

  auto* recommend = app.add_subcommand("recommend", "Dump top-K lists from a trained run");
  recommend->add_option("run_dir", run_dir, "Run directory")->required();
  recommend->add_option("--users", user_tokens, "User tokens (default: everyone)");
  recommend->add_option("-k,--top", k, "List length");
  recommend->add_option("--fold", fold, "Fold whose checkpoint to use");
  recommend->add_flag("--no-filter", no_filter, "Skip the dislike filter");
  recommend->add_option("--out", out_path, "Output path (default: inside the run)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    global.seed_set = seed_opt->count() > 0;
    global.threads_set = threads_opt->count() > 0;
    const AppConfig cfg = resolve_config(global);
    if (prepare->parsed()) return cmd_prepare(cfg, input_path, dataset_dir);
    if (train->parsed()) return cmd_train(cfg, dataset_dir, run_dir);
    if (evaluate->parsed()) return cmd_evaluate(cfg, run_dir, no_filter, out_path);
    if (recommend->parsed()) {
      return cmd_recommend(cfg, run_dir, user_tokens, k, fold, no_filter, out_path);
    }
    return exit_usage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return exit_io;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return exit_validation;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return exit_numeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  }
}

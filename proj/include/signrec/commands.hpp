#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signrec/config.hpp"

namespace signrec {

// Settings every subcommand shares, gathered from global flags.
// Flags override the config file; --deterministic pins one thread.
struct GlobalOptions {
  std::string config_path;
  bool seed_set = false;
  std::uint64_t seed = 0;
  bool threads_set = false;
  int threads = 1;
  bool deterministic = false;
};

AppConfig resolve_config(const GlobalOptions& opts);

// Each command validates its inputs, does the work and returns exit_ok,
// or throws (IoError, ValidationError, NumericError); the entry point
// maps exceptions to the exit codes in types.hpp.
int cmd_prepare(const AppConfig& cfg, const std::string& input_path, const std::string& out_dir);

int cmd_train(const AppConfig& cfg, const std::string& dataset_dir, const std::string& run_dir);

int cmd_evaluate(const AppConfig& cfg, const std::string& run_dir, bool no_filter,
                 const std::string& out_csv);

int cmd_recommend(const AppConfig& cfg, const std::string& run_dir,
                  const std::vector<std::string>& user_tokens, int k, int fold, bool no_filter,
                  const std::string& out_path);

}  // namespace signrec

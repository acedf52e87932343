#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "signrec/trainer.hpp"

namespace signrec {

// Experiment settings shared by every command. The config file is flat
// `key = value` text, one setting per line; keys mirror the field names
// here and in TrainConfig, '#' starts a comment. Command-line flags
// override file values.
struct AppConfig {
  // ingestion and splitting
  char delimiter = '\t';  // written symbolically: tab, comma, space, semicolon
  int min_user_interactions = 5;
  int min_item_interactions = 5;
  double split_ratio = 0.8;
  int num_folds = 5;

  TrainConfig train;

  // evaluation
  std::vector<int> eval_ks{10, 20};
  int filter_k = 0;  // 0 keeps the ban list as large as the cutoff

  void validate() const;
};

AppConfig parse_config(std::istream& in);
AppConfig load_config(const std::string& path);

// Writes every key; parse_config(write_config(c)) reproduces c exactly.
void write_config(std::ostream& out, const AppConfig& cfg);

}  // namespace signrec

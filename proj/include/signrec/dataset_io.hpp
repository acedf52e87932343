#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signrec/config.hpp"
#include "signrec/ratings.hpp"
#include "signrec/split.hpp"

namespace signrec {

// Corpus-level numbers recorded at preparation time. Everything needed
// to reload the folds consistently (threshold, fold count, seed) lives
// here rather than in the training config, so a dataset directory is
// self-describing.
struct DatasetStats {
  std::int64_t users = 0;
  std::int64_t items = 0;
  std::int64_t interactions = 0;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
  std::int64_t malformed = 0;
  std::int64_t duplicates = 0;
  std::int64_t kcore_removed = 0;
  double density = 0.0;
  double neg_per_pos = 0.0;
  double split_ratio = 0.8;
  double delta = 2.5;
  int num_folds = 5;
  std::uint64_t seed = 42;
  std::string checksum;
};

// A dataset directory after prepare: users.vocab, items.vocab,
// stats.json and fold<f>.train.tsv / fold<f>.test.tsv per fold.
struct PreparedDataset {
  Vocabulary users;
  Vocabulary items;
  DatasetStats stats;
};

// FNV-1a over the file's raw bytes, 16 hex digits.
std::string file_checksum(const std::string& path);

// parse -> deduplicate -> k-core -> index -> split, then persist.
// Rerunning with identical input and config writes identical bytes.
DatasetStats prepare_dataset(const std::string& input_path, const std::string& out_dir,
                             const AppConfig& cfg);

PreparedDataset load_prepared(const std::string& dir);

DatasetSplit load_fold(const std::string& dir, const PreparedDataset& prepared, int fold);

}  // namespace signrec

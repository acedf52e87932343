#pragma once

#include <cstdint>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/ratings.hpp"
#include "signrec/types.hpp"

namespace signrec {

// One train/test partition plus the training graph built from it.
// test_positive keeps only held-out interactions above the signing
// threshold; those are the relevance labels for ranking metrics.
struct DatasetSplit {
  int fold = 0;
  Index num_users = 0;
  Index num_items = 0;
  std::vector<IndexedRating> train_records;
  std::vector<IndexedRating> test_records;
  SignedBipartiteGraph train;
  std::vector<std::vector<Index>> test_positive;  // per user, sorted
};

// Builds the graph and relevance labels for an existing partition
// (used both by the splitter and when reloading folds from disk).
DatasetSplit assemble_split(std::vector<IndexedRating> train_records,
                            std::vector<IndexedRating> test_records, Index num_users,
                            Index num_items, double delta, int fold);

// Per-user holdout: each user's interactions are shuffled and roughly
// (1 - ratio) of them go to the test side, at least one and never all.
// Users with a single interaction keep it in training. Each fold draws
// from an independent stream of `seed`, so folds are repeatable
// individually.
DatasetSplit make_split(const std::vector<IndexedRating>& ratings, Index num_users,
                        Index num_items, double ratio, double delta, int fold,
                        std::uint64_t seed);

std::vector<DatasetSplit> split_folds(const std::vector<IndexedRating>& ratings, Index num_users,
                                      Index num_items, double ratio, double delta, int num_folds,
                                      std::uint64_t seed);

}  // namespace signrec

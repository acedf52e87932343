#include "signrec/split.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signrec/rng.hpp"

namespace signrec {

DatasetSplit assemble_split(std::vector<IndexedRating> train_records,
                            std::vector<IndexedRating> test_records, Index num_users,
                            Index num_items, double delta, int fold) {
  DatasetSplit split;
  split.fold = fold;
  split.num_users = num_users;
  split.num_items = num_items;
  split.train_records = std::move(train_records);
  split.test_records = std::move(test_records);

  auto part = sign_edges(split.train_records, delta);
  split.train = SignedBipartiteGraph::build(num_users, num_items, part.positive, part.negative);

  split.test_positive.assign(num_users, {});
  for (const auto& r : split.test_records) {
    if (r.user < 0 || r.user >= num_users || r.item < 0 || r.item >= num_items) {
      throw ValidationError("test record index out of range");
    }
    if (r.rating > delta) split.test_positive[r.user].push_back(r.item);
  }
  for (auto& items : split.test_positive) std::sort(items.begin(), items.end());
  return split;
}

DatasetSplit make_split(const std::vector<IndexedRating>& ratings, Index num_users,
                        Index num_items, double ratio, double delta, int fold,
                        std::uint64_t seed) {
  if (ratio <= 0.0 || ratio >= 1.0) {
    throw ValidationError("split ratio must lie in (0, 1), got " + std::to_string(ratio));
  }
  std::vector<std::vector<std::size_t>> by_user(num_users);
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    const auto& r = ratings[k];
    if (r.user < 0 || r.user >= num_users || r.item < 0 || r.item >= num_items) {
      throw ValidationError("rating index out of range");
    }
    by_user[r.user].push_back(k);
  }

  Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(fold));
  std::vector<IndexedRating> train, test;
  train.reserve(ratings.size());
  for (Index u = 0; u < num_users; ++u) {
    auto& own = by_user[u];
    const std::size_t n = own.size();
    if (n < 2) {
      for (const auto k : own) train.push_back(ratings[k]);
      continue;
    }
    shuffle(own, rng);
    std::size_t n_test = static_cast<std::size_t>(std::llround((1.0 - ratio) * double(n)));
    n_test = std::max<std::size_t>(n_test, 1);
    n_test = std::min(n_test, n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (k < n_test) {
        test.push_back(ratings[own[k]]);
      } else {
        train.push_back(ratings[own[k]]);
      }
    }
  }
  return assemble_split(std::move(train), std::move(test), num_users, num_items, delta, fold);
}

std::vector<DatasetSplit> split_folds(const std::vector<IndexedRating>& ratings, Index num_users,
                                      Index num_items, double ratio, double delta, int num_folds,
                                      std::uint64_t seed) {
  if (num_folds < 1) {
    throw ValidationError("num_folds must be >= 1, got " + std::to_string(num_folds));
  }
  std::vector<DatasetSplit> folds;
  folds.reserve(static_cast<std::size_t>(num_folds));
  for (int f = 0; f < num_folds; ++f) {
    folds.push_back(make_split(ratings, num_users, num_items, ratio, delta, f, seed));
  }
  return folds;
}

}  // namespace signrec

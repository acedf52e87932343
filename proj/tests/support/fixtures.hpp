#pragma once

// Shared hand-built inputs. The small signed graph below is used across
// the graph, propagation and loss tests; its degrees and normalization
// constants are worked out by hand in the tests that need them.

#include <string>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/ratings.hpp"
#include "signrec/rng.hpp"

namespace testsup {

// 4 users x 5 items, 6 positive and 3 negative edges, threshold 2.5.
//
//   user0: +item0 +item2
//   user1: +item1 -item2
//   user2: +item1 -item0 -item3
//   user3: +item3 +item4
//
// Layout highlights: user0 shares item0 positively with user2's negative
// rating of it, and item2 positively with user1's negative rating, so
// user0's higher-layer negative channel is fed purely through opposite-
// preference neighbors. item3 has exactly one negative rater (user2),
// which the propagation tests exploit to trace a single signal.
inline std::vector<signrec::IndexedRating> small_ratings() {
  return {
      {0, 0, 5.0}, {0, 2, 4.0}, {1, 1, 5.0}, {2, 1, 4.0}, {3, 3, 5.0}, {3, 4, 4.0},
      {1, 2, 2.0}, {2, 0, 1.0}, {2, 3, 2.0},
  };
}

inline constexpr signrec::Index kSmallUsers = 4;
inline constexpr signrec::Index kSmallItems = 5;

inline signrec::SignedBipartiteGraph small_graph() {
  const auto ratings = small_ratings();
  const auto part = signrec::sign_edges(ratings, 2.5);
  return signrec::SignedBipartiteGraph::build(kSmallUsers, kSmallItems, part.positive,
                                              part.negative);
}

// Synthetic log with planted structure: two disjoint communities. Each
// user rates own-community items highly, a couple of cross-community
// items highly (noise) and several cross-community items poorly. A
// working ranker should surface unseen own-community items; the filter
// should be able to push leaked cross-community items back out.
struct PlantedLog {
  std::vector<signrec::RatingRecord> records;
  int users_per_cluster = 0;
  int items_per_cluster = 0;
  int cluster_of_user(int u) const { return u / users_per_cluster; }
  int cluster_of_item(int i) const { return i / items_per_cluster; }
};

inline PlantedLog make_planted_log(signrec::Rng& rng, int users_per_cluster = 50,
                                   int items_per_cluster = 50, int own_pos = 20,
                                   int cross_pos = 2, int cross_neg = 10) {
  PlantedLog log;
  log.users_per_cluster = users_per_cluster;
  log.items_per_cluster = items_per_cluster;
  const auto uid = [](int u) { return "u" + std::to_string(u); };
  const auto iid = [](int i) { return "i" + std::to_string(i); };

  for (int c = 0; c < 2; ++c) {
    const int other = 1 - c;
    for (int k = 0; k < users_per_cluster; ++k) {
      const int u = c * users_per_cluster + k;
      std::vector<int> own(items_per_cluster), cross(items_per_cluster);
      for (int i = 0; i < items_per_cluster; ++i) {
        own[i] = c * items_per_cluster + i;
        cross[i] = other * items_per_cluster + i;
      }
      signrec::shuffle(own, rng);
      signrec::shuffle(cross, rng);
      for (int i = 0; i < own_pos; ++i) {
        log.records.push_back({uid(u), iid(own[i]), rng.uniform_int(2) ? 5.0 : 4.0});
      }
      for (int i = 0; i < cross_pos; ++i) {
        log.records.push_back({uid(u), iid(cross[i]), rng.uniform_int(2) ? 5.0 : 4.0});
      }
      for (int i = cross_pos; i < cross_pos + cross_neg; ++i) {
        log.records.push_back({uid(u), iid(cross[i]), rng.uniform_int(2) ? 2.0 : 1.0});
      }
    }
  }
  return log;
}

}  // namespace testsup

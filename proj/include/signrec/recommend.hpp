#pragma once

#include <iosfwd>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/propagation.hpp"
#include "signrec/types.hpp"

namespace signrec {

struct RecommendationList {
  Index user = 0;
  std::vector<Index> items;   // ranked, best first
  std::vector<double> scores;  // positive-channel scores, parallel to items
};

// Inner products of one user's channel embedding with every item.
template <typename T>
std::vector<double> score_items_positive(const FinalEmbeddings<T>& finals, Index user);
template <typename T>
std::vector<double> score_items_negative(const FinalEmbeddings<T>& finals, Index user);

// Top-k by positive score over items the user has not interacted with
// (under either sign). Ties break toward the lower item index. When the
// filter is enabled, the filter_k strongest negative-channel items are
// removed from the ranking and later candidates move up; filter_k <= 0
// means "same as k".
template <typename T>
RecommendationList recommend_user(const SignedBipartiteGraph& graph,
                                  const FinalEmbeddings<T>& finals, Index user, int k,
                                  bool filter_enabled, int filter_k = 0);

// All users; num_threads > 1 shards users across worker threads. The
// result does not depend on the thread count.
template <typename T>
std::vector<RecommendationList> recommend_all(const SignedBipartiteGraph& graph,
                                              const FinalEmbeddings<T>& finals, int k,
                                              bool filter_enabled, int filter_k = 0,
                                              int num_threads = 1);

// One line per user: "user item:score item:score ...", scores with six
// decimal places.
void write_recommendations(std::ostream& out, const std::vector<RecommendationList>& lists);

}  // namespace signrec

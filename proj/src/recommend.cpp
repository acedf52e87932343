#include "signrec/recommend.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "signrec/kernels.hpp"

namespace signrec {

namespace {

template <typename T>
std::vector<double> score_channel(const Matrix<T>& user_rows, const Matrix<T>& item_rows,
                                  Index user) {
  if (user < 0 || user >= user_rows.rows()) {
    throw ValidationError("user index out of range for scoring");
  }
  const std::size_t d = static_cast<std::size_t>(user_rows.cols());
  const T* eu = user_rows.row(user).data();
  std::vector<double> scores(static_cast<std::size_t>(item_rows.rows()));
  for (Index i = 0; i < item_rows.rows(); ++i) {
    scores[static_cast<std::size_t>(i)] =
        static_cast<double>(kernels::dot(eu, item_rows.row(i).data(), d));
  }
  return scores;
}

struct ScoredItem {
  double score;
  Index item;
};

// Descending score, ascending index on ties.
bool better(const ScoredItem& a, const ScoredItem& b) {
  return a.score != b.score ? a.score > b.score : a.item < b.item;
}

std::vector<ScoredItem> top_candidates(const std::vector<ScoredItem>& candidates,
                                       std::size_t count) {
  std::vector<ScoredItem> top = candidates;
  const std::size_t take = std::min(count, top.size());
  std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(take), top.end(),
                    better);
  top.resize(take);
  return top;
}

}  // namespace

template <typename T>
std::vector<double> score_items_positive(const FinalEmbeddings<T>& finals, Index user) {
  return score_channel(finals.pos_user, finals.pos_item, user);
}

template <typename T>
std::vector<double> score_items_negative(const FinalEmbeddings<T>& finals, Index user) {
  return score_channel(finals.neg_user, finals.neg_item, user);
}

template <typename T>
RecommendationList recommend_user(const SignedBipartiteGraph& graph,
                                  const FinalEmbeddings<T>& finals, Index user, int k,
                                  bool filter_enabled, int filter_k) {
  if (k < 1) throw ValidationError("recommendation size k must be >= 1");
  if (user < 0 || user >= graph.num_users()) {
    throw ValidationError("user index out of range");
  }
  const int ban_size = filter_enabled ? (filter_k > 0 ? filter_k : k) : 0;

  const auto pos_scores = score_items_positive(finals, user);
  const auto seen = graph.items_of(user);
  std::vector<ScoredItem> candidates;
  candidates.reserve(pos_scores.size() - seen.size());
  std::size_t seen_pos = 0;
  for (Index i = 0; i < graph.num_items(); ++i) {
    if (seen_pos < seen.size() && seen[seen_pos] == i) {
      ++seen_pos;
      continue;
    }
    candidates.push_back({pos_scores[static_cast<std::size_t>(i)], i});
  }

  std::unordered_set<Index> banned;
  if (ban_size > 0 && !candidates.empty()) {
    const auto neg_scores = score_items_negative(finals, user);
    std::vector<ScoredItem> neg_candidates;
    neg_candidates.reserve(candidates.size());
    for (const auto& c : candidates) {
      neg_candidates.push_back({neg_scores[static_cast<std::size_t>(c.item)], c.item});
    }
    const auto neg_top = top_candidates(neg_candidates, static_cast<std::size_t>(ban_size));
    for (const auto& s : neg_top) banned.insert(s.item);
  }

  // At most ban_size items can be skipped, so k + ban_size covers it.
  const auto pos_top =
      top_candidates(candidates, static_cast<std::size_t>(k) + banned.size());
  RecommendationList rec;
  rec.user = user;
  for (const auto& s : pos_top) {
    if (static_cast<int>(rec.items.size()) >= k) break;
    if (banned.contains(s.item)) continue;
    rec.items.push_back(s.item);
    rec.scores.push_back(s.score);
  }
  return rec;
}

template <typename T>
std::vector<RecommendationList> recommend_all(const SignedBipartiteGraph& graph,
                                              const FinalEmbeddings<T>& finals, int k,
                                              bool filter_enabled, int filter_k,
                                              int num_threads) {
  const Index m = graph.num_users();
  std::vector<RecommendationList> out(static_cast<std::size_t>(m));
  const auto run = [&](Index begin, Index end) {
    for (Index u = begin; u < end; ++u) {
      out[static_cast<std::size_t>(u)] =
          recommend_user(graph, finals, u, k, filter_enabled, filter_k);
    }
  };
  if (num_threads <= 1 || m < 2) {
    run(0, m);
    return out;
  }
  const int workers = std::min<int>(num_threads, m);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const Index chunk = (m + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min<Index>(begin + chunk, m);
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

void write_recommendations(std::ostream& out, const std::vector<RecommendationList>& lists) {
  char buf[64];
  for (const auto& rec : lists) {
    out << rec.user;
    for (std::size_t k = 0; k < rec.items.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %d:%.6f", rec.items[k], rec.scores[k]);
      out << buf;
    }
    out << '\n';
  }
}

template std::vector<double> score_items_positive(const FinalEmbeddings<float>&, Index);
template std::vector<double> score_items_positive(const FinalEmbeddings<double>&, Index);
template std::vector<double> score_items_negative(const FinalEmbeddings<float>&, Index);
template std::vector<double> score_items_negative(const FinalEmbeddings<double>&, Index);
template RecommendationList recommend_user(const SignedBipartiteGraph&,
                                           const FinalEmbeddings<float>&, Index, int, bool, int);
template RecommendationList recommend_user(const SignedBipartiteGraph&,
                                           const FinalEmbeddings<double>&, Index, int, bool, int);
template std::vector<RecommendationList> recommend_all(const SignedBipartiteGraph&,
                                                       const FinalEmbeddings<float>&, int, bool,
                                                       int, int);
template std::vector<RecommendationList> recommend_all(const SignedBipartiteGraph&,
                                                       const FinalEmbeddings<double>&, int, bool,
                                                       int, int);

}  // namespace signrec

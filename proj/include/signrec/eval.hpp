#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/propagation.hpp"
#include "signrec/types.hpp"

namespace signrec {

struct MetricValues {
  double precision = 0;
  double recall = 0;
  double ndcg = 0;
};

struct EvalReport {
  int fold = -1;
  std::map<int, MetricValues> by_k;
  std::int64_t users_evaluated = 0;
  double seconds = 0;
};

// Binary-relevance metrics for one ranked list, any element order.
// The discounted gain normalizer uses the ideal ranking capped at k.
MetricValues rank_metrics(std::span<const Index> ranked, std::span<const Index> relevant, int k);

// Ranks every user with held-out relevant items and averages the
// metrics. filter_k <= 0 keeps the ban list as large as each cutoff;
// a fixed filter_k lets all cutoffs share one ranking pass.
template <typename T>
EvalReport evaluate(const SignedBipartiteGraph& train, const FinalEmbeddings<T>& finals,
                    const std::vector<std::vector<Index>>& test_positive, std::span<const int> ks,
                    bool filter_enabled, int filter_k = 0, int num_threads = 1);

struct AggregateReport {
  std::vector<EvalReport> folds;
  std::map<int, MetricValues> mean;
  std::map<int, MetricValues> std_error;
};

AggregateReport aggregate_folds(const std::vector<EvalReport>& folds);

// "metric,K,fold,value" rows, then mean and stderr pseudo-folds.
void write_report_csv(std::ostream& out, const AggregateReport& report);
void write_report_table(std::ostream& out, const AggregateReport& report);

}  // namespace signrec

#include "signrec/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "signrec/recommend.hpp"

namespace signrec {

MetricValues rank_metrics(std::span<const Index> ranked, std::span<const Index> relevant, int k) {
  if (k < 1) throw ValidationError("metric cutoff must be >= 1");
  MetricValues m;
  if (relevant.empty()) return m;

  // Callers pass relevance sets in whatever order the split produced.
  std::vector<Index> rel(relevant.begin(), relevant.end());
  std::sort(rel.begin(), rel.end());

  int hits = 0;
  double dcg = 0.0;
  const int depth = std::min<int>(k, static_cast<int>(ranked.size()));
  for (int r = 0; r < depth; ++r) {
    if (std::binary_search(rel.begin(), rel.end(), ranked[r])) {
      ++hits;
      dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
    }
  }
  double idcg = 0.0;
  const int ideal = std::min<int>(k, static_cast<int>(relevant.size()));
  for (int r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);

  m.precision = static_cast<double>(hits) / static_cast<double>(k);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  m.ndcg = idcg > 0.0 ? dcg / idcg : 0.0;
  return m;
}

template <typename T>
EvalReport evaluate(const SignedBipartiteGraph& train, const FinalEmbeddings<T>& finals,
                    const std::vector<std::vector<Index>>& test_positive, std::span<const int> ks,
                    bool filter_enabled, int filter_k, int num_threads) {
  if (ks.empty()) throw ValidationError("at least one metric cutoff is required");
  if (static_cast<Index>(test_positive.size()) != train.num_users()) {
    throw ValidationError("relevance labels do not cover every user");
  }
  for (const int k : ks) {
    if (k < 1) throw ValidationError("metric cutoff must be >= 1");
  }

  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  const int max_k = *std::max_element(ks.begin(), ks.end());

  // With a fixed ban list size the ranking for a smaller cutoff is a
  // prefix of the larger one, so one pass at the deepest cutoff serves
  // all of them. The per-cutoff default ban list needs its own pass.
  std::map<int, std::vector<RecommendationList>> recs;
  if (!filter_enabled || filter_k > 0) {
    const auto deep =
        recommend_all(train, finals, max_k, filter_enabled, filter_k, num_threads);
    for (const int k : ks) recs[k] = deep;  // truncated during metric computation
  } else {
    for (const int k : ks) {
      recs[k] = recommend_all(train, finals, k, filter_enabled, k, num_threads);
    }
  }

  std::map<int, MetricValues> sums;
  std::int64_t counted = 0;
  for (Index u = 0; u < train.num_users(); ++u) {
    const auto& relevant = test_positive[static_cast<std::size_t>(u)];
    if (relevant.empty()) continue;
    ++counted;
    for (const int k : ks) {
      const auto& list = recs[k][static_cast<std::size_t>(u)].items;
      const auto depth = std::min<std::size_t>(list.size(), static_cast<std::size_t>(k));
      const auto m = rank_metrics({list.data(), depth}, {relevant.data(), relevant.size()}, k);
      sums[k].precision += m.precision;
      sums[k].recall += m.recall;
      sums[k].ndcg += m.ndcg;
    }
  }

  report.users_evaluated = counted;
  for (const int k : ks) {
    MetricValues m;
    if (counted > 0) {
      m.precision = sums[k].precision / static_cast<double>(counted);
      m.recall = sums[k].recall / static_cast<double>(counted);
      m.ndcg = sums[k].ndcg / static_cast<double>(counted);
    }
    report.by_k[k] = m;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

AggregateReport aggregate_folds(const std::vector<EvalReport>& folds) {
  if (folds.empty()) throw ValidationError("no fold reports to aggregate");
  for (const auto& f : folds) {
    if (f.by_k.size() != folds[0].by_k.size() ||
        !std::equal(f.by_k.begin(), f.by_k.end(), folds[0].by_k.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw ValidationError("fold reports disagree on metric cutoffs");
    }
  }

  AggregateReport agg;
  agg.folds = folds;
  const double n = static_cast<double>(folds.size());
  for (const auto& [k, unused] : folds[0].by_k) {
    MetricValues mean, var;
    for (const auto& f : folds) {
      const auto& m = f.by_k.at(k);
      mean.precision += m.precision / n;
      mean.recall += m.recall / n;
      mean.ndcg += m.ndcg / n;
    }
    if (folds.size() > 1) {
      for (const auto& f : folds) {
        const auto& m = f.by_k.at(k);
        var.precision += (m.precision - mean.precision) * (m.precision - mean.precision);
        var.recall += (m.recall - mean.recall) * (m.recall - mean.recall);
        var.ndcg += (m.ndcg - mean.ndcg) * (m.ndcg - mean.ndcg);
      }
      const double denom = n * (n - 1.0);
      var.precision = std::sqrt(var.precision / denom);
      var.recall = std::sqrt(var.recall / denom);
      var.ndcg = std::sqrt(var.ndcg / denom);
    }
    agg.mean[k] = mean;
    agg.std_error[k] = var;
  }
  return agg;
}

namespace {

void csv_row(std::ostream& out, const char* metric, int k, const std::string& fold, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  out << metric << ',' << k << ',' << fold << ',' << buf << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const AggregateReport& report) {
  out << "metric,K,fold,value\n";
  for (const auto& f : report.folds) {
    const std::string fold = std::to_string(f.fold);
    for (const auto& [k, m] : f.by_k) {
      csv_row(out, "precision", k, fold, m.precision);
      csv_row(out, "recall", k, fold, m.recall);
      csv_row(out, "ndcg", k, fold, m.ndcg);
    }
  }
  for (const auto& [k, m] : report.mean) {
    csv_row(out, "precision", k, "mean", m.precision);
    csv_row(out, "recall", k, "mean", m.recall);
    csv_row(out, "ndcg", k, "mean", m.ndcg);
  }
  for (const auto& [k, m] : report.std_error) {
    csv_row(out, "precision", k, "stderr", m.precision);
    csv_row(out, "recall", k, "stderr", m.recall);
    csv_row(out, "ndcg", k, "stderr", m.ndcg);
  }
}

void write_report_table(std::ostream& out, const AggregateReport& report) {
  char buf[160];
  out << "cutoff  precision        recall           ndcg             folds\n";
  for (const auto& [k, m] : report.mean) {
    const auto& se = report.std_error.at(k);
    std::snprintf(buf, sizeof(buf), "@%-6d %.4f +/-%.4f  %.4f +/-%.4f  %.4f +/-%.4f  %zu\n", k,
                  m.precision, se.precision, m.recall, se.recall, m.ndcg, se.ndcg,
                  report.folds.size());
    out << buf;
  }
}

template EvalReport evaluate(const SignedBipartiteGraph&, const FinalEmbeddings<float>&,
                             const std::vector<std::vector<Index>>&, std::span<const int>, bool,
                             int, int);
template EvalReport evaluate(const SignedBipartiteGraph&, const FinalEmbeddings<double>&,
                             const std::vector<std::vector<Index>>&, std::span<const int>, bool,
                             int, int);

}  // namespace signrec

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/model.hpp"
#include "signrec/rng.hpp"
#include "signrec/split.hpp"
#include "signrec/types.hpp"

namespace signrec {

struct TrainConfig {
  Index dim = 64;
  int num_layers = 2;
  double lr = 0.005;
  int batch_size = 1024;
  int epochs = 200;
  double lambda = 1e-4;
  double c1 = 1.5;
  double c2 = 1.5;
  double delta = 2.5;
  int negatives_per_obs = 1;
  std::vector<int> lr_milestones{100, 150};
  double lr_gamma = 0.5;
  std::uint64_t seed = 42;
  bool enable_bpr_neg = true;
  bool enable_mse = true;
  bool enable_ortho = true;
  bool enable_filter = true;
  Precision precision = Precision::double_prec;
  int eval_every = 10;  // cadence of best-model selection
  int eval_k = 10;      // recall cutoff used for selection
  int threads = 1;      // evaluation only; optimization is sequential

  // Throws ValidationError. Milestones must be strictly increasing and,
  // when any training happens, fall before the last epoch.
  void validate() const;
};

// Per-step loss terms, averaged over an epoch. l2 holds the raw squared
// parameter norm; total folds it in with the configured lambda, so
// total == bpr_pos + bpr_neg + mse + ortho + lambda * l2 exactly.
struct LossValues {
  double bpr_pos = 0, bpr_neg = 0, mse = 0, ortho = 0, l2 = 0, total = 0;
};

struct EpochLogEntry {
  int epoch = 0;
  double lr = 0;
  LossValues losses;
  double seconds = 0;
};

// Column names followed by one line per epoch.
void write_log_header(std::ostream& out);
void write_log_entry(std::ostream& out, const EpochLogEntry& entry);

// Base lr decayed by gamma once per milestone already reached.
double lr_schedule(const TrainConfig& cfg, int epoch);

template <typename T>
struct FoldResult {
  int fold = 0;
  ModelParams<T> best_params;
  int best_epoch = -1;     // -1 when nothing was evaluated (epochs == 0)
  double best_recall = 0;  // recall@eval_k on the fold's test set
  std::vector<EpochLogEntry> log;
};

// One pass over the training edges: ceil(|E| / batch_size) optimizer
// steps, each running the full forward, sampling a batch, accumulating
// the enabled loss gradients, backpropagating through the propagation
// chains and applying one Adam update. Throws NumericError if the total
// loss stops being finite.
template <typename T>
LossValues train_epoch(const SignedBipartiteGraph& graph, ModelParams<T>& params,
                       const TrainConfig& cfg, double lr, Rng& rng);

// Full training run on one fold. Evaluates recall@eval_k every
// eval_every epochs (and after the last one) and keeps the parameters
// of the best epoch seen. Log lines stream to log_stream when given.
template <typename T>
FoldResult<T> train_fold(const DatasetSplit& split, const TrainConfig& cfg,
                         std::ostream* log_stream = nullptr);

template <typename T>
std::vector<FoldResult<T>> fit(const std::vector<DatasetSplit>& splits, const TrainConfig& cfg,
                               std::ostream* log_stream = nullptr);

}  // namespace signrec

#include "signrec/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "signrec/eval.hpp"
#include "signrec/losses.hpp"
#include "signrec/propagation.hpp"

namespace signrec {

void TrainConfig::validate() const {
  if (dim < 1) throw ValidationError("embedding dimension must be at least 1");
  if (num_layers < 1) throw ValidationError("propagation needs at least one layer");
  if (lr < 0 || !std::isfinite(lr)) throw ValidationError("learning rate must be non-negative");
  if (batch_size < 1) throw ValidationError("batch size must be at least 1");
  if (epochs < 0) throw ValidationError("epoch count must be non-negative");
  if (lambda < 0) throw ValidationError("l2 weight must be non-negative");
  if (c1 <= 0 || c2 <= 0) throw ValidationError("confidence coefficients must be positive");
  if (negatives_per_obs < 1) throw ValidationError("need at least one unobserved item per pair");
  if (lr_gamma <= 0) throw ValidationError("lr decay factor must be positive");
  if (eval_every < 1) throw ValidationError("evaluation cadence must be at least 1");
  if (eval_k < 1) throw ValidationError("selection cutoff must be at least 1");
  if (threads < 1) throw ValidationError("thread count must be at least 1");
  for (std::size_t i = 0; i < lr_milestones.size(); ++i) {
    if (lr_milestones[i] < 1) throw ValidationError("lr milestones must be positive epochs");
    if (i > 0 && lr_milestones[i] <= lr_milestones[i - 1]) {
      throw ValidationError("lr milestones must be strictly increasing");
    }
    if (epochs > 0 && lr_milestones[i] >= epochs) {
      throw ValidationError("lr milestones must fall before the last epoch");
    }
  }
}

double lr_schedule(const TrainConfig& cfg, int epoch) {
  int passed = 0;
  for (const int m : cfg.lr_milestones) {
    if (m <= epoch) ++passed;
  }
  return cfg.lr * std::pow(cfg.lr_gamma, passed);
}

void write_log_header(std::ostream& out) {
  out << "epoch lr loss_total loss_bpr+ loss_bpr- loss_mse loss_ortho secs\n";
}

void write_log_entry(std::ostream& out, const EpochLogEntry& e) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f %.6f %.3f\n", e.epoch, e.lr,
                e.losses.total, e.losses.bpr_pos, e.losses.bpr_neg, e.losses.mse, e.losses.ortho,
                e.seconds);
  out << buf;
}

template <typename T>
LossValues train_epoch(const SignedBipartiteGraph& graph, ModelParams<T>& params,
                       const TrainConfig& cfg, double lr, Rng& rng) {
  LossValues mean;
  const std::int64_t batches =
      (graph.num_edges() + cfg.batch_size - 1) / static_cast<std::int64_t>(cfg.batch_size);
  if (batches == 0) return mean;

  FinalGradients<T> finals_grad;
  finals_grad.init(graph.num_users(), graph.num_items(), params.dim());

  for (std::int64_t step = 0; step < batches; ++step) {
    const auto state =
        full_forward(graph, params.e0_user.value, params.e0_item.value, cfg.num_layers);
    const auto batch = sample_batch(graph, cfg.batch_size, cfg.negatives_per_obs, rng);

    finals_grad.clear();
    LossValues cur;
    cur.bpr_pos = bpr_positive(batch, state.finals, cfg.c1, finals_grad);
    if (cfg.enable_bpr_neg) cur.bpr_neg = bpr_negative(batch, state.finals, cfg.c2, finals_grad);
    if (cfg.enable_mse) {
      cur.mse = mse_rating(batch, state.finals, params.w1.value, params.w2.value, finals_grad,
                           params.w1.grad, params.w2.grad);
    }
    if (cfg.enable_ortho) cur.ortho = orthogonality(state.finals, finals_grad);

    backward(graph, cfg.num_layers, finals_grad, params.e0_user.grad, params.e0_item.grad);
    cur.l2 = l2_penalty(params, cfg.lambda);
    cur.total = cur.bpr_pos + cur.bpr_neg + cur.mse + cur.ortho + cfg.lambda * cur.l2;
    if (!std::isfinite(cur.total)) throw NumericError("training loss is not finite");
    adam_step(params, lr);

    mean.bpr_pos += cur.bpr_pos;
    mean.bpr_neg += cur.bpr_neg;
    mean.mse += cur.mse;
    mean.ortho += cur.ortho;
    mean.l2 += cur.l2;
    mean.total += cur.total;
  }

  const double inv = 1.0 / static_cast<double>(batches);
  mean.bpr_pos *= inv;
  mean.bpr_neg *= inv;
  mean.mse *= inv;
  mean.ortho *= inv;
  mean.l2 *= inv;
  mean.total *= inv;
  return mean;
}

template <typename T>
FoldResult<T> train_fold(const DatasetSplit& split, const TrainConfig& cfg,
                         std::ostream* log_stream) {
  cfg.validate();
  using clock = std::chrono::steady_clock;

  FoldResult<T> out;
  out.fold = split.fold;

  // Streams 100+ keep clear of the split module's per-fold streams.
  Rng init_rng = Rng::derive(cfg.seed, 100 + 2 * static_cast<std::uint64_t>(split.fold));
  Rng sample_rng = Rng::derive(cfg.seed, 101 + 2 * static_cast<std::uint64_t>(split.fold));

  auto params = init_params<T>(split.num_users, split.num_items, cfg.dim, init_rng);
  out.best_params = params;

  if (log_stream && cfg.epochs > 0) write_log_header(*log_stream);

  const std::vector<int> ks{cfg.eval_k};
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(cfg, epoch);
    const auto started = clock::now();
    const LossValues losses = train_epoch(split.train, params, cfg, lr, sample_rng);
    const double secs = std::chrono::duration<double>(clock::now() - started).count();

    EpochLogEntry entry{epoch, lr, losses, secs};
    out.log.push_back(entry);
    if (log_stream) write_log_entry(*log_stream, entry);

    if ((epoch + 1) % cfg.eval_every == 0 || epoch + 1 == cfg.epochs) {
      const auto state =
          full_forward(split.train, params.e0_user.value, params.e0_item.value, cfg.num_layers);
      const auto report = evaluate(split.train, state.finals, split.test_positive, ks,
                                   cfg.enable_filter, 0, cfg.threads);
      const double recall = report.by_k.at(cfg.eval_k).recall;
      if (out.best_epoch < 0 || recall > out.best_recall) {
        out.best_epoch = epoch;
        out.best_recall = recall;
        out.best_params = params;
      }
    }
  }
  return out;
}

template <typename T>
std::vector<FoldResult<T>> fit(const std::vector<DatasetSplit>& splits, const TrainConfig& cfg,
                               std::ostream* log_stream) {
  if (splits.empty()) throw ValidationError("need at least one fold to train on");
  std::vector<FoldResult<T>> results;
  results.reserve(splits.size());
  for (const auto& split : splits) {
    results.push_back(train_fold<T>(split, cfg, log_stream));
  }
  return results;
}

template LossValues train_epoch<float>(const SignedBipartiteGraph&, ModelParams<float>&,
                                       const TrainConfig&, double, Rng&);
template LossValues train_epoch<double>(const SignedBipartiteGraph&, ModelParams<double>&,
                                        const TrainConfig&, double, Rng&);
template FoldResult<float> train_fold<float>(const DatasetSplit&, const TrainConfig&,
                                             std::ostream*);
template FoldResult<double> train_fold<double>(const DatasetSplit&, const TrainConfig&,
                                               std::ostream*);
template std::vector<FoldResult<float>> fit<float>(const std::vector<DatasetSplit>&,
                                                   const TrainConfig&, std::ostream*);
template std::vector<FoldResult<double>> fit<double>(const std::vector<DatasetSplit>&,
                                                     const TrainConfig&, std::ostream*);

}  // namespace signrec

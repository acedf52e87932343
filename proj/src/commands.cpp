#include "signrec/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "signrec/dataset_io.hpp"
#include "signrec/eval.hpp"
#include "signrec/model.hpp"
#include "signrec/propagation.hpp"
#include "signrec/recommend.hpp"
#include "signrec/trainer.hpp"

namespace signrec {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "signrec-0.1.0";

struct FoldArtifact {
  int fold = 0;
  std::string checkpoint;  // relative to the run directory
  std::string log;
  int best_epoch = -1;
  double best_recall = 0.0;
};

struct RunManifest {
  std::string version;
  std::string dataset_dir;
  std::string dataset_checksum;
  std::uint64_t seed = 0;
  int num_folds = 0;
  std::string config_text;
  std::vector<FoldArtifact> folds;
};

void save_manifest(const std::string& run_dir, const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["dataset_dir"] = m.dataset_dir;
  j["dataset_checksum"] = m.dataset_checksum;
  j["seed"] = m.seed;
  j["num_folds"] = m.num_folds;
  j["config"] = m.config_text;
  j["folds"] = json::array();
  for (const auto& f : m.folds) {
    j["folds"].push_back({{"fold", f.fold},
                          {"checkpoint", f.checkpoint},
                          {"log", f.log},
                          {"best_epoch", f.best_epoch},
                          {"best_recall", f.best_recall}});
  }
  const std::string path = run_dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

RunManifest load_manifest(const std::string& run_dir) {
  const std::string path = run_dir + "/manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' (is this a run directory?)");
  RunManifest m;
  try {
    json j;
    in >> j;
    m.version = j.at("version").get<std::string>();
    m.dataset_dir = j.at("dataset_dir").get<std::string>();
    m.dataset_checksum = j.at("dataset_checksum").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.num_folds = j.at("num_folds").get<int>();
    m.config_text = j.at("config").get<std::string>();
    for (const auto& f : j.at("folds")) {
      FoldArtifact a;
      a.fold = f.at("fold").get<int>();
      a.checkpoint = f.at("checkpoint").get<std::string>();
      a.log = f.at("log").get<std::string>();
      a.best_epoch = f.at("best_epoch").get<int>();
      a.best_recall = f.at("best_recall").get<double>();
      m.folds.push_back(a);
    }
  } catch (const json::exception& e) {
    throw ValidationError("manifest in '" + run_dir + "' is malformed: " + e.what());
  }
  return m;
}

template <typename T>
std::vector<FoldArtifact> run_training(const PreparedDataset& prepared,
                                       const std::string& dataset_dir, const AppConfig& cfg,
                                       const std::string& run_dir) {
  std::vector<FoldArtifact> artifacts;
  for (int fold = 0; fold < prepared.stats.num_folds; ++fold) {
    const auto split = load_fold(dataset_dir, prepared, fold);
    FoldArtifact art;
    art.fold = fold;
    art.checkpoint = "fold" + std::to_string(fold) + ".ckpt";
    art.log = "fold" + std::to_string(fold) + ".log";

    const std::string log_path = run_dir + "/" + art.log;
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw IoError("cannot write '" + log_path + "'");

    const auto result = train_fold<T>(split, cfg.train, &log);
    save_checkpoint(run_dir + "/" + art.checkpoint, result.best_params, cfg.train.num_layers);
    art.best_epoch = result.best_epoch;
    art.best_recall = result.best_recall;
    std::printf("fold %d: best epoch %d recall@%d %.6f\n", fold, result.best_epoch,
                cfg.train.eval_k, result.best_recall);
    artifacts.push_back(art);
  }
  return artifacts;
}

// Best-checkpoint embeddings for one fold, precision taken from the file.
struct FoldEmbeddings {
  Precision precision = Precision::double_prec;
  FinalEmbeddings<float> single;
  FinalEmbeddings<double> dbl;
};

FoldEmbeddings forward_checkpoint(const std::string& ckpt_path, const SignedBipartiteGraph& graph) {
  FoldEmbeddings out;
  const auto info = peek_checkpoint(ckpt_path);
  if (info.num_users != graph.num_users() || info.num_items != graph.num_items()) {
    throw ValidationError("checkpoint '" + ckpt_path + "' does not match the dataset shape");
  }
  out.precision = info.precision;
  if (info.precision == Precision::single_prec) {
    const auto ckpt = load_checkpoint<float>(ckpt_path);
    out.single = full_forward(graph, ckpt.params.e0_user.value, ckpt.params.e0_item.value,
                              ckpt.num_layers)
                     .finals;
  } else {
    const auto ckpt = load_checkpoint<double>(ckpt_path);
    out.dbl = full_forward(graph, ckpt.params.e0_user.value, ckpt.params.e0_item.value,
                           ckpt.num_layers)
                  .finals;
  }
  return out;
}

}  // namespace

AppConfig resolve_config(const GlobalOptions& opts) {
  AppConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
  if (opts.seed_set) cfg.train.seed = opts.seed;
  if (opts.threads_set) cfg.train.threads = opts.threads;
  if (opts.deterministic) cfg.train.threads = 1;
  cfg.validate();
  return cfg;
}

int cmd_prepare(const AppConfig& cfg, const std::string& input_path, const std::string& out_dir) {
  const auto stats = prepare_dataset(input_path, out_dir, cfg);
  std::printf("prepared %s\n", out_dir.c_str());
  std::printf("  users %lld  items %lld  interactions %lld\n",
              static_cast<long long>(stats.users), static_cast<long long>(stats.items),
              static_cast<long long>(stats.interactions));
  std::printf("  positives %lld  negatives %lld  ratio 1:%.2f  density %.6f\n",
              static_cast<long long>(stats.positives), static_cast<long long>(stats.negatives),
              stats.neg_per_pos, stats.density);
  std::printf("  skipped: malformed %lld, duplicates %lld, below k-core %lld\n",
              static_cast<long long>(stats.malformed), static_cast<long long>(stats.duplicates),
              static_cast<long long>(stats.kcore_removed));
  std::printf("  folds %d  checksum %s\n", stats.num_folds, stats.checksum.c_str());
  return exit_ok;
}

int cmd_train(const AppConfig& cfg, const std::string& dataset_dir, const std::string& run_dir) {
  const auto prepared = load_prepared(dataset_dir);

  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) throw IoError("cannot create run directory '" + run_dir + "': " + ec.message());

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.dataset_dir = fs::absolute(dataset_dir).lexically_normal().string();
  manifest.dataset_checksum = prepared.stats.checksum;
  manifest.seed = cfg.train.seed;
  manifest.num_folds = prepared.stats.num_folds;
  {
    std::ostringstream snapshot;
    write_config(snapshot, cfg);
    manifest.config_text = snapshot.str();
  }

  manifest.folds = cfg.train.precision == Precision::single_prec
                       ? run_training<float>(prepared, dataset_dir, cfg, run_dir)
                       : run_training<double>(prepared, dataset_dir, cfg, run_dir);
  save_manifest(run_dir, manifest);
  std::printf("run written to %s\n", run_dir.c_str());
  return exit_ok;
}

int cmd_evaluate(const AppConfig& cfg, const std::string& run_dir, bool no_filter,
                 const std::string& out_csv) {
  const auto manifest = load_manifest(run_dir);
  const auto prepared = load_prepared(manifest.dataset_dir);
  const AppConfig run_cfg = [&] {
    std::istringstream in(manifest.config_text);
    return parse_config(in);
  }();
  const bool filter_enabled = run_cfg.train.enable_filter && !no_filter;

  std::vector<EvalReport> reports;
  for (const auto& art : manifest.folds) {
    const auto split = load_fold(manifest.dataset_dir, prepared, art.fold);
    const auto emb = forward_checkpoint(run_dir + "/" + art.checkpoint, split.train);
    auto report = emb.precision == Precision::single_prec
                      ? evaluate(split.train, emb.single, split.test_positive, cfg.eval_ks,
                                 filter_enabled, cfg.filter_k, cfg.train.threads)
                      : evaluate(split.train, emb.dbl, split.test_positive, cfg.eval_ks,
                                 filter_enabled, cfg.filter_k, cfg.train.threads);
    report.fold = art.fold;
    reports.push_back(std::move(report));
  }
  if (reports.empty()) throw ValidationError("run '" + run_dir + "' holds no folds to evaluate");

  const auto agg = aggregate_folds(reports);
  const std::string csv_path =
      !out_csv.empty() ? out_csv
                       : run_dir + (no_filter ? "/report_nofilter.csv" : "/report.csv");
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot write '" + csv_path + "'");
  write_report_csv(csv, agg);

  std::printf("%s over %zu folds (filter %s)\n", manifest.version.c_str(), reports.size(),
              filter_enabled ? "on" : "off");
  write_report_table(std::cout, agg);
  std::printf("report written to %s\n", csv_path.c_str());
  return exit_ok;
}

int cmd_recommend(const AppConfig& cfg, const std::string& run_dir,
                  const std::vector<std::string>& user_tokens, int k, int fold, bool no_filter,
                  const std::string& out_path) {
  if (k < 1) throw ValidationError("recommendation cutoff must be >= 1");
  const auto manifest = load_manifest(run_dir);
  const auto prepared = load_prepared(manifest.dataset_dir);
  if (fold < 0 || fold >= static_cast<int>(manifest.folds.size())) {
    throw ValidationError("fold " + std::to_string(fold) + " is outside this run");
  }
  const AppConfig run_cfg = [&] {
    std::istringstream in(manifest.config_text);
    return parse_config(in);
  }();
  const bool filter_enabled = run_cfg.train.enable_filter && !no_filter;

  const auto split = load_fold(manifest.dataset_dir, prepared, fold);
  const auto emb = forward_checkpoint(run_dir + "/" + manifest.folds[fold].checkpoint, split.train);

  // Map the requested tokens; unknown ones go to a rejects file.
  std::vector<Index> users;
  std::vector<std::string> rejects;
  if (user_tokens.empty()) {
    users.resize(static_cast<std::size_t>(prepared.users.size()));
    for (Index u = 0; u < prepared.users.size(); ++u) users[static_cast<std::size_t>(u)] = u;
  } else {
    for (const auto& token : user_tokens) {
      if (const auto id = prepared.users.find(token)) users.push_back(*id);
      else rejects.push_back(token);
    }
  }

  const std::string path = !out_path.empty() ? out_path : run_dir + "/recommendations.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  char score_buf[48];
  for (const Index u : users) {
    const auto list = emb.precision == Precision::single_prec
                          ? recommend_user(split.train, emb.single, u, k, filter_enabled,
                                           cfg.filter_k)
                          : recommend_user(split.train, emb.dbl, u, k, filter_enabled,
                                           cfg.filter_k);
    out << prepared.users.token(u);
    for (std::size_t r = 0; r < list.items.size(); ++r) {
      std::snprintf(score_buf, sizeof(score_buf), "%.6f", list.scores[r]);
      out << ' ' << prepared.items.token(list.items[r]) << ':' << score_buf;
    }
    out << '\n';
  }

  if (!rejects.empty()) {
    const std::string rejects_path = path + ".rejects";
    std::ofstream rj(rejects_path, std::ios::binary);
    if (!rj) throw IoError("cannot write '" + rejects_path + "'");
    for (const auto& token : rejects) rj << token << '\n';
    std::printf("%zu unknown users listed in %s\n", rejects.size(), rejects_path.c_str());
  }
  std::printf("wrote top-%d lists for %zu users to %s (filter %s)\n", k, users.size(),
              path.c_str(), filter_enabled ? "on" : "off");
  return exit_ok;
}

}  // namespace signrec

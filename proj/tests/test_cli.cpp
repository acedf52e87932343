#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

// Process-level checks: every case below launches the installed binary
// the way a user would and inspects exit codes and artifacts.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "signrec/dataset_io.hpp"
#include "signrec/model.hpp"
#include "signrec/propagation.hpp"
#include "signrec/recommend.hpp"
#include "signrec/rng.hpp"

using namespace signrec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() / (std::string("signrec_cli_") + tag + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

int run_cli(const std::string& args, const std::string& capture_dir) {
  const std::string cmd = std::string(SIGNREC_CLI_PATH) + " " + args + " > " + capture_dir +
                          "/stdout.txt 2> " + capture_dir + "/stderr.txt";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  return WEXITSTATUS(raw);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (const char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

void write_toy_corpus(const std::string& path) {
  Rng rng(20109);
  std::ofstream out(path, std::ios::binary);
  for (int u = 0; u < 30; ++u) {
    std::vector<int> items(50);
    for (int i = 0; i < 50; ++i) items[static_cast<std::size_t>(i)] = i;
    for (int i = 49; i > 0; --i) {
      std::swap(items[static_cast<std::size_t>(i)],
                items[static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1))]);
    }
    for (int n = 0; n < 12; ++n) {
      const double rating = rng.uniform() < 0.6 ? 4.0 + rng.uniform() : 1.0 + rng.uniform();
      char line[64];
      std::snprintf(line, sizeof(line), "u%d\ti%d\t%.1f\n", u, items[static_cast<std::size_t>(n)],
                    rating);
      out << line;
    }
  }
}

void write_toy_config(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << "dim = 8\n"
      << "epochs = 2\n"
      << "eval_every = 1\n"
      << "batch_size = 128\n"
      << "num_folds = 2\n"
      << "min_user_interactions = 3\n"
      << "min_item_interactions = 1\n"
      << "lr_milestones =\n"
      << "eval_ks = 5,10\n";
}

}  // namespace

TEST_CASE("usage problems exit with the usage code") {
  TempDir dir("usage");
  CHECK(run_cli("", dir.str()) == 1);
  CHECK(run_cli("frobnicate", dir.str()) == 1);
  CHECK(run_cli("prepare onlyone", dir.str()) == 1);
  CHECK(run_cli("--help", dir.str()) == 0);
}

TEST_CASE("missing files exit with the io code and bad configs with validation") {
  TempDir dir("errors");
  CHECK(run_cli("prepare " + dir.str() + "/nope.tsv " + dir.str() + "/ds", dir.str()) == 2);
  CHECK(run_cli("evaluate " + dir.str() + "/no_run", dir.str()) == 2);

  const auto bad_cfg = dir.str() + "/bad.cfg";
  std::ofstream(bad_cfg) << "volume = 11\n";
  CHECK(run_cli("--config " + bad_cfg + " prepare x y", dir.str()) == 3);

  const auto invalid_cfg = dir.str() + "/invalid.cfg";
  std::ofstream(invalid_cfg) << "num_folds = 0\n";
  CHECK(run_cli("--config " + invalid_cfg + " prepare x y", dir.str()) == 3);
}

TEST_CASE("the four commands compose into a reproducible experiment") {
  TempDir dir("pipeline");
  const auto corpus = dir.str() + "/corpus.tsv";
  const auto cfg_path = dir.str() + "/toy.cfg";
  write_toy_corpus(corpus);
  write_toy_config(cfg_path);
  const std::string base = "--config " + cfg_path + " ";

  // prepare twice: identical artifacts
  const auto ds = dir.str() + "/ds";
  REQUIRE(run_cli(base + "prepare " + corpus + " " + ds, dir.str()) == 0);
  REQUIRE(run_cli(base + "prepare " + corpus + " " + ds + "_again", dir.str()) == 0);
  for (const char* name :
       {"users.vocab", "items.vocab", "stats.json", "fold0.train.tsv", "fold1.test.tsv"}) {
    CHECK(slurp(ds + "/" + name) == slurp(ds + "_again/" + name));
  }

  // train twice: identical checkpoints under the same seed
  const auto run = dir.str() + "/run";
  REQUIRE(run_cli(base + "train " + ds + " " + run, dir.str()) == 0);
  REQUIRE(run_cli(base + "train " + ds + " " + run + "_again", dir.str()) == 0);
  CHECK(slurp(run + "/fold0.ckpt") == slurp(run + "_again/fold0.ckpt"));
  CHECK(slurp(run + "/fold1.ckpt") == slurp(run + "_again/fold1.ckpt"));
  CHECK(fs::exists(run + "/manifest.json"));

  // two epochs per fold: header line plus one line per epoch
  const auto log = slurp(run + "/fold0.log");
  CHECK(count_lines(log) == 3);
  CHECK(log.rfind("epoch lr ", 0) == 0);

  // a different seed changes the checkpoints
  REQUIRE(run_cli(base + "--seed 77 train " + ds + " " + run + "_other", dir.str()) == 0);
  CHECK(slurp(run + "/fold0.ckpt") != slurp(run + "_other/fold0.ckpt"));

  // evaluate: csv with both cutoffs, no-filter variant beside it
  REQUIRE(run_cli(base + "evaluate " + run, dir.str()) == 0);
  const auto csv = slurp(run + "/report.csv");
  CHECK(csv.rfind("metric,K,fold,value\n", 0) == 0);
  CHECK(csv.find("recall,5,mean,") != std::string::npos);
  CHECK(csv.find("ndcg,10,stderr,") != std::string::npos);
  REQUIRE(run_cli(base + "evaluate --no-filter " + run, dir.str()) == 0);
  CHECK(fs::exists(run + "/report_nofilter.csv"));

  // recommend for two real users and one stranger
  REQUIRE(run_cli(base + "recommend " + run + " --users u3 u7 nobody -k 5", dir.str()) == 0);
  const auto recs = slurp(run + "/recommendations.txt");
  CHECK(count_lines(recs) == 2);
  CHECK(recs.rfind("u3 ", 0) == 0);
  CHECK(slurp(run + "/recommendations.txt.rejects") == "nobody\n");

  // the dump for everyone matches the library's answer byte for byte
  REQUIRE(run_cli(base + "recommend " + run + " -k 5 --out " + dir.str() + "/all.txt",
                  dir.str()) == 0);
  const auto prepared = load_prepared(ds);
  const auto split = load_fold(ds, prepared, 0);
  const auto ckpt = load_checkpoint<double>(run + "/fold0.ckpt");
  const auto finals =
      full_forward(split.train, ckpt.params.e0_user.value, ckpt.params.e0_item.value,
                   ckpt.num_layers)
          .finals;
  std::ostringstream expected;
  char score_buf[48];
  for (Index u = 0; u < prepared.users.size(); ++u) {
    const auto list = recommend_user(split.train, finals, u, 5, true, 0);
    expected << prepared.users.token(u);
    for (std::size_t r = 0; r < list.items.size(); ++r) {
      std::snprintf(score_buf, sizeof(score_buf), "%.6f", list.scores[r]);
      expected << ' ' << prepared.items.token(list.items[r]) << ':' << score_buf;
    }
    expected << '\n';
  }
  CHECK(slurp(dir.str() + "/all.txt") == expected.str());

  // unknown fold index is a validation failure
  CHECK(run_cli(base + "recommend " + run + " --fold 9", dir.str()) == 3);
}

TEST_CASE("training with lr zero keeps the initial parameters") {
  TempDir dir("lrzero");
  const auto corpus = dir.str() + "/corpus.tsv";
  write_toy_corpus(corpus);
  const auto cfg_path = dir.str() + "/cfg";
  {
    std::ofstream out(cfg_path);
    out << "dim = 4\nepochs = 2\neval_every = 1\nnum_folds = 1\nlr = 0\n"
        << "lr_milestones =\nmin_user_interactions = 0\nmin_item_interactions = 0\n";
  }
  const std::string base = "--config " + cfg_path + " ";
  REQUIRE(run_cli(base + "prepare " + corpus + " " + dir.str() + "/ds", dir.str()) == 0);
  REQUIRE(run_cli(base + "train " + dir.str() + "/ds " + dir.str() + "/run", dir.str()) == 0);

  // Replay the fold's initializer stream; a zero learning rate must
  // leave those values untouched all the way into the checkpoint.
  const auto prepared = load_prepared(dir.str() + "/ds");
  Rng init_rng = Rng::derive(42, 100);
  const auto fresh = init_params<double>(prepared.users.size(), prepared.items.size(), 4, init_rng);
  const auto ckpt = load_checkpoint<double>(dir.str() + "/run/fold0.ckpt");
  REQUIRE(ckpt.params.e0_user.value.size() == fresh.e0_user.value.size());
  for (std::size_t k = 0; k < ckpt.params.e0_user.value.size(); ++k) {
    CHECK(ckpt.params.e0_user.value.data()[k] == fresh.e0_user.value.data()[k]);
  }
  CHECK(ckpt.params.adam_steps > 0);
}

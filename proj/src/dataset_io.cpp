#include "signrec/dataset_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace signrec {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fold_path(const std::string& dir, int fold, const char* side) {
  return dir + "/fold" + std::to_string(fold) + "." + side + ".tsv";
}

void save_records(const std::string& path, const std::vector<IndexedRating>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  char line[96];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line), "%d\t%d\t%.17g\n", r.user, r.item, r.rating);
    out << line;
  }
}

std::vector<IndexedRating> load_records(const std::string& path, Index num_users,
                                        Index num_items) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<IndexedRating> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    IndexedRating r;
    char* cursor = nullptr;
    errno = 0;
    const long user = std::strtol(line.c_str(), &cursor, 10);
    if (cursor == line.c_str() || *cursor != '\t') {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed fold row");
    }
    const char* item_start = cursor + 1;
    const long item = std::strtol(item_start, &cursor, 10);
    if (cursor == item_start || *cursor != '\t') {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed fold row");
    }
    const char* rating_start = cursor + 1;
    r.rating = std::strtod(rating_start, &cursor);
    if (cursor == rating_start || *cursor != '\0' || errno == ERANGE) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed fold row");
    }
    if (user < 0 || user >= num_users || item < 0 || item >= num_items) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": id out of range");
    }
    r.user = static_cast<Index>(user);
    r.item = static_cast<Index>(item);
    records.push_back(r);
  }
  return records;
}

json stats_to_json(const DatasetStats& s) {
  json j;
  j["users"] = s.users;
  j["items"] = s.items;
  j["interactions"] = s.interactions;
  j["positives"] = s.positives;
  j["negatives"] = s.negatives;
  j["malformed"] = s.malformed;
  j["duplicates"] = s.duplicates;
  j["kcore_removed"] = s.kcore_removed;
  j["density"] = s.density;
  j["neg_per_pos"] = s.neg_per_pos;
  j["split_ratio"] = s.split_ratio;
  j["delta"] = s.delta;
  j["num_folds"] = s.num_folds;
  j["seed"] = s.seed;
  j["checksum"] = s.checksum;
  return j;
}

DatasetStats stats_from_json(const json& j) {
  DatasetStats s;
  s.users = j.at("users").get<std::int64_t>();
  s.items = j.at("items").get<std::int64_t>();
  s.interactions = j.at("interactions").get<std::int64_t>();
  s.positives = j.at("positives").get<std::int64_t>();
  s.negatives = j.at("negatives").get<std::int64_t>();
  s.malformed = j.at("malformed").get<std::int64_t>();
  s.duplicates = j.at("duplicates").get<std::int64_t>();
  s.kcore_removed = j.at("kcore_removed").get<std::int64_t>();
  s.density = j.at("density").get<double>();
  s.neg_per_pos = j.at("neg_per_pos").get<double>();
  s.split_ratio = j.at("split_ratio").get<double>();
  s.delta = j.at("delta").get<double>();
  s.num_folds = j.at("num_folds").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.checksum = j.at("checksum").get<std::string>();
  return s;
}

}  // namespace

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for checksumming");
  std::uint64_t hash = 1469598103934665603ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

DatasetStats prepare_dataset(const std::string& input_path, const std::string& out_dir,
                             const AppConfig& cfg) {
  cfg.validate();
  DatasetStats stats;
  stats.checksum = file_checksum(input_path);
  stats.split_ratio = cfg.split_ratio;
  stats.delta = cfg.train.delta;
  stats.num_folds = cfg.num_folds;
  stats.seed = cfg.train.seed;

  auto log = load_ratings(input_path, cfg.delimiter);
  stats.malformed = static_cast<std::int64_t>(log.malformed);
  stats.duplicates = static_cast<std::int64_t>(deduplicate(log.records));
  stats.kcore_removed = static_cast<std::int64_t>(
      kcore_filter(log.records, cfg.min_user_interactions, cfg.min_item_interactions));
  if (log.records.empty()) {
    throw ValidationError("no interactions survive filtering; nothing to prepare");
  }

  const Dataset ds = index_ratings(log.records);
  stats.users = ds.users.size();
  stats.items = ds.items.size();
  stats.interactions = static_cast<std::int64_t>(ds.ratings.size());
  for (const auto& r : ds.ratings) {
    if (r.rating > cfg.train.delta) ++stats.positives;
    else if (r.rating < cfg.train.delta) ++stats.negatives;
  }
  stats.density = static_cast<double>(stats.interactions) /
                  (static_cast<double>(stats.users) * static_cast<double>(stats.items));
  stats.neg_per_pos = stats.positives > 0
                          ? static_cast<double>(stats.negatives) / static_cast<double>(stats.positives)
                          : 0.0;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create dataset directory '" + out_dir + "': " + ec.message());

  {
    std::ofstream uv(out_dir + "/users.vocab", std::ios::binary);
    std::ofstream iv(out_dir + "/items.vocab", std::ios::binary);
    if (!uv || !iv) throw IoError("cannot write vocabularies under '" + out_dir + "'");
    ds.users.save(uv);
    ds.items.save(iv);
  }

  const auto splits = split_folds(ds.ratings, ds.users.size(), ds.items.size(), cfg.split_ratio,
                                  cfg.train.delta, cfg.num_folds, cfg.train.seed);
  for (const auto& split : splits) {
    save_records(fold_path(out_dir, split.fold, "train"), split.train_records);
    save_records(fold_path(out_dir, split.fold, "test"), split.test_records);
  }

  std::ofstream sj(out_dir + "/stats.json", std::ios::binary);
  if (!sj) throw IoError("cannot write '" + out_dir + "/stats.json'");
  sj << stats_to_json(stats).dump(2) << '\n';
  return stats;
}

PreparedDataset load_prepared(const std::string& dir) {
  PreparedDataset out;
  std::ifstream uv(dir + "/users.vocab", std::ios::binary);
  if (!uv) throw IoError("cannot open '" + dir + "/users.vocab'");
  out.users = Vocabulary::load(uv);
  std::ifstream iv(dir + "/items.vocab", std::ios::binary);
  if (!iv) throw IoError("cannot open '" + dir + "/items.vocab'");
  out.items = Vocabulary::load(iv);

  std::ifstream sj(dir + "/stats.json", std::ios::binary);
  if (!sj) throw IoError("cannot open '" + dir + "/stats.json'");
  json j;
  try {
    sj >> j;
    out.stats = stats_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError("stats.json in '" + dir + "' is malformed: " + e.what());
  }
  if (out.stats.users != out.users.size() || out.stats.items != out.items.size()) {
    throw ValidationError("stats.json disagrees with the vocabularies in '" + dir + "'");
  }
  return out;
}

DatasetSplit load_fold(const std::string& dir, const PreparedDataset& prepared, int fold) {
  if (fold < 0 || fold >= prepared.stats.num_folds) {
    throw ValidationError("fold " + std::to_string(fold) + " is outside this dataset");
  }
  const Index num_users = prepared.users.size();
  const Index num_items = prepared.items.size();
  auto train = load_records(fold_path(dir, fold, "train"), num_users, num_items);
  auto test = load_records(fold_path(dir, fold, "test"), num_users, num_items);
  return assemble_split(std::move(train), std::move(test), num_users, num_items,
                        prepared.stats.delta, fold);
}

}  // namespace signrec

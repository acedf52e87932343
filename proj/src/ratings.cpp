#include "signrec/ratings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace signrec {

namespace {

bool parse_line(std::string_view line, char delimiter, RatingRecord& out) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.empty()) return false;

  const std::size_t d1 = line.find(delimiter);
  if (d1 == std::string_view::npos || d1 == 0) return false;
  const std::size_t d2 = line.find(delimiter, d1 + 1);
  if (d2 == std::string_view::npos || d2 == d1 + 1) return false;

  const std::string_view user = line.substr(0, d1);
  const std::string_view item = line.substr(d1 + 1, d2 - d1 - 1);
  std::string_view rest = line.substr(d2 + 1);
  // Tolerate trailing fields (e.g. timestamps) after the rating.
  const std::size_t d3 = rest.find(delimiter);
  if (d3 != std::string_view::npos) rest = rest.substr(0, d3);
  if (rest.empty()) return false;

  double rating = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), rating);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || !std::isfinite(rating)) {
    return false;
  }

  out.user.assign(user);
  out.item.assign(item);
  out.rating = rating;
  return true;
}

}  // namespace

RatingLog parse_ratings(std::istream& in, char delimiter) {
  RatingLog log;
  std::string line;
  RatingRecord rec;
  while (std::getline(in, line)) {
    if (parse_line(line, delimiter, rec)) {
      log.records.push_back(rec);
    } else {
      ++log.malformed;
    }
  }
  if (log.records.empty()) {
    throw ValidationError("no parseable rating lines in input");
  }
  return log;
}

RatingLog load_ratings(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file: " + path);
  return parse_ratings(in, delimiter);
}

std::size_t deduplicate(std::vector<RatingRecord>& records) {
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(records.size());
  std::vector<RatingRecord> kept;
  kept.reserve(records.size());
  for (auto& rec : records) {
    std::string key = rec.user + '\x1f' + rec.item;
    auto [it, inserted] = seen.emplace(std::move(key), kept.size());
    if (inserted) {
      kept.push_back(std::move(rec));
    } else {
      kept[it->second].rating = rec.rating;
    }
  }
  const std::size_t removed = records.size() - kept.size();
  records = std::move(kept);
  return removed;
}

std::size_t kcore_filter(std::vector<RatingRecord>& records, int min_user, int min_item) {
  if (min_user <= 0 && min_item <= 0) return 0;
  const std::size_t before = records.size();
  bool changed = true;
  while (changed && !records.empty()) {
    changed = false;
    std::unordered_map<std::string, int> user_deg;
    std::unordered_map<std::string, int> item_deg;
    for (const auto& r : records) {
      ++user_deg[r.user];
      ++item_deg[r.item];
    }
    std::vector<RatingRecord> kept;
    kept.reserve(records.size());
    for (auto& r : records) {
      if (user_deg[r.user] >= min_user && item_deg[r.item] >= min_item) {
        kept.push_back(std::move(r));
      } else {
        changed = true;
      }
    }
    records = std::move(kept);
  }
  return before - records.size();
}

Index Vocabulary::add(const std::string& token) {
  auto [it, inserted] = ids_.emplace(token, static_cast<Index>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<Index> Vocabulary::find(const std::string& token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::save(std::ostream& out) const {
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
  Vocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ValidationError("empty token in vocabulary file");
    if (vocab.add(line) != vocab.size() - 1) {
      throw ValidationError("duplicate token in vocabulary file: " + line);
    }
  }
  return vocab;
}

Dataset index_ratings(const std::vector<RatingRecord>& records) {
  Dataset ds;
  ds.ratings.reserve(records.size());
  for (const auto& r : records) {
    ds.ratings.push_back({ds.users.add(r.user), ds.items.add(r.item), r.rating});
  }
  return ds;
}

}  // namespace signrec

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "signrec/types.hpp"

namespace signrec {

// One line of the raw interaction log, before any vocabulary mapping.
struct RatingRecord {
  std::string user;
  std::string item;
  double rating = 0;
};

struct RatingLog {
  std::vector<RatingRecord> records;
  std::size_t malformed = 0;  // skipped input lines
};

// Parses "user<delim>item<delim>rating" lines. Blank lines and lines that
// do not yield three fields with a finite rating are counted as malformed
// and skipped. Throws ValidationError if no line parses at all.
RatingLog parse_ratings(std::istream& in, char delimiter);
RatingLog load_ratings(const std::string& path, char delimiter);

// Collapses repeated (user, item) pairs: the rating from the last
// occurrence wins, the position of the first occurrence is kept. Returns
// the number of collapsed records.
std::size_t deduplicate(std::vector<RatingRecord>& records);

// Iteratively removes users with fewer than min_user interactions and
// items with fewer than min_item, until both constraints hold at once.
// Returns the number of removed records.
std::size_t kcore_filter(std::vector<RatingRecord>& records, int min_user, int min_item);

// Token <-> dense id mapping, ids assigned in first-appearance order.
class Vocabulary {
 public:
  Index add(const std::string& token);
  std::optional<Index> find(const std::string& token) const;
  Index size() const { return static_cast<Index>(tokens_.size()); }
  const std::string& token(Index id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // One token per line; the line number is the id.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Index> ids_;
};

struct IndexedRating {
  Index user = 0;
  Index item = 0;
  double rating = 0;
};

// Records mapped through freshly built vocabularies.
struct Dataset {
  Vocabulary users;
  Vocabulary items;
  std::vector<IndexedRating> ratings;
};

Dataset index_ratings(const std::vector<RatingRecord>& records);

}  // namespace signrec

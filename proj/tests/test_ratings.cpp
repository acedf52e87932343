#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "signrec/ratings.hpp"

using namespace signrec;

TEST_CASE("parser accepts clean lines and counts malformed ones") {
  std::istringstream in(
      "alice\tA1\t5\n"
      "bob\tB2\t1.5\n"
      "\n"
      "truncated line\n"
      "carol\tC3\tnotanumber\n"
      "dave\tD4\t3\textra_timestamp\n"
      "\teve\t2\n"
      "frank\tF5\t4\r\n");
  const auto log = parse_ratings(in, '\t');
  REQUIRE(log.records.size() == 4);
  CHECK(log.malformed == 4);
  CHECK(log.records[0].user == "alice");
  CHECK(log.records[0].item == "A1");
  CHECK(log.records[0].rating == 5.0);
  CHECK(log.records[1].rating == 1.5);
  CHECK(log.records[2].user == "dave");  // trailing field tolerated
  CHECK(log.records[3].user == "frank");  // CR stripped
}

TEST_CASE("parser handles comma delimiter and rejects fully bad input") {
  std::istringstream in("u1,i1,4\nu2,i2,2\n");
  const auto log = parse_ratings(in, ',');
  CHECK(log.records.size() == 2);

  std::istringstream bad("garbage\nmore garbage\n");
  CHECK_THROWS_AS(parse_ratings(bad, '\t'), ValidationError);
}

TEST_CASE("deduplicate keeps last rating at first position") {
  std::vector<RatingRecord> recs = {
      {"u1", "i1", 5}, {"u2", "i1", 3}, {"u1", "i1", 1}, {"u1", "i2", 4}, {"u1", "i1", 2},
  };
  const std::size_t removed = deduplicate(recs);
  CHECK(removed == 2);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].user == "u1");
  CHECK(recs[0].item == "i1");
  CHECK(recs[0].rating == 2.0);  // last occurrence wins
  CHECK(recs[1].user == "u2");
  CHECK(recs[2].item == "i2");

  // Second pass is a no-op.
  auto again = recs;
  CHECK(deduplicate(again) == 0);
  CHECK(again.size() == recs.size());
}

namespace {

// Brute-force check: recompute final degrees from scratch.
void check_core_property(const std::vector<RatingRecord>& recs, int min_user, int min_item) {
  std::map<std::string, int> ud, id;
  for (const auto& r : recs) {
    ++ud[r.user];
    ++id[r.item];
  }
  for (const auto& [u, d] : ud) CHECK(d >= min_user);
  for (const auto& [i, d] : id) CHECK(d >= min_item);
}

}  // namespace

TEST_CASE("kcore removes cascading low-degree nodes") {
  // item chain: removing user "weak" drops item "x" below threshold,
  // which in turn drops user "mid".
  std::vector<RatingRecord> recs = {
      {"weak", "x", 5},
      {"mid", "x", 4},  {"mid", "a", 3},
      {"s1", "a", 5},   {"s1", "b", 5}, {"s2", "a", 4}, {"s2", "b", 2},
  };
  const std::size_t removed = kcore_filter(recs, 2, 2);
  CHECK(removed == 3);
  check_core_property(recs, 2, 2);
  std::set<std::string> users, items;
  for (const auto& r : recs) {
    users.insert(r.user);
    items.insert(r.item);
  }
  CHECK(users == std::set<std::string>{"s1", "s2"});
  CHECK(items == std::set<std::string>{"a", "b"});
}

TEST_CASE("kcore can empty the log and is idempotent on survivors") {
  std::vector<RatingRecord> recs = {{"u1", "i1", 5}, {"u2", "i2", 3}};
  kcore_filter(recs, 3, 3);
  CHECK(recs.empty());

  std::vector<RatingRecord> dense;
  for (int u = 0; u < 4; ++u) {
    for (int i = 0; i < 4; ++i) {
      dense.push_back({"u" + std::to_string(u), "i" + std::to_string(i), 4.0});
    }
  }
  auto copy = dense;
  CHECK(kcore_filter(copy, 4, 4) == 0);
  check_core_property(copy, 4, 4);
}

TEST_CASE("vocabulary assigns first-appearance ids and round-trips") {
  Vocabulary v;
  CHECK(v.add("beta") == 0);
  CHECK(v.add("alpha") == 1);
  CHECK(v.add("beta") == 0);
  CHECK(v.add("gamma") == 2);
  CHECK(v.size() == 3);
  CHECK(v.find("alpha").value() == 1);
  CHECK_FALSE(v.find("delta").has_value());

  std::ostringstream out;
  v.save(out);
  CHECK(out.str() == "beta\nalpha\ngamma\n");

  std::istringstream in(out.str());
  const auto loaded = Vocabulary::load(in);
  REQUIRE(loaded.size() == 3);
  for (Index id = 0; id < 3; ++id) CHECK(loaded.token(id) == v.token(id));

  std::istringstream dup("a\nb\na\n");
  CHECK_THROWS_AS(Vocabulary::load(dup), ValidationError);
}

TEST_CASE("index_ratings produces a dense bijective mapping") {
  std::vector<RatingRecord> recs = {
      {"carol", "x9", 5}, {"alice", "x9", 3}, {"carol", "y2", 1}, {"bob", "z1", 4},
  };
  const auto ds = index_ratings(recs);
  CHECK(ds.users.size() == 3);
  CHECK(ds.items.size() == 3);
  REQUIRE(ds.ratings.size() == recs.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = ds.ratings[k];
    CHECK(ds.users.token(r.user) == recs[k].user);
    CHECK(ds.items.token(r.item) == recs[k].item);
    CHECK(r.rating == recs[k].rating);
  }
  // Dense: every id below size() appears.
  CHECK(ds.users.token(0) == "carol");
  CHECK(ds.items.token(0) == "x9");
}

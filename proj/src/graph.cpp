#include "signrec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace signrec {

EdgePartition sign_edges(std::span<const IndexedRating> ratings, double delta) {
  EdgePartition part;
  for (const auto& r : ratings) {
    if (r.rating > delta) {
      part.positive.push_back(r);
    } else if (r.rating < delta) {
      part.negative.push_back(r);
    } else {
      ++part.dropped;
    }
  }
  return part;
}

namespace {

struct Triplet {
  Index row;
  Index col;
  double weight;
};

CsrAdjacency build_csr(Index rows, std::vector<Triplet> triplets) {
  CsrAdjacency csr;
  csr.offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) ++csr.offsets[static_cast<std::size_t>(t.row) + 1];
  std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());

  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  csr.neighbors.reserve(triplets.size());
  csr.weights.reserve(triplets.size());
  for (const auto& t : triplets) {
    csr.neighbors.push_back(t.col);
    csr.weights.push_back(t.weight);
  }
  return csr;
}

void check_range(const std::vector<IndexedRating>& edges, Index num_users, Index num_items,
                 const char* label) {
  for (const auto& e : edges) {
    if (e.user < 0 || e.user >= num_users || e.item < 0 || e.item >= num_items) {
      throw ValidationError(std::string(label) + " edge index out of range");
    }
  }
}

}  // namespace

SignedBipartiteGraph SignedBipartiteGraph::build(Index num_users, Index num_items,
                                                 const std::vector<IndexedRating>& positive,
                                                 const std::vector<IndexedRating>& negative) {
  if (num_users <= 0 || num_items <= 0) {
    throw ValidationError("graph requires at least one user and one item");
  }
  check_range(positive, num_users, num_items, "positive");
  check_range(negative, num_users, num_items, "negative");

  SignedBipartiteGraph g;
  g.num_users_ = num_users;
  g.num_items_ = num_items;
  g.pos_deg_user_.assign(num_users, 0);
  g.neg_deg_user_.assign(num_users, 0);
  g.pos_deg_item_.assign(num_items, 0);
  g.neg_deg_item_.assign(num_items, 0);

  for (const auto& e : positive) {
    ++g.pos_deg_user_[e.user];
    ++g.pos_deg_item_[e.item];
  }
  for (const auto& e : negative) {
    ++g.neg_deg_user_[e.user];
    ++g.neg_deg_item_[e.item];
  }

  const auto norm = [](Index du, Index di) {
    return 1.0 / std::sqrt(static_cast<double>(du) * static_cast<double>(di));
  };

  std::vector<Triplet> u2i, i2u;
  u2i.reserve(positive.size());
  i2u.reserve(positive.size());
  for (const auto& e : positive) {
    const double w = norm(g.pos_deg_user_[e.user], g.pos_deg_item_[e.item]);
    u2i.push_back({e.user, e.item, w});
    i2u.push_back({e.item, e.user, w});
  }
  g.pos_u2i_ = build_csr(num_users, std::move(u2i));
  g.pos_i2u_ = build_csr(num_items, std::move(i2u));

  u2i.clear();
  i2u.clear();
  u2i.reserve(negative.size());
  i2u.reserve(negative.size());
  for (const auto& e : negative) {
    const double w = norm(g.neg_deg_user_[e.user], g.neg_deg_item_[e.item]);
    u2i.push_back({e.user, e.item, w});
    i2u.push_back({e.item, e.user, w});
  }
  g.neg_u2i_ = build_csr(num_users, std::move(u2i));
  g.neg_i2u_ = build_csr(num_items, std::move(i2u));

  g.edges_.reserve(positive.size() + negative.size());
  for (const auto& e : positive) g.edges_.push_back({e.user, e.item, e.rating, +1});
  for (const auto& e : negative) g.edges_.push_back({e.user, e.item, e.rating, -1});
  const auto by_user_item = [](const SignedEdge& a, const SignedEdge& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  };
  std::sort(g.edges_.begin(), g.edges_.begin() + static_cast<std::ptrdiff_t>(positive.size()),
            by_user_item);
  std::sort(g.edges_.begin() + static_cast<std::ptrdiff_t>(positive.size()), g.edges_.end(),
            by_user_item);
  g.num_pos_edges_ = static_cast<std::int64_t>(positive.size());

  std::vector<Triplet> all;
  all.reserve(g.edges_.size());
  for (const auto& e : g.edges_) all.push_back({e.user, e.item, 0.0});
  g.interacted_ = build_csr(num_users, std::move(all));
  for (Index u = 0; u < num_users; ++u) {
    const auto row = g.interacted_.row(u);
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k] == row[k - 1]) {
        throw ValidationError("duplicate (user, item) pair across signed edge sets");
      }
    }
  }
  return g;
}

bool SignedBipartiteGraph::interacted(Index user, Index item) const {
  const auto row = interacted_.row(user);
  return std::binary_search(row.begin(), row.end(), item);
}

}  // namespace signrec

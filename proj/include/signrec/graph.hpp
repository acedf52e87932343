#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "signrec/ratings.hpp"
#include "signrec/types.hpp"

namespace signrec {

// Outcome of thresholding ratings at delta: above goes to the positive
// edge set, below to the negative one, exact ties carry no preference
// signal and are dropped.
struct EdgePartition {
  std::vector<IndexedRating> positive;
  std::vector<IndexedRating> negative;
  std::size_t dropped = 0;
};

EdgePartition sign_edges(std::span<const IndexedRating> ratings, double delta);

struct SignedEdge {
  Index user = 0;
  Index item = 0;
  double rating = 0;
  std::int8_t sign = 0;  // +1 or -1
};

// Compressed sparse rows over one side of the bipartite graph. Neighbor
// lists are sorted by index; weights carry the symmetric normalization
// 1/sqrt(deg(u) * deg(i)) computed from same-sign degrees.
struct CsrAdjacency {
  std::vector<std::int64_t> offsets;  // size rows + 1
  std::vector<Index> neighbors;
  std::vector<double> weights;

  Index rows() const { return static_cast<Index>(offsets.empty() ? 0 : offsets.size() - 1); }
  std::span<const Index> row(Index r) const {
    return {neighbors.data() + offsets[r], static_cast<std::size_t>(offsets[r + 1] - offsets[r])};
  }
  std::span<const double> row_weights(Index r) const {
    return {weights.data() + offsets[r], static_cast<std::size_t>(offsets[r + 1] - offsets[r])};
  }
};

// Training graph: both signed edge sets in both directions, plus the
// union adjacency used for candidate exclusion and negative sampling.
class SignedBipartiteGraph {
 public:
  static SignedBipartiteGraph build(Index num_users, Index num_items,
                                    const std::vector<IndexedRating>& positive,
                                    const std::vector<IndexedRating>& negative);

  Index num_users() const { return num_users_; }
  Index num_items() const { return num_items_; }

  const CsrAdjacency& pos_user_to_item() const { return pos_u2i_; }
  const CsrAdjacency& pos_item_to_user() const { return pos_i2u_; }
  const CsrAdjacency& neg_user_to_item() const { return neg_u2i_; }
  const CsrAdjacency& neg_item_to_user() const { return neg_i2u_; }

  const std::vector<Index>& pos_degree_user() const { return pos_deg_user_; }
  const std::vector<Index>& pos_degree_item() const { return pos_deg_item_; }
  const std::vector<Index>& neg_degree_user() const { return neg_deg_user_; }
  const std::vector<Index>& neg_degree_item() const { return neg_deg_item_; }

  // All training edges, positives first, each block sorted by (user, item).
  const std::vector<SignedEdge>& edges() const { return edges_; }
  std::int64_t num_pos_edges() const { return num_pos_edges_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }

  // Items the user interacted with under either sign, sorted.
  std::span<const Index> items_of(Index user) const { return interacted_.row(user); }
  bool interacted(Index user, Index item) const;

 private:
  Index num_users_ = 0;
  Index num_items_ = 0;
  CsrAdjacency pos_u2i_, pos_i2u_, neg_u2i_, neg_i2u_;
  CsrAdjacency interacted_;  // union, no weights
  std::vector<Index> pos_deg_user_, pos_deg_item_, neg_deg_user_, neg_deg_item_;
  std::vector<SignedEdge> edges_;
  std::int64_t num_pos_edges_ = 0;
};

}  // namespace signrec

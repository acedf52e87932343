#pragma once

// Independent reference implementations used to cross-check the engine.
// Everything here is written against dense matrices and plain loops, on
// purpose: no code is shared with the library beyond basic types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <vector>

#include "signrec/ratings.hpp"
#include "signrec/types.hpp"

namespace testsup {

using signrec::Index;
using Vec = std::vector<double>;
using Rows = std::vector<Vec>;  // one embedding per node

// Dense signed adjacency with symmetric normalization computed from
// scratch (degree counts of its own).
struct DenseGraph {
  int num_users = 0;
  int num_items = 0;
  std::vector<std::vector<double>> pos;  // [user][item]
  std::vector<std::vector<double>> neg;

  static DenseGraph from_edges(int num_users, int num_items,
                               const std::vector<signrec::IndexedRating>& positive,
                               const std::vector<signrec::IndexedRating>& negative) {
    DenseGraph g;
    g.num_users = num_users;
    g.num_items = num_items;
    g.pos.assign(num_users, std::vector<double>(num_items, 0.0));
    g.neg.assign(num_users, std::vector<double>(num_items, 0.0));
    std::vector<int> pdu(num_users, 0), pdi(num_items, 0), ndu(num_users, 0), ndi(num_items, 0);
    for (const auto& e : positive) {
      ++pdu[e.user];
      ++pdi[e.item];
    }
    for (const auto& e : negative) {
      ++ndu[e.user];
      ++ndi[e.item];
    }
    for (const auto& e : positive) {
      g.pos[e.user][e.item] = 1.0 / std::sqrt(double(pdu[e.user]) * double(pdi[e.item]));
    }
    for (const auto& e : negative) {
      g.neg[e.user][e.item] = 1.0 / std::sqrt(double(ndu[e.user]) * double(ndi[e.item]));
    }
    return g;
  }
};

inline Rows zeros(int n, int d) { return Rows(n, Vec(d, 0.0)); }

// out[u] = sum_i A[u][i] * in[i]
inline Rows apply_user_side(const std::vector<std::vector<double>>& a, const Rows& in_items,
                            int num_users, int d) {
  Rows out = zeros(num_users, d);
  for (int u = 0; u < num_users; ++u) {
    for (std::size_t i = 0; i < in_items.size(); ++i) {
      for (int k = 0; k < d; ++k) out[u][k] += a[u][i] * in_items[i][k];
    }
  }
  return out;
}

// out[i] = sum_u A[u][i] * in[u]
inline Rows apply_item_side(const std::vector<std::vector<double>>& a, const Rows& in_users,
                            int num_items, int d) {
  Rows out = zeros(num_items, d);
  for (std::size_t u = 0; u < in_users.size(); ++u) {
    for (int i = 0; i < num_items; ++i) {
      for (int k = 0; k < d; ++k) out[i][k] += a[u][i] * in_users[u][k];
    }
  }
  return out;
}

struct DenseForward {
  // Index 0 holds the free embeddings; negative channel starts at 1.
  std::vector<Rows> pos_user, pos_item, neg_user, neg_item;
  Rows final_pos_user, final_pos_item, final_neg_user, final_neg_item;
};

// Reference propagation: layer 1 reads both signed edge sets; deeper
// layers push both channels along the positive edges only. Positives
// average layers 0..L, negatives 1..L.
inline DenseForward dense_forward(const DenseGraph& g, const Rows& e0_user, const Rows& e0_item,
                                  int layers) {
  const int d = e0_user.empty() ? 0 : int(e0_user[0].size());
  DenseForward f;
  f.pos_user.push_back(e0_user);
  f.pos_item.push_back(e0_item);
  f.neg_user.push_back(zeros(g.num_users, d));  // placeholder, unused
  f.neg_item.push_back(zeros(g.num_items, d));

  for (int l = 1; l <= layers; ++l) {
    if (l == 1) {
      f.pos_user.push_back(apply_user_side(g.pos, e0_item, g.num_users, d));
      f.neg_user.push_back(apply_user_side(g.neg, e0_item, g.num_users, d));
      f.pos_item.push_back(apply_item_side(g.pos, e0_user, g.num_items, d));
      f.neg_item.push_back(apply_item_side(g.neg, e0_user, g.num_items, d));
    } else {
      f.pos_user.push_back(apply_user_side(g.pos, f.pos_item[l - 1], g.num_users, d));
      f.neg_user.push_back(apply_user_side(g.pos, f.neg_item[l - 1], g.num_users, d));
      f.pos_item.push_back(apply_item_side(g.pos, f.pos_user[l - 1], g.num_items, d));
      f.neg_item.push_back(apply_item_side(g.pos, f.neg_user[l - 1], g.num_items, d));
    }
  }

  const auto mean_layers = [d](const std::vector<Rows>& layers_vec, int first, int last) {
    Rows out = zeros(int(layers_vec[0].size()), d);
    for (int l = first; l <= last; ++l) {
      for (std::size_t n = 0; n < out.size(); ++n) {
        for (int k = 0; k < d; ++k) out[n][k] += layers_vec[l][n][k];
      }
    }
    const double inv = 1.0 / double(last - first + 1);
    for (auto& row : out) {
      for (auto& x : row) x *= inv;
    }
    return out;
  };
  f.final_pos_user = mean_layers(f.pos_user, 0, layers);
  f.final_pos_item = mean_layers(f.pos_item, 0, layers);
  f.final_neg_user = mean_layers(f.neg_user, 1, layers);
  f.final_neg_item = mean_layers(f.neg_item, 1, layers);
  return f;
}

// Central-difference gradient of a scalar function of a flat parameter
// vector. Step h balances truncation against round-off for doubles.
inline Vec numeric_gradient(const std::function<double(const Vec&)>& f, Vec theta,
                            double h = 1e-5) {
  Vec grad(theta.size(), 0.0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double up = f(theta);
    theta[i] = saved - h;
    const double down = f(theta);
    theta[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Rank-metric references on an explicit ranked list.
inline double oracle_precision(const std::vector<Index>& ranked, const std::set<Index>& relevant,
                               int k) {
  int hits = 0;
  for (int r = 0; r < k && r < int(ranked.size()); ++r) hits += relevant.count(ranked[r]) ? 1 : 0;
  return double(hits) / double(k);
}

inline double oracle_recall(const std::vector<Index>& ranked, const std::set<Index>& relevant,
                            int k) {
  if (relevant.empty()) return 0.0;
  int hits = 0;
  for (int r = 0; r < k && r < int(ranked.size()); ++r) hits += relevant.count(ranked[r]) ? 1 : 0;
  return double(hits) / double(relevant.size());
}

inline double oracle_ndcg(const std::vector<Index>& ranked, const std::set<Index>& relevant,
                          int k) {
  if (relevant.empty()) return 0.0;
  double dcg = 0.0;
  for (int r = 0; r < k && r < int(ranked.size()); ++r) {
    if (relevant.count(ranked[r])) dcg += 1.0 / std::log2(double(r) + 2.0);
  }
  double idcg = 0.0;
  const int ideal = std::min<int>(k, int(relevant.size()));
  for (int r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(double(r) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

}  // namespace testsup

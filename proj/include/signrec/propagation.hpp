#pragma once

#include <vector>

#include "signrec/graph.hpp"
#include "signrec/types.hpp"

// Two-channel embedding propagation. Every node carries a positive and a
// negative embedding. The first hop reads both signed edge sets; deeper
// hops push both channels along the positive edges only, so the negative
// channel aggregates disliked signals from like-minded neighborhoods
// instead of chaining dislikes. The model is linear in the free
// embeddings, which the backward pass exploits.
namespace signrec {

template <typename T>
struct LayerQuad {
  Matrix<T> pos_user, pos_item, neg_user, neg_item;
};

template <typename T>
struct FinalEmbeddings {
  Matrix<T> pos_user, pos_item, neg_user, neg_item;
};

// Per-layer activations plus their combination. Positive layers span
// 0..L (index 0 is the free embeddings); negative layers start at 1, the
// index-0 slot stays empty.
template <typename T>
struct EmbeddingState {
  int num_layers = 0;
  std::vector<Matrix<T>> pos_user, pos_item, neg_user, neg_item;
  FinalEmbeddings<T> finals;
};

// Gradient of a loss with respect to the four final embedding blocks.
template <typename T>
struct FinalGradients {
  Matrix<T> pos_user, pos_item, neg_user, neg_item;

  void init(Index num_users, Index num_items, Index dim) {
    pos_user = Matrix<T>(num_users, dim);
    pos_item = Matrix<T>(num_items, dim);
    neg_user = Matrix<T>(num_users, dim);
    neg_item = Matrix<T>(num_items, dim);
  }
  void clear() {
    pos_user.fill(T{0});
    pos_item.fill(T{0});
    neg_user.fill(T{0});
    neg_item.fill(T{0});
  }
};

template <typename T>
LayerQuad<T> propagate_first_layer(const SignedBipartiteGraph& graph, const Matrix<T>& e0_user,
                                   const Matrix<T>& e0_item);

template <typename T>
LayerQuad<T> propagate_higher_layer(const SignedBipartiteGraph& graph, const LayerQuad<T>& prev);

// Mean over layers 0..L for the positive channel, 1..L for the negative.
template <typename T>
FinalEmbeddings<T> combine_layers(const EmbeddingState<T>& state);

template <typename T>
EmbeddingState<T> full_forward(const SignedBipartiteGraph& graph, const Matrix<T>& e0_user,
                               const Matrix<T>& e0_item, int num_layers);

// Accumulates d(loss)/d(e0) given d(loss)/d(finals), adding into the
// provided gradient matrices. Uses the transposed propagation chains;
// no forward state is needed because the map e0 -> finals is linear.
template <typename T>
void backward(const SignedBipartiteGraph& graph, int num_layers,
              const FinalGradients<T>& upstream, Matrix<T>& grad_e0_user,
              Matrix<T>& grad_e0_item);

}  // namespace signrec

#pragma once

#include <cstdint>
#include <vector>

#include "signrec/graph.hpp"
#include "signrec/propagation.hpp"
#include "signrec/rng.hpp"
#include "signrec/types.hpp"

// Training losses over the combined embeddings. Each function adds its
// gradient contribution into the caller's accumulators and returns the
// loss value; batch losses are averaged over the batch so magnitudes do
// not depend on batch size.
namespace signrec {

struct ObservedEdge {
  Index user = 0;
  Index item = 0;
  double rating = 0;
  std::int8_t sign = 0;
};

// One ranking comparison: an observed interaction against an item the
// user never touched under either sign.
struct BprTriple {
  Index user = 0;
  Index observed = 0;
  Index unobserved = 0;
  std::int8_t sign = 0;
};

struct TrainingBatch {
  std::vector<ObservedEdge> edges;
  std::vector<BprTriple> triples;  // edges x negatives_per_obs
};

// Uniform sample (with replacement) of observed edges plus rejection-
// sampled unobserved items. Throws ValidationError if no user has an
// unobserved item left to draw.
TrainingBatch sample_batch(const SignedBipartiteGraph& graph, int batch_size,
                           int negatives_per_obs, Rng& rng);

// Ranking loss on the positive channel: observed interactions should
// score above unobserved ones; confidence c1 boosts positively signed
// observations.
template <typename T>
double bpr_positive(const TrainingBatch& batch, const FinalEmbeddings<T>& finals, double c1,
                    FinalGradients<T>& grad);

// Ranking loss on the negative channel: unobserved items should carry
// more negative preference than observed ones; c2 boosts negatively
// signed observations.
template <typename T>
double bpr_negative(const TrainingBatch& batch, const FinalEmbeddings<T>& finals, double c2,
                    FinalGradients<T>& grad);

// Squared error of the rating head: a two-layer perceptron over the
// concatenated positive embeddings of user and item.
//   prediction = relu([e_u ; e_i] * w1) * w2,  w1: 2d x 2d, w2: 2d x 1
template <typename T>
double mse_rating(const TrainingBatch& batch, const FinalEmbeddings<T>& finals,
                  const Matrix<T>& w1, const Matrix<T>& w2, FinalGradients<T>& grad,
                  Matrix<T>& w1_grad, Matrix<T>& w2_grad);

// Keeps the two channels of every node decorrelated: mean squared inner
// product between positive and negative finals, users and items each
// averaged separately.
template <typename T>
double orthogonality(const FinalEmbeddings<T>& finals, FinalGradients<T>& grad);

}  // namespace signrec

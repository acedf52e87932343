#include "signrec/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "signrec/kernels.hpp"

namespace signrec {

namespace {

// log(1 + exp(-x)) without overflow on either tail.
double softplus_neg(double x) {
  if (x > 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

TrainingBatch sample_batch(const SignedBipartiteGraph& graph, int batch_size,
                           int negatives_per_obs, Rng& rng) {
  if (batch_size < 1 || negatives_per_obs < 1) {
    throw ValidationError("batch_size and negatives_per_obs must be >= 1");
  }
  const auto& edges = graph.edges();
  if (edges.empty()) throw ValidationError("cannot sample from a graph without edges");
  const auto num_edges = static_cast<std::uint64_t>(edges.size());
  const auto num_items = static_cast<std::uint64_t>(graph.num_items());

  TrainingBatch batch;
  batch.edges.reserve(static_cast<std::size_t>(batch_size));
  batch.triples.reserve(static_cast<std::size_t>(batch_size) * negatives_per_obs);

  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = static_cast<std::uint64_t>(batch_size) * 1000ULL;
  while (batch.edges.size() < static_cast<std::size_t>(batch_size)) {
    if (++attempts > max_attempts) {
      throw ValidationError("cannot sample unobserved items: graph is saturated");
    }
    const auto& e = edges[rng.uniform_int(num_edges)];
    if (graph.items_of(e.user).size() >= static_cast<std::size_t>(graph.num_items())) {
      continue;  // user interacted with every item
    }
    batch.edges.push_back({e.user, e.item, e.rating, e.sign});
    for (int k = 0; k < negatives_per_obs; ++k) {
      Index j = static_cast<Index>(rng.uniform_int(num_items));
      while (graph.interacted(e.user, j)) {
        j = static_cast<Index>(rng.uniform_int(num_items));
      }
      batch.triples.push_back({e.user, e.item, j, e.sign});
    }
  }
  return batch;
}

template <typename T>
double bpr_positive(const TrainingBatch& batch, const FinalEmbeddings<T>& finals, double c1,
                    FinalGradients<T>& grad) {
  if (batch.triples.empty()) return 0.0;
  const std::size_t d = static_cast<std::size_t>(finals.pos_user.cols());
  const double inv_b = 1.0 / static_cast<double>(batch.triples.size());
  double loss = 0.0;
  for (const auto& t : batch.triples) {
    const T* eu = finals.pos_user.row(t.user).data();
    const T* ei = finals.pos_item.row(t.observed).data();
    const T* ej = finals.pos_item.row(t.unobserved).data();
    const double coef = t.sign > 0 ? c1 : 1.0;
    const double si = kernels::dot(eu, ei, d);
    const double sj = kernels::dot(eu, ej, d);
    const double x = coef * si - sj;
    loss += softplus_neg(x);

    const double g = (sigmoid(x) - 1.0) * inv_b;
    kernels::axpy(static_cast<T>(g * coef), ei, grad.pos_user.row(t.user).data(), d);
    kernels::axpy(static_cast<T>(-g), ej, grad.pos_user.row(t.user).data(), d);
    kernels::axpy(static_cast<T>(g * coef), eu, grad.pos_item.row(t.observed).data(), d);
    kernels::axpy(static_cast<T>(-g), eu, grad.pos_item.row(t.unobserved).data(), d);
  }
  return loss * inv_b;
}

template <typename T>
double bpr_negative(const TrainingBatch& batch, const FinalEmbeddings<T>& finals, double c2,
                    FinalGradients<T>& grad) {
  if (batch.triples.empty()) return 0.0;
  const std::size_t d = static_cast<std::size_t>(finals.neg_user.cols());
  const double inv_b = 1.0 / static_cast<double>(batch.triples.size());
  double loss = 0.0;
  for (const auto& t : batch.triples) {
    const T* eu = finals.neg_user.row(t.user).data();
    const T* ei = finals.neg_item.row(t.observed).data();
    const T* ej = finals.neg_item.row(t.unobserved).data();
    const double coef = t.sign < 0 ? c2 : 1.0;
    const double si = kernels::dot(eu, ei, d);
    const double sj = kernels::dot(eu, ej, d);
    const double x = sj - coef * si;
    loss += softplus_neg(x);

    const double g = (sigmoid(x) - 1.0) * inv_b;
    kernels::axpy(static_cast<T>(g), ej, grad.neg_user.row(t.user).data(), d);
    kernels::axpy(static_cast<T>(-g * coef), ei, grad.neg_user.row(t.user).data(), d);
    kernels::axpy(static_cast<T>(-g * coef), eu, grad.neg_item.row(t.observed).data(), d);
    kernels::axpy(static_cast<T>(g), eu, grad.neg_item.row(t.unobserved).data(), d);
  }
  return loss * inv_b;
}

template <typename T>
double mse_rating(const TrainingBatch& batch, const FinalEmbeddings<T>& finals,
                  const Matrix<T>& w1, const Matrix<T>& w2, FinalGradients<T>& grad,
                  Matrix<T>& w1_grad, Matrix<T>& w2_grad) {
  if (batch.edges.empty()) return 0.0;
  const Index d = finals.pos_user.cols();
  const Index d2 = 2 * d;
  if (w1.rows() != d2 || w1.cols() != d2 || w2.rows() != d2 || w2.cols() != 1) {
    throw ValidationError("rating head weights do not match embedding dimension");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.edges.size());
  std::vector<T> concat(static_cast<std::size_t>(d2));
  std::vector<T> hidden(static_cast<std::size_t>(d2));
  std::vector<T> dz(static_cast<std::size_t>(d2));

  double loss = 0.0;
  for (const auto& e : batch.edges) {
    const auto eu = finals.pos_user.row(e.user);
    const auto ei = finals.pos_item.row(e.item);
    std::copy(eu.begin(), eu.end(), concat.begin());
    std::copy(ei.begin(), ei.end(), concat.begin() + d);

    // hidden = relu(concat * w1), column q uses w1(:, q)
    for (Index q = 0; q < d2; ++q) {
      double z = 0.0;
      for (Index p = 0; p < d2; ++p) z += double(concat[p]) * double(w1(p, q));
      hidden[q] = z > 0.0 ? static_cast<T>(z) : T{0};
    }
    const double pred = kernels::dot(hidden.data(), w2.data(), static_cast<std::size_t>(d2));
    const double err = pred - e.rating;
    loss += err * err;

    const double scale = 2.0 * err * inv_b;
    // dz = d(pred)/d(hidden pre-activation) = [hidden > 0] .* w2
    for (Index q = 0; q < d2; ++q) {
      dz[q] = hidden[q] > T{0} ? static_cast<T>(scale * double(w2(q, 0))) : T{0};
      w2_grad(q, 0) += static_cast<T>(scale) * hidden[q];
    }
    for (Index p = 0; p < d2; ++p) {
      kernels::axpy(concat[p], dz.data(), w1_grad.row(p).data(), static_cast<std::size_t>(d2));
    }
    // back to the concatenated embeddings: dconcat[p] = w1.row(p) . dz
    for (Index p = 0; p < d; ++p) {
      grad.pos_user(e.user, p) += static_cast<T>(
          kernels::dot(w1.row(p).data(), dz.data(), static_cast<std::size_t>(d2)));
    }
    for (Index p = 0; p < d; ++p) {
      grad.pos_item(e.item, p) += static_cast<T>(
          kernels::dot(w1.row(p + d).data(), dz.data(), static_cast<std::size_t>(d2)));
    }
  }
  return loss * inv_b;
}

template <typename T>
double orthogonality(const FinalEmbeddings<T>& finals, FinalGradients<T>& grad) {
  const std::size_t d = static_cast<std::size_t>(finals.pos_user.cols());
  const Index m = finals.pos_user.rows();
  const Index n = finals.pos_item.rows();

  double loss = 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (Index u = 0; u < m; ++u) {
    const T* ep = finals.pos_user.row(u).data();
    const T* en = finals.neg_user.row(u).data();
    const double t = kernels::dot(ep, en, d);
    loss += t * t * inv_m;
    const T s = static_cast<T>(2.0 * t * inv_m);
    kernels::axpy(s, en, grad.pos_user.row(u).data(), d);
    kernels::axpy(s, ep, grad.neg_user.row(u).data(), d);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    const T* ep = finals.pos_item.row(i).data();
    const T* en = finals.neg_item.row(i).data();
    const double t = kernels::dot(ep, en, d);
    loss += t * t * inv_n;
    const T s = static_cast<T>(2.0 * t * inv_n);
    kernels::axpy(s, en, grad.pos_item.row(i).data(), d);
    kernels::axpy(s, ep, grad.neg_item.row(i).data(), d);
  }
  return loss;
}

template double bpr_positive(const TrainingBatch&, const FinalEmbeddings<float>&, double,
                             FinalGradients<float>&);
template double bpr_positive(const TrainingBatch&, const FinalEmbeddings<double>&, double,
                             FinalGradients<double>&);
template double bpr_negative(const TrainingBatch&, const FinalEmbeddings<float>&, double,
                             FinalGradients<float>&);
template double bpr_negative(const TrainingBatch&, const FinalEmbeddings<double>&, double,
                             FinalGradients<double>&);
template double mse_rating(const TrainingBatch&, const FinalEmbeddings<float>&,
                           const Matrix<float>&, const Matrix<float>&, FinalGradients<float>&,
                           Matrix<float>&, Matrix<float>&);
template double mse_rating(const TrainingBatch&, const FinalEmbeddings<double>&,
                           const Matrix<double>&, const Matrix<double>&, FinalGradients<double>&,
                           Matrix<double>&, Matrix<double>&);
template double orthogonality(const FinalEmbeddings<float>&, FinalGradients<float>&);
template double orthogonality(const FinalEmbeddings<double>&, FinalGradients<double>&);

}  // namespace signrec

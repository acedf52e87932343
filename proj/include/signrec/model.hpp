#pragma once

#include <cstdint>
#include <string>

#include "signrec/rng.hpp"
#include "signrec/types.hpp"

namespace signrec {

enum class Precision { single_prec, double_prec };

inline const char* precision_name(Precision p) {
  return p == Precision::single_prec ? "float" : "double";
}

// One trainable tensor with its gradient and Adam moment estimates.
template <typename T>
struct ParamTensor {
  Matrix<T> value, grad, moment1, moment2;

  void init(Index rows, Index cols) {
    value = Matrix<T>(rows, cols);
    grad = Matrix<T>(rows, cols);
    moment1 = Matrix<T>(rows, cols);
    moment2 = Matrix<T>(rows, cols);
  }
};

// All free parameters: the layer-zero embeddings and the rating head.
template <typename T>
struct ModelParams {
  ParamTensor<T> e0_user, e0_item, w1, w2;
  std::int64_t adam_steps = 0;

  Index num_users() const { return e0_user.value.rows(); }
  Index num_items() const { return e0_item.value.rows(); }
  Index dim() const { return e0_user.value.cols(); }

  template <typename F>
  void for_each_tensor(F&& f) {
    f(e0_user);
    f(e0_item);
    f(w1);
    f(w2);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    f(e0_user);
    f(e0_item);
    f(w1);
    f(w2);
  }

  void clear_grads() {
    for_each_tensor([](ParamTensor<T>& t) { t.grad.fill(T{0}); });
  }
};

// Glorot-uniform initialization of embeddings and rating head.
template <typename T>
ModelParams<T> init_params(Index num_users, Index num_items, Index dim, Rng& rng);

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected optimizer step over every tensor. Gradients are
// checked for non-finite values (NumericError) and cleared afterwards.
template <typename T>
void adam_step(ModelParams<T>& params, double lr, const AdamSettings& settings = {});

// Adds lambda * d(|theta|^2)/d(theta) to the gradients and returns the
// raw squared norm (caller applies its own weighting to the value).
template <typename T>
double l2_penalty(ModelParams<T>& params, double lambda);

template <typename T>
struct Checkpoint {
  ModelParams<T> params;
  int num_layers = 0;
};

struct CheckpointInfo {
  Precision precision = Precision::double_prec;
  Index num_users = 0;
  Index num_items = 0;
  Index dim = 0;
  int num_layers = 0;
};

// Binary, little-endian, versioned. Stores shapes, layer count, Adam
// state and all tensor payloads, so training can resume bit-exactly.
template <typename T>
void save_checkpoint(const std::string& path, const ModelParams<T>& params, int num_layers);

CheckpointInfo peek_checkpoint(const std::string& path);

template <typename T>
Checkpoint<T> load_checkpoint(const std::string& path);

}  // namespace signrec

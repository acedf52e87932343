#include <cmath>
#include <cstddef>

#include "kernels_detail.hpp"

namespace signrec::kernels::detail::scalar {

namespace {

template <typename T>
void axpy_impl(T a, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
void scale_impl(T a, T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

template <typename T>
T dot_impl(const T* x, const T* y, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

template <typename T>
T sum_squares_impl(const T* x, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

template <typename T>
void adam_impl(T* p, const T* g, T* m, T* v, std::size_t n, T lr, T beta1,
               T beta2, T eps, T bias1, T bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (T{1} - beta1) * g[i];
    v[i] = beta2 * v[i] + (T{1} - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] * bias1) / (std::sqrt(v[i] * bias2) + eps);
  }
}

}  // namespace

void axpy(float a, const float* x, float* y, std::size_t n) { axpy_impl(a, x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { axpy_impl(a, x, y, n); }
void scale(float a, float* x, std::size_t n) { scale_impl(a, x, n); }
void scale(double a, double* x, std::size_t n) { scale_impl(a, x, n); }
float dot(const float* x, const float* y, std::size_t n) { return dot_impl(x, y, n); }
double dot(const double* x, const double* y, std::size_t n) { return dot_impl(x, y, n); }
float sum_squares(const float* x, std::size_t n) { return sum_squares_impl(x, n); }
double sum_squares(const double* x, std::size_t n) { return sum_squares_impl(x, n); }

void adam_update(float* p, const float* g, float* m, float* v, std::size_t n,
                 float lr, float beta1, float beta2, float eps, float bias1,
                 float bias2) {
  adam_impl(p, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}

void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
  adam_impl(p, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}

}  // namespace signrec::kernels::detail::scalar

#pragma once

#include <cstddef>

// Dense vector kernels behind the embedding math. Every operation has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant.
// The backend is picked once at startup (CPU probe, overridable through
// the SIGNREC_KERNELS environment variable or set_backend) and applies
// process-wide.
namespace signrec::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);

// Backend compiled in and supported by the running CPU.
bool available(Backend b);

Backend active_backend();

// Returns false and leaves the current backend in place if `b` is
// unavailable.
bool set_backend(Backend b);

// y += a * x
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

// x *= a
void scale(float a, float* x, std::size_t n);
void scale(double a, double* x, std::size_t n);

float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

float sum_squares(const float* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);

// One Adam step over a contiguous block. Updates first/second moment
// estimates in place and applies the bias-corrected step to p:
//   m = b1*m + (1-b1)*g
//   v = b2*v + (1-b2)*g^2
//   p -= lr * (m*bias1) / (sqrt(v*bias2) + eps)
// bias1/bias2 are the precomputed correction factors 1/(1-b^t).
void adam_update(float* p, const float* g, float* m, float* v, std::size_t n,
                 float lr, float beta1, float beta2, float eps, float bias1,
                 float bias2);
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2);

}  // namespace signrec::kernels

#pragma once

#include <cstddef>

namespace signrec::kernels::detail {

namespace scalar {
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(float a, float* x, std::size_t n);
void scale(double a, double* x, std::size_t n);
float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
float sum_squares(const float* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void adam_update(float* p, const float* g, float* m, float* v, std::size_t n,
                 float lr, float beta1, float beta2, float eps, float bias1,
                 float bias2);
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2);
}  // namespace scalar

#if defined(SIGNREC_HAVE_AVX2)
namespace avx2 {
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(float a, float* x, std::size_t n);
void scale(double a, double* x, std::size_t n);
float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
float sum_squares(const float* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void adam_update(float* p, const float* g, float* m, float* v, std::size_t n,
                 float lr, float beta1, float beta2, float eps, float bias1,
                 float bias2);
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2);
}  // namespace avx2
#endif

}  // namespace signrec::kernels::detail

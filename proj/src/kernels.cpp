#include "signrec/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_detail.hpp"

namespace signrec::kernels {

namespace {

bool cpu_supports_avx2() {
#if defined(SIGNREC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_default() {
  if (const char* env = std::getenv("SIGNREC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_supports_avx2()) return Backend::avx2;
  }
  return cpu_supports_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = resolve_default();

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool available(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_supports_avx2();
}

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
  if (!available(b)) return false;
  g_backend = b;
  return true;
}

#if defined(SIGNREC_HAVE_AVX2)
#define SIGNREC_DISPATCH(fn, ...)                        \
  do {                                                   \
    if (g_backend == Backend::avx2)                      \
      return detail::avx2::fn(__VA_ARGS__);              \
    return detail::scalar::fn(__VA_ARGS__);              \
  } while (0)
#else
#define SIGNREC_DISPATCH(fn, ...) return detail::scalar::fn(__VA_ARGS__)
#endif

void axpy(float a, const float* x, float* y, std::size_t n) {
  SIGNREC_DISPATCH(axpy, a, x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  SIGNREC_DISPATCH(axpy, a, x, y, n);
}

void scale(float a, float* x, std::size_t n) { SIGNREC_DISPATCH(scale, a, x, n); }
void scale(double a, double* x, std::size_t n) { SIGNREC_DISPATCH(scale, a, x, n); }

float dot(const float* x, const float* y, std::size_t n) {
  SIGNREC_DISPATCH(dot, x, y, n);
}
double dot(const double* x, const double* y, std::size_t n) {
  SIGNREC_DISPATCH(dot, x, y, n);
}

float sum_squares(const float* x, std::size_t n) {
  SIGNREC_DISPATCH(sum_squares, x, n);
}
double sum_squares(const double* x, std::size_t n) {
  SIGNREC_DISPATCH(sum_squares, x, n);
}

void adam_update(float* p, const float* g, float* m, float* v, std::size_t n,
                 float lr, float beta1, float beta2, float eps, float bias1,
                 float bias2) {
  SIGNREC_DISPATCH(adam_update, p, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}
void adam_update(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
  SIGNREC_DISPATCH(adam_update, p, g, m, v, n, lr, beta1, beta2, eps, bias1, bias2);
}

#undef SIGNREC_DISPATCH

}  // namespace signrec::kernels

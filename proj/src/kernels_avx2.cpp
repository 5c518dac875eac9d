// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "fuzzybeta/kernels.hpp"

namespace fuzzybeta::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void linear_predictor(const double* a, std::size_t n, std::size_t p, const double* coef,
                      double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < p; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coef[j]), _mm256_loadu_pd(a + j * n + i), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += coef[j] * a[j * n + i];
    out[i] = s;
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double triple_dot(const double* x, const double* w, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d xw0 = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i));
    const __m256d xw1 = _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(w + i + 4));
    acc0 = _mm256_fmadd_pd(xw0, _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(xw1, _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d xw = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i));
    acc0 = _mm256_fmadd_pd(xw, _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * w[i] * y[i];
  return s;
}

void transposed_product(const double* a, std::size_t n, std::size_t p, const double* w,
                        double* out) {
  for (std::size_t j = 0; j < p; ++j) out[j] = dot(a + j * n, w, n);
}

void weighted_cross(const double* a, std::size_t p, const double* b, std::size_t q,
                    std::size_t n, const double* w, double* out) {
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t j = 0; j < p; ++j) out[k * p + j] = triple_dot(a + j * n, w, b + k * n, n);
  }
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::avx2, "avx2", &linear_predictor, &transposed_product,
                             &weighted_cross};
}

}  // namespace fuzzybeta::kernels

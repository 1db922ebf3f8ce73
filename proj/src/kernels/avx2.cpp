#include "ising/kernels.hpp"

#if defined(ISING_HAVE_AVX2)

#include <immintrin.h>

namespace ising::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double pair_edge_energy_avx2(const std::int32_t* u, const std::int32_t* v, const double* w,
                             std::size_t m, const double* s) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= m; k += 8) {
    __m128i iu0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(u + k));
    __m128i iv0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v + k));
    __m128i iu1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(u + k + 4));
    __m128i iv1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v + k + 4));
    __m256d su0 = _mm256_i32gather_pd(s, iu0, 8);
    __m256d sv0 = _mm256_i32gather_pd(s, iv0, 8);
    __m256d su1 = _mm256_i32gather_pd(s, iu1, 8);
    __m256d sv1 = _mm256_i32gather_pd(s, iv1, 8);
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_mul_pd(su0, sv0), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k + 4), _mm256_mul_pd(su1, sv1), acc1);
  }
  for (; k + 4 <= m; k += 4) {
    __m128i iu = _mm_loadu_si128(reinterpret_cast<const __m128i*>(u + k));
    __m128i iv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v + k));
    __m256d su = _mm256_i32gather_pd(s, iu, 8);
    __m256d sv = _mm256_i32gather_pd(s, iv, 8);
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_mul_pd(su, sv), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < m; ++k) acc += w[k] * s[u[k]] * s[v[k]];
  return acc;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void csr_lambda_avx2(const std::int64_t* off, const std::int32_t* nbr, const double* w,
                     std::size_t n, const double* s, double* lambda) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t begin = off[i];
    const std::int64_t end = off[i + 1];
    std::int64_t k = begin;
    double acc = 0.0;
    if (end - begin >= 4) {
      __m256d vacc = _mm256_setzero_pd();
      for (; k + 4 <= end; k += 4) {
        __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(nbr + k));
        __m256d sv = _mm256_i32gather_pd(s, ix, 8);
        vacc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), sv, vacc);
      }
      acc = hsum(vacc);
    }
    for (; k < end; ++k) acc += w[k] * s[nbr[k]];
    lambda[i] = acc;
  }
}

void gain_from_field_avx2(const double* s, const double* lambda, const double* h, std::size_t n,
                          double* out) {
  const __m256d minus_two = _mm256_set1_pd(-2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(lambda + i), _mm256_loadu_pd(h + i));
    __m256d g = _mm256_mul_pd(_mm256_mul_pd(minus_two, _mm256_loadu_pd(s + i)), t);
    _mm256_storeu_pd(out + i, g);
  }
  for (; i < n; ++i) out[i] = -2.0 * s[i] * (lambda[i] + h[i]);
}

}  // namespace

extern const Ops kAvx2Ops;
const Ops kAvx2Ops{pair_edge_energy_avx2, dot_avx2, csr_lambda_avx2, gain_from_field_avx2};

}  // namespace ising::kernels

#endif  // ISING_HAVE_AVX2

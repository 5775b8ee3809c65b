#include <immintrin.h>

#include <algorithm>

#include "bppr/simd/kernels.hpp"

namespace bppr::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void project(const double* X, std::size_t ld, std::size_t n, const int* cols,
             const double* weights, std::size_t ncols, double* out) {
  std::fill(out, out + n, 0.0);
  for (std::size_t k = 0; k < ncols; ++k) {
    const double* x = X + static_cast<std::size_t>(cols[k]) * ld;
    const double w = weights[k];
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(out + i, _mm256_fmadd_pd(wv, _mm256_loadu_pd(x + i), _mm256_loadu_pd(out + i)));
    }
    for (; i < n; ++i) out[i] += w * x[i];
  }
}

inline __m256d cube_pos(__m256d v) {
  const __m256d p = _mm256_max_pd(v, _mm256_setzero_pd());
  return _mm256_mul_pd(_mm256_mul_pd(p, p), p);
}

inline double cube_pos(double v) { return v > 0.0 ? v * v * v : 0.0; }

void spline_basis(const double* u, std::size_t n, double t0, const double* knots, int K,
                  double* out) {
  const double t_last = knots[K];
  const __m256d zero = _mm256_setzero_pd();
  const __m256d t0v = _mm256_set1_pd(t0);
  const __m256d tlv = _mm256_set1_pd(t_last);
  const double inv_last = 1.0 / (t_last - knots[K - 1]);
  const __m256d inv_last_v = _mm256_set1_pd(inv_last);
  const __m256d tKv = _mm256_set1_pd(knots[K - 1]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(u + i);
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_sub_pd(v, t0v), zero));
    if (K < 2) continue;
    const __m256d tail = cube_pos(_mm256_sub_pd(v, tlv));
    const __m256d dK = _mm256_mul_pd(_mm256_sub_pd(cube_pos(_mm256_sub_pd(v, tKv)), tail), inv_last_v);
    for (int l = 1; l < K; ++l) {
      const __m256d tl = _mm256_set1_pd(knots[l - 1]);
      const __m256d denom = _mm256_set1_pd(t_last - knots[l - 1]);
      const __m256d dl = _mm256_div_pd(_mm256_sub_pd(cube_pos(_mm256_sub_pd(v, tl)), tail), denom);
      _mm256_storeu_pd(out + static_cast<std::size_t>(l) * n + i, _mm256_sub_pd(dl, dK));
    }
  }
  for (; i < n; ++i) {
    const double v = u[i];
    out[i] = std::max(v - t0, 0.0);
    if (K < 2) continue;
    const double tail = cube_pos(v - t_last);
    const double dK = (cube_pos(v - knots[K - 1]) - tail) * inv_last;
    for (int l = 1; l < K; ++l) {
      const double dl = (cube_pos(v - knots[l - 1]) - tail) / (t_last - knots[l - 1]);
      out[static_cast<std::size_t>(l) * n + i] = dl - dK;
    }
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gram(const double* B, std::size_t n, std::size_t cols, const double* y, double* G,
          double* Bty) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* bj = B + j * n;
    for (std::size_t k = 0; k <= j; ++k) {
      const double v = dot(bj, B + k * n, n);
      G[j * cols + k] = v;
      G[k * cols + j] = v;
    }
    Bty[j] = dot(bj, y, n);
  }
}

void gemv(const double* B, std::size_t n, std::size_t cols, const double* beta, double* out) {
  std::fill(out, out + n, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* bj = B + j * n;
    const double w = beta[j];
    const __m256d wv = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(out + i, _mm256_fmadd_pd(wv, _mm256_loadu_pd(bj + i), _mm256_loadu_pd(out + i)));
    }
    for (; i < n; ++i) out[i] += w * bj[i];
  }
}

}  // namespace

// Defined in this translation unit so only AVX2-compiled code touches the table.
const Kernels& avx2_kernel_table() {
  static const Kernels k{"avx2", project, spline_basis, dot, gram, gemv};
  return k;
}

}  // namespace bppr::simd

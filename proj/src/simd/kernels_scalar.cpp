#include <algorithm>

#include "bppr/simd/kernels.hpp"

namespace bppr::simd {
namespace {

void project(const double* X, std::size_t ld, std::size_t n, const int* cols,
             const double* weights, std::size_t ncols, double* out) {
  std::fill(out, out + n, 0.0);
  for (std::size_t k = 0; k < ncols; ++k) {
    const double* x = X + static_cast<std::size_t>(cols[k]) * ld;
    const double w = weights[k];
    for (std::size_t i = 0; i < n; ++i) out[i] += w * x[i];
  }
}

inline double cube_pos(double v) { return v > 0.0 ? v * v * v : 0.0; }

void spline_basis(const double* u, std::size_t n, double t0, const double* knots, int K,
                  double* out) {
  const double t_last = knots[K];
  const double inv_last = 1.0 / (t_last - knots[K - 1]);
  for (std::size_t i = 0; i < n; ++i) {
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
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
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
    for (std::size_t i = 0; i < n; ++i) out[i] += w * bj[i];
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", project, spline_basis, dot, gram, gemv};
  return k;
}

}  // namespace bppr::simd

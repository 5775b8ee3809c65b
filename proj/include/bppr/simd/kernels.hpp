#pragma once

#include <cstddef>

// Data-parallel inner loops of the sampler. Every variant computes the same
// quantities as the scalar reference; results agree to rounding (the AVX2
// variant uses fused multiply-add and a different summation order).
namespace bppr::simd {

struct Kernels {
  const char* name;

  // out[i] = sum_k weights[k] * X[i + cols[k] * ld], i < n.
  void (*project)(const double* X, std::size_t ld, std::size_t n, const int* cols,
                  const double* weights, std::size_t ncols, double* out);

  // Modified natural spline basis for each u[i]. `knots` holds t_1..t_{K+1};
  // out is n x K column-major with leading dimension n.
  void (*spline_basis)(const double* u, std::size_t n, double t0, const double* knots, int K,
                       double* out);

  double (*dot)(const double* a, const double* b, std::size_t n);

  // G = B'B (full symmetric, cols x cols, column-major) and Bty = B'y for a
  // column-major n x cols matrix B.
  void (*gram)(const double* B, std::size_t n, std::size_t cols, const double* y, double* G,
               double* Bty);

  // out = B * beta.
  void (*gemv)(const double* B, std::size_t n, std::size_t cols, const double* beta, double* out);
};

const Kernels& scalar_kernels();
// Null when not compiled in or not supported by the running CPU.
const Kernels* avx2_kernels();
// Chosen once per process: AVX2 when available unless BPPR_SIMD=scalar.
const Kernels& active_kernels();

}  // namespace bppr::simd

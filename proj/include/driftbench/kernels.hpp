#pragma once

#include <cstddef>
#include <vector>

namespace driftbench::kernels {

// Arithmetic kernels behind the dense numeric paths (matrix products,
// kernel matrices, reductions). Scalar reference implementations always
// exist; vector variants (AVX2 on x86-64, NEON on aarch64) are compiled in
// when the toolchain supports them and selected at runtime.
//
// Reduction contract: partial sums accumulate in four interleaved lanes
// combined as (s0 + s1) + (s2 + s3), remainder folded in sequentially, and
// no fused multiply-add anywhere. Vector variants follow the identical
// order, so every variant returns bit-identical results and dispatch can
// never change an output.
struct Kernels {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

// Scalar reference variant.
const Kernels& scalar();

// Variants usable on this CPU, scalar first, most specialized last.
const std::vector<const Kernels*>& available();

// The selected variant: the last entry of available(), or the one named by
// the DRIFTBENCH_KERNELS environment variable (unknown names are an error).
const Kernels& active();

}  // namespace driftbench::kernels

#pragma once

#include "driftbench/kernels.hpp"

namespace driftbench::kernels {

#ifdef DRIFTBENCH_HAVE_AVX2
const Kernels& avx2();
#endif
#ifdef DRIFTBENCH_HAVE_NEON
const Kernels& neon();
#endif

}  // namespace driftbench::kernels

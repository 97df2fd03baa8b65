#include "driftbench/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "driftbench/errors.hpp"
#include "kernels_variants.hpp"

namespace driftbench::kernels {

const std::vector<const Kernels*>& available() {
  static const std::vector<const Kernels*> variants = [] {
    std::vector<const Kernels*> v{&scalar()};
#ifdef DRIFTBENCH_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
    if (__builtin_cpu_supports("avx2")) v.push_back(&avx2());
#endif
#endif
#ifdef DRIFTBENCH_HAVE_NEON
    v.push_back(&neon());
#endif
    return v;
  }();
  return variants;
}

const Kernels& active() {
  static const Kernels* selected = [] {
    const auto& variants = available();
    if (const char* forced = std::getenv("DRIFTBENCH_KERNELS")) {
      for (const Kernels* k : variants) {
        if (std::strcmp(k->name, forced) == 0) return k;
      }
      throw Error(Errc::invalid_config,
                  std::string("DRIFTBENCH_KERNELS names an unavailable variant: ") +
                      forced);
    }
    return variants.back();
  }();
  return *selected;
}

}  // namespace driftbench::kernels

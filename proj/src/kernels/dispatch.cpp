#include <cstdlib>

#include "kernels_impl.hpp"

namespace scenery::kernels {

const KernelTable* avx2_table() {
#if defined(SCENERY_BUILD_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* force = std::getenv("SCENERY_FORCE_SCALAR");
    if (force && *force && *force != '0') return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }();
  return *chosen;
}

}  // namespace scenery::kernels

#pragma once

#include "scenery/kernels.hpp"

namespace scenery::kernels {

inline constexpr int kMaxKernelDim = 16;

#if defined(SCENERY_BUILD_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace scenery::kernels

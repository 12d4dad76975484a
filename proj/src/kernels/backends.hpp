#pragma once

#include "deorbit/kernels/kernels.hpp"

namespace deorbit::kernels::detail {

extern const KernelTable kScalarTable;

#if defined(DEORBIT_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

#if defined(DEORBIT_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace deorbit::kernels::detail

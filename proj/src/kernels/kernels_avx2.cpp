// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma; see src/CMakeLists.txt.  Never executed on
// CPUs without those features (runtime dispatch in dispatch.cpp).

#include "nlswag/kernels/kernel_impl.hpp"
#include "pack_avx2.hpp"

namespace nlswag::kernels {

namespace {
// Tail lanes reuse PackScalar compiled in this TU; results are identical
// to the scalar table by construction.
struct ScalarTailTag : PackScalar {};
}  // namespace

const KernelTable* avx2_kernels_impl();

const KernelTable* avx2_kernels_impl() {
    static const KernelTable t = KernelsImpl<PackAvx2, ScalarTailTag>::table("avx2");
    return &t;
}

}  // namespace nlswag::kernels

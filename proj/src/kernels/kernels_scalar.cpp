// SPDX-License-Identifier: Apache-2.0

#include "nlswag/kernels/kernel_impl.hpp"

namespace nlswag::kernels {

const KernelTable& scalar_kernels() {
    static const KernelTable t = KernelsImpl<PackScalar>::table("scalar");
    return t;
}

}  // namespace nlswag::kernels

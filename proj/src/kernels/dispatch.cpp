// SPDX-License-Identifier: Apache-2.0

#include "nlswag/kernels/kernels.hpp"

#include "nlswag/errors.hpp"

namespace nlswag::kernels {

const KernelTable* avx2_kernels_impl();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable* t = cpu_has_avx2_fma() ? avx2_kernels_impl() : nullptr;
    return t;
}

const KernelTable& select_kernels(Variant v) {
    switch (v) {
        case Variant::Scalar: return scalar_kernels();
        case Variant::Avx2: {
            const KernelTable* t = avx2_kernels();
            if (!t) throw ConfigError("avx2 kernels requested but CPU lacks AVX2/FMA");
            return *t;
        }
        case Variant::Auto: {
            const KernelTable* t = avx2_kernels();
            return t ? *t : scalar_kernels();
        }
    }
    return scalar_kernels();
}

Variant parse_variant(const std::string& name) {
    if (name == "auto") return Variant::Auto;
    if (name == "scalar") return Variant::Scalar;
    if (name == "avx2") return Variant::Avx2;
    throw ConfigError("unknown kernel variant: " + name + " (expected auto|scalar|avx2)");
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Auto: return "auto";
        case Variant::Scalar: return "scalar";
        case Variant::Avx2: return "avx2";
    }
    return "auto";
}

}  // namespace nlswag::kernels

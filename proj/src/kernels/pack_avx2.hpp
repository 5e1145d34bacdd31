// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_KERNELS_PACK_AVX2_HPP
#define NLSWAG_KERNELS_PACK_AVX2_HPP

#include <cstdint>
#include <immintrin.h>

// 4-wide double pack over AVX2 + FMA.  Only the kernels_avx2 translation
// unit includes this header; runtime dispatch keeps these code paths off
// CPUs without the required ISA.

namespace nlswag::kernels {

struct PackAvx2 {
    static constexpr int width = 4;
    using value = __m256d;
    using ivalue = __m256i;
    using mask = __m256d;

    static value load(const double* p) { return _mm256_load_pd(p); }
    static value loadu(const double* p) { return _mm256_loadu_pd(p); }
    static void store(double* p, value v) { _mm256_store_pd(p, v); }
    static void storeu(double* p, value v) { _mm256_storeu_pd(p, v); }
    static void store_lanes(value v, double* lanes) { _mm256_storeu_pd(lanes, v); }
    static value broadcast(double x) { return _mm256_set1_pd(x); }
    static value zero() { return _mm256_setzero_pd(); }

    static value add(value a, value b) { return _mm256_add_pd(a, b); }
    static value sub(value a, value b) { return _mm256_sub_pd(a, b); }
    static value mul(value a, value b) { return _mm256_mul_pd(a, b); }
    static value div(value a, value b) { return _mm256_div_pd(a, b); }
    static value fma(value a, value b, value c) { return _mm256_fmadd_pd(a, b, c); }
    static value sqrt(value a) { return _mm256_sqrt_pd(a); }
    static value max(value a, value b) { return _mm256_max_pd(a, b); }  // a > b ? a : b
    static value min(value a, value b) { return _mm256_min_pd(a, b); }  // a < b ? a : b
    static value neg(value a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }

    static mask lt(value a, value b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
    static mask le(value a, value b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
    static mask gt(value a, value b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
    static value select(mask m, value a, value b) { return _mm256_blendv_pd(b, a, m); }

    static ivalue to_bits(value a) { return _mm256_castpd_si256(a); }
    static value from_bits(ivalue a) { return _mm256_castsi256_pd(a); }
    static ivalue shr(ivalue a, int k) { return _mm256_srli_epi64(a, k); }
    static ivalue shl(ivalue a, int k) { return _mm256_slli_epi64(a, k); }
    static ivalue and_(ivalue a, ivalue b) { return _mm256_and_si256(a, b); }
    static ivalue or_(ivalue a, ivalue b) { return _mm256_or_si256(a, b); }
    static ivalue add_i(ivalue a, ivalue b) { return _mm256_add_epi64(a, b); }
    static ivalue sub_i(ivalue a, ivalue b) { return _mm256_sub_epi64(a, b); }
    static ivalue broadcast_i(std::uint64_t x) { return _mm256_set1_epi64x(std::int64_t(x)); }
};

}  // namespace nlswag::kernels

#endif

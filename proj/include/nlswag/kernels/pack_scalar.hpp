// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_KERNELS_PACK_SCALAR_HPP
#define NLSWAG_KERNELS_PACK_SCALAR_HPP

#include <bit>
#include <cmath>
#include <cstdint>

// Scalar lane type with the same operation set as the SIMD packs.  Every
// operation maps to one exactly-rounded IEEE-754 operation, so templated
// kernels instantiate to bit-identical arithmetic in all variants.

namespace nlswag::kernels {

struct PackScalar {
    static constexpr int width = 1;
    using value = double;
    using ivalue = std::uint64_t;
    using mask = bool;

    static value load(const double* p) { return *p; }
    static value loadu(const double* p) { return *p; }
    static void store(double* p, value v) { *p = v; }
    static void storeu(double* p, value v) { *p = v; }
    static void store_lanes(value v, double* lanes) { lanes[0] = v; }
    static value broadcast(double x) { return x; }
    static value zero() { return 0.0; }

    static value add(value a, value b) { return a + b; }
    static value sub(value a, value b) { return a - b; }
    static value mul(value a, value b) { return a * b; }
    static value div(value a, value b) { return a / b; }
    static value fma(value a, value b, value c) { return std::fma(a, b, c); }
    static value sqrt(value a) { return std::sqrt(a); }
    static value max(value a, value b) { return a > b ? a : b; }   // matches vmaxpd semantics
    static value min(value a, value b) { return a < b ? a : b; }
    static value neg(value a) { return -a; }

    static mask lt(value a, value b) { return a < b; }
    static mask le(value a, value b) { return a <= b; }
    static mask gt(value a, value b) { return a > b; }
    static value select(mask m, value a, value b) { return m ? a : b; }

    static ivalue to_bits(value a) { return std::bit_cast<ivalue>(a); }
    static value from_bits(ivalue a) { return std::bit_cast<value>(a); }
    static ivalue shr(ivalue a, int k) { return a >> k; }
    static ivalue shl(ivalue a, int k) { return a << k; }
    static ivalue and_(ivalue a, ivalue b) { return a & b; }
    static ivalue or_(ivalue a, ivalue b) { return a | b; }
    static ivalue add_i(ivalue a, ivalue b) { return a + b; }
    static ivalue sub_i(ivalue a, ivalue b) { return a - b; }
    static ivalue broadcast_i(std::uint64_t x) { return x; }
};

}  // namespace nlswag::kernels

#endif

// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_KERNELS_VECMATH_HPP
#define NLSWAG_KERNELS_VECMATH_HPP

#include <array>
#include <cstdint>
#include <limits>

// exp/log/asin evaluated with the same polynomial and operation order in
// every pack width.  Accuracy is a few ulp, which the oracle tolerances
// budget for; bit-for-bit agreement between scalar and SIMD variants is
// guaranteed by construction.

namespace nlswag::kernels {

namespace vm {

inline constexpr double kLog2E = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // 0x3FE62E42FEE00000
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kMagicShift = 6755399441055744.0;  // 1.5 * 2^52
inline constexpr double kExp2_52 = 4503599627370496.0;     // 2^52
inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kPi2Hi = 1.5707963267948966;
inline constexpr double kPi2Lo = 6.123233995736766e-17;
inline constexpr double kHuge = 1.0e308;

// 1/k! for k = 0..13
inline constexpr auto kExpCoef = [] {
    std::array<double, 14> c{};
    double f = 1.0;
    for (int k = 0; k < 14; ++k) {
        if (k > 0) f *= double(k);
        c[size_t(k)] = 1.0 / f;
    }
    return c;
}();

// 1/(2k+3) for k = 0..10, the atanh-series tail of log
inline constexpr auto kLogCoef = [] {
    std::array<double, 11> c{};
    for (int k = 0; k <= 10; ++k) c[size_t(k)] = 1.0 / double(2 * k + 3);
    return c;
}();

// asin Taylor: asin(x) = x * sum_k c_k x^(2k), c_k = c_(k-1)*(2k-1)^2/((2k)(2k+1))
inline constexpr auto kAsinCoef = [] {
    std::array<double, 27> c{};
    c[0] = 1.0;
    for (int k = 1; k <= 26; ++k)
        c[size_t(k)] = c[size_t(k - 1)] * double((2 * k - 1) * (2 * k - 1)) / double(2 * k * (2 * k + 1));
    return c;
}();

// G(rho)/rho^(3/2) Taylor coefficients, see nlswag::similarity
inline constexpr std::array<double, 8> kGSeries = {
    4.0 / 3.0, 4.0 / 5.0, 9.0 / 14.0, 5.0 / 9.0, 175.0 / 352.0, 189.0 / 416.0, 539.0 / 1280.0, 429.0 / 1088.0};

}  // namespace vm

// exp(x); returns exactly 0 for x <= -708 and +inf for x >= 710.
template <class P>
static typename P::value v_exp(typename P::value x) {
    using V = typename P::value;
    V lo = P::broadcast(-708.0);
    V hi = P::broadcast(710.0);
    auto too_small = P::lt(x, lo);
    auto too_big = P::gt(x, hi);
    V xc = P::min(P::max(x, lo), hi);

    V magic = P::broadcast(vm::kMagicShift);
    V nd = P::sub(P::fma(xc, P::broadcast(vm::kLog2E), magic), magic);
    V r = P::fma(nd, P::broadcast(-vm::kLn2Hi), xc);
    r = P::fma(nd, P::broadcast(-vm::kLn2Lo), r);

    V p = P::broadcast(vm::kExpCoef[13]);
    for (int k = 12; k >= 0; --k) p = P::fma(p, r, P::broadcast(vm::kExpCoef[size_t(k)]));

    // scale by 2^n via exponent bits; n is in [-1022, 1023] after clamping
    auto nbits = P::to_bits(P::add(nd, magic));
    auto n = P::sub_i(P::and_(nbits, P::broadcast_i((std::uint64_t(1) << 52) - 1)),
                      P::broadcast_i(std::uint64_t(1) << 51));
    auto ebits = P::shl(P::add_i(n, P::broadcast_i(1023)), 52);
    V scale = P::from_bits(ebits);
    V res = P::mul(p, scale);

    res = P::select(too_small, P::zero(), res);
    res = P::select(too_big, P::broadcast(std::numeric_limits<double>::infinity()), res);
    return res;
}

// log(x) for x > 0 finite; non-positive inputs map to -1e308.
template <class P>
static typename P::value v_log(typename P::value x) {
    using V = typename P::value;
    auto nonpos = P::le(x, P::zero());
    auto tiny = P::lt(x, P::broadcast(2.2250738585072014e-308));  // subnormal inputs
    V xs = P::select(tiny, P::mul(x, P::broadcast(0x1p54)), x);
    V eadj = P::select(tiny, P::broadcast(-54.0), P::zero());

    auto bits = P::to_bits(P::max(xs, P::broadcast(4.9406564584124654e-324)));
    auto eraw = P::shr(bits, 52);
    V ed = P::sub(P::from_bits(P::or_(eraw, P::to_bits(P::broadcast(vm::kExp2_52)))),
                  P::broadcast(vm::kExp2_52));
    ed = P::add(P::sub(ed, P::broadcast(1023.0)), eadj);

    auto mbits = P::or_(P::and_(bits, P::broadcast_i(0x000FFFFFFFFFFFFFull)),
                        P::to_bits(P::broadcast(1.0)));
    V m = P::from_bits(mbits);
    auto mhigh = P::gt(m, P::broadcast(vm::kSqrt2));
    m = P::select(mhigh, P::mul(m, P::broadcast(0.5)), m);
    ed = P::select(mhigh, P::add(ed, P::broadcast(1.0)), ed);

    V s = P::div(P::sub(m, P::broadcast(1.0)), P::add(m, P::broadcast(1.0)));
    V t = P::mul(s, s);
    V q = P::broadcast(vm::kLogCoef[10]);
    for (int k = 9; k >= 0; --k) q = P::fma(q, t, P::broadcast(vm::kLogCoef[size_t(k)]));
    V two_s = P::add(s, s);
    V logm = P::fma(P::mul(two_s, t), q, two_s);

    V res = P::fma(ed, P::broadcast(vm::kLn2Lo), logm);
    res = P::fma(ed, P::broadcast(vm::kLn2Hi), res);
    return P::select(nonpos, P::broadcast(-vm::kHuge), res);
}

// asin(u) for u in [0, 1].
template <class P>
static typename P::value v_asin(typename P::value u) {
    using V = typename P::value;
    auto big = P::gt(u, P::broadcast(0.5));
    V tbig = P::mul(P::sub(P::broadcast(1.0), u), P::broadcast(0.5));
    V t = P::select(big, tbig, P::mul(u, u));
    V arg = P::select(big, P::sqrt(tbig), u);

    V p = P::broadcast(vm::kAsinCoef[26]);
    for (int k = 25; k >= 0; --k) p = P::fma(p, t, P::broadcast(vm::kAsinCoef[size_t(k)]));
    V s = P::mul(arg, p);

    V r = P::sub(P::broadcast(vm::kPi2Hi), P::add(s, s));
    r = P::add(r, P::broadcast(vm::kPi2Lo));
    return P::select(big, r, s);
}

// -log(delta1) from the quadratic forms
//   A = (sum of the four squared amplitudes)^2
//   B = |z_x| * |z_y|
//   C = 4 * |z_x + z_y|^2
// with C clamped into [epsC, A*(1 - epsC)].  The bracket
//   G = (A+C)/A * sqrt(C/(A-C)) - asin(sqrt(C/A))
// cancels catastrophically for C/A -> 0 and is evaluated by its series
// G = rho^(3/2) * (4/3 + ...) below kGSwitch.  B == 0 (a zero amplitude)
// or A == 0 saturates to kDissimCap (maximal dissimilarity).
inline constexpr double kEpsC = 1e-12;
inline constexpr double kGSwitch = 4e-3;
inline constexpr double kDissimCap = 1.0e4;

template <class P>
static typename P::value neg_log_delta1_core(typename P::value A, typename P::value B, typename P::value C) {
    using V = typename P::value;
    auto degenerate = P::le(P::mul(A, B), P::zero());

    V c = P::min(P::max(C, P::broadcast(kEpsC)), P::mul(A, P::broadcast(1.0 - kEpsC)));
    V rho = P::div(c, P::max(A, P::broadcast(4.9406564584124654e-324)));

    // direct branch
    V g_direct = P::sub(P::mul(P::div(P::add(A, c), A), P::sqrt(P::div(c, P::sub(A, c)))),
                        v_asin<P>(P::sqrt(rho)));
    // series branch
    V ser = P::broadcast(vm::kGSeries[7]);
    for (int k = 6; k >= 0; --k) ser = P::fma(ser, rho, P::broadcast(vm::kGSeries[size_t(k)]));
    V g_series = P::mul(P::mul(rho, P::sqrt(rho)), ser);

    V g = P::select(P::lt(rho, P::broadcast(kGSwitch)), g_series, g_direct);

    V t = P::div(B, c);
    V nld = P::neg(P::fma(P::broadcast(1.5), v_log<P>(t), v_log<P>(g)));
    nld = P::min(nld, P::broadcast(kDissimCap));
    return P::select(degenerate, P::broadcast(kDissimCap), nld);
}

}  // namespace nlswag::kernels

#endif

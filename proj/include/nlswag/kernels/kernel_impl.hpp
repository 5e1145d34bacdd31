// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_KERNELS_KERNEL_IMPL_HPP
#define NLSWAG_KERNELS_KERNEL_IMPL_HPP

#include <cmath>

#include "nlswag/kernels/kernels.hpp"
#include "nlswag/kernels/pack_scalar.hpp"
#include "nlswag/kernels/vecmath.hpp"

// Row-kernel bodies, templated on the pack type.  Each translation unit
// instantiates KernelsImpl with its own pack, so no instantiation is
// shared across differently-compiled TUs.  Scalar remainder lanes follow
// the same code path via PackScalar, which by construction computes the
// same values per element.
//
// Horizontal reductions accumulate into four fixed lanes regardless of
// pack width and combine them as (l0+l1)+(l2+l3); this keeps scalar and
// SIMD variants bit-identical.

namespace nlswag::kernels {

inline constexpr double kTwoPiK = 6.283185307179586476925286766559;
inline constexpr double kPiK = 3.14159265358979323846;

template <class P, class PT = PackScalar>
struct KernelsImpl {
    using V = typename P::value;

    static void exp_row(const double* x, int n, double* out) {
        int i = 0;
        for (; i + P::width <= n; i += P::width) P::storeu(out + i, v_exp<P>(P::loadu(x + i)));
        for (; i < n; ++i) out[i] = v_exp<PT>(x[i]);
    }

    static void exp_neg_scaled_row(const double* s, const double* scale, int n, double* out) {
        int i = 0;
        for (; i + P::width <= n; i += P::width) {
            V arg = P::neg(P::mul(P::loadu(s + i), P::loadu(scale + i)));
            P::storeu(out + i, v_exp<P>(arg));
        }
        for (; i < n; ++i) out[i] = v_exp<PT>(-(s[i] * scale[i]));
    }

    static void log_row(const double* x, int n, double* out) {
        int i = 0;
        for (; i + P::width <= n; i += P::width) P::storeu(out + i, v_log<P>(P::loadu(x + i)));
        for (; i < n; ++i) out[i] = v_log<PT>(x[i]);
    }

    template <class Q>
    static typename Q::value dissim1_at(const double* S, const double* zre, const double* zim,
                                        const double* zabs, std::ptrdiff_t doff, int i) {
        using W = typename Q::value;
        W s0 = Q::loadu(S + i), s1 = Q::loadu(S + i + doff);
        W a = Q::add(s0, s1);
        W A = Q::mul(a, a);
        W B = Q::mul(Q::loadu(zabs + i), Q::loadu(zabs + i + doff));
        W cre = Q::add(Q::loadu(zre + i), Q::loadu(zre + i + doff));
        W cim = Q::add(Q::loadu(zim + i), Q::loadu(zim + i + doff));
        W C = Q::mul(Q::broadcast(4.0), Q::fma(cre, cre, Q::mul(cim, cim)));
        return neg_log_delta1_core<Q>(A, B, C);
    }

    static void dissim1_row(const double* S, const double* zre, const double* zim, const double* zabs,
                            std::ptrdiff_t doff, int n, double* out) {
        int i = 0;
        for (; i + P::width <= n; i += P::width)
            P::storeu(out + i, dissim1_at<P>(S, zre, zim, zabs, doff, i));
        for (; i < n; ++i) out[i] = dissim1_at<PT>(S, zre, zim, zabs, doff, i);
    }

    static void tap_sum_row(const double* src, std::ptrdiff_t step, int taps, int n, double* out) {
        int i = 0;
        for (; i + P::width <= n; i += P::width) {
            V acc = P::loadu(src + i);
            for (int t = 1; t < taps; ++t) acc = P::add(acc, P::loadu(src + i + t * step));
            P::storeu(out + i, acc);
        }
        for (; i < n; ++i) {
            double acc = src[i];
            for (int t = 1; t < taps; ++t) acc += src[i + t * step];
            out[i] = acc;
        }
    }

    template <class Q>
    static void delta2_at(const double* I, const double* invI, const double* gam, const double* v,
                          const double* cp, const double* sp, std::ptrdiff_t doff, int i,
                          double* alpha, double* betac, double* betas) {
        using W = typename Q::value;
        W Iq = Q::loadu(I + i), Id = Q::loadu(I + i + doff);
        W iq = Q::loadu(invI + i), id = Q::loadu(invI + i + doff);
        W vq = Q::loadu(v + i), vd = Q::loadu(v + i + doff);
        W al = Q::fma(Q::mul(Iq, id), vd, Q::mul(Q::mul(Id, iq), vq));
        W be = Q::mul(Q::mul(Q::loadu(gam + i), Q::loadu(gam + i + doff)), al);
        W cq = Q::loadu(cp + i), cd = Q::loadu(cp + i + doff);
        W sq = Q::loadu(sp + i), sd = Q::loadu(sp + i + doff);
        W cosd = Q::fma(cq, cd, Q::mul(sq, sd));   // cos(phi_q - phi_d)
        W sind = Q::fma(sq, cd, Q::neg(Q::mul(cq, sd)));
        Q::storeu(alpha + i, al);
        Q::storeu(betac + i, Q::mul(be, cosd));
        Q::storeu(betas + i, Q::mul(be, sind));
    }

    static void delta2_channels_row(const double* I, const double* invI, const double* gam,
                                    const double* v, const double* cp, const double* sp,
                                    std::ptrdiff_t doff, int n, double* alpha, double* betac,
                                    double* betas) {
        int i = 0;
        for (; i + P::width <= n; i += P::width)
            delta2_at<P>(I, invI, gam, v, cp, sp, doff, i, alpha, betac, betas);
        for (; i < n; ++i) delta2_at<PT>(I, invI, gam, v, cp, sp, doff, i, alpha, betac, betas);
    }

    // Four-lane reduction over one patch row of a single channel.
    template <class Q>
    static void row_lanes(const double* ch, const double* gr, int pcols, double lanes[4]) {
        if constexpr (Q::width == 4) {
            typename Q::value acc = Q::zero();
            for (int j = 0; j + 4 <= pcols; j += 4)
                acc = Q::fma(Q::loadu(gr + j), Q::loadu(ch + j), acc);
            Q::store_lanes(acc, lanes);
        } else {
            lanes[0] = lanes[1] = lanes[2] = lanes[3] = 0.0;
            for (int j = 0; j < pcols; ++j) lanes[j & 3] = std::fma(gr[j], ch[j], lanes[j & 3]);
        }
    }

    static double hsum4(const double lanes[4]) { return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]); }

    static void patch_sum3(const double* a, const double* bc, const double* bs, std::ptrdiff_t stride,
                           const double* ga, const double* gr, int prows, int pcols, double* out3) {
        double sa = 0.0, sbc = 0.0, sbs = 0.0;
        double lanes[4];
        for (int r = 0; r < prows; ++r) {
            const std::ptrdiff_t off = r * stride;
            row_lanes<P>(a + off, gr, pcols, lanes);
            sa = std::fma(ga[r], hsum4(lanes), sa);
            row_lanes<P>(bc + off, gr, pcols, lanes);
            sbc = std::fma(ga[r], hsum4(lanes), sbc);
            row_lanes<P>(bs + off, gr, pcols, lanes);
            sbs = std::fma(ga[r], hsum4(lanes), sbs);
        }
        out3[0] = sa;
        out3[1] = sbc;
        out3[2] = sbs;
    }

    static void accum_patch_row(const double* w, const double* const* src, int nch, int pcols, int n,
                                double* acc) {
        for (int x = 0; x < n; ++x) {
            const double wx = w[x];
            if (wx == 0.0) continue;
            double* ax = acc + (std::size_t(x) * std::size_t(nch)) * std::size_t(pcols);
            V wv = P::broadcast(wx);
            for (int c = 0; c < nch; ++c) {
                const double* s = src[c] + x;
                double* ac = ax + std::size_t(c) * std::size_t(pcols);
                int j = 0;
                for (; j + P::width <= pcols; j += P::width)
                    P::storeu(ac + j, P::fma(wv, P::loadu(s + j), P::loadu(ac + j)));
                for (; j < pcols; ++j) ac[j] = std::fma(wx, s[j], ac[j]);
            }
        }
    }

    template <class Q>
    static void moments_at(const double* w, const double* phi_d, const double* rho, const double* p1_d,
                           const double* p2_d, int i, double* Z, double* Q2, double* s1, double* s2,
                           double* m12, double* m11, double* m22) {
        using W = typename Q::value;
        W wv = Q::loadu(w + i);
        W d = Q::sub(Q::loadu(phi_d + i), Q::loadu(rho + i));
        d = Q::select(Q::gt(d, Q::broadcast(kPiK)), Q::sub(d, Q::broadcast(kTwoPiK)), d);
        d = Q::select(Q::le(d, Q::broadcast(-kPiK)), Q::add(d, Q::broadcast(kTwoPiK)), d);
        W p1 = Q::loadu(p1_d + i), p2 = Q::loadu(p2_d + i);
        Q::storeu(Z + i, Q::add(Q::loadu(Z + i), wv));
        Q::storeu(Q2 + i, Q::fma(wv, wv, Q::loadu(Q2 + i)));
        Q::storeu(s1 + i, Q::fma(wv, d, Q::loadu(s1 + i)));
        Q::storeu(s2 + i, Q::fma(Q::mul(wv, d), d, Q::loadu(s2 + i)));
        Q::storeu(m12 + i, Q::fma(Q::mul(wv, p1), p2, Q::loadu(m12 + i)));
        Q::storeu(m11 + i, Q::fma(Q::mul(wv, p1), p1, Q::loadu(m11 + i)));
        Q::storeu(m22 + i, Q::fma(Q::mul(wv, p2), p2, Q::loadu(m22 + i)));
    }

    static void stage1_moments_row(const double* w, const double* phi_d, const double* rho,
                                   const double* p1_d, const double* p2_d, int n, double* Z, double* Q2,
                                   double* s1, double* s2, double* m12, double* m11, double* m22) {
        int i = 0;
        for (; i + P::width <= n; i += P::width)
            moments_at<P>(w, phi_d, rho, p1_d, p2_d, i, Z, Q2, s1, s2, m12, m11, m22);
        for (; i < n; ++i) moments_at<PT>(w, phi_d, rho, p1_d, p2_d, i, Z, Q2, s1, s2, m12, m11, m22);
    }

    template <class Q>
    static void rotate2_at(const double* zre_d, const double* zim_d, const double* pa_re,
                           const double* pa_im, const double* pr_re, const double* pr_im, int i,
                           double* out_re, double* out_im) {
        using W = typename Q::value;
        W are = Q::loadu(pa_re + i), aim = Q::loadu(pa_im + i);
        W rre = Q::loadu(pr_re + i), rim = Q::loadu(pr_im + i);
        W prodre = Q::fma(are, rre, Q::neg(Q::mul(aim, rim)));
        W prodim = Q::fma(are, rim, Q::mul(aim, rre));
        W zr = Q::loadu(zre_d + i), zi = Q::loadu(zim_d + i);
        Q::storeu(out_re + i, Q::fma(zr, prodre, Q::neg(Q::mul(zi, prodim))));
        Q::storeu(out_im + i, Q::fma(zr, prodim, Q::mul(zi, prodre)));
    }

    static void rotate2_row(const double* zre_d, const double* zim_d, const double* pa_re,
                            const double* pa_im, const double* pr_re, const double* pr_im, int n,
                            double* out_re, double* out_im) {
        int i = 0;
        for (; i + P::width <= n; i += P::width)
            rotate2_at<P>(zre_d, zim_d, pa_re, pa_im, pr_re, pr_im, i, out_re, out_im);
        for (; i < n; ++i) rotate2_at<PT>(zre_d, zim_d, pa_re, pa_im, pr_re, pr_im, i, out_re, out_im);
    }

    static KernelTable table(const char* name) {
        KernelTable t{};
        t.name = name;
        t.exp_row = &exp_row;
        t.exp_neg_scaled_row = &exp_neg_scaled_row;
        t.log_row = &log_row;
        t.dissim1_row = &dissim1_row;
        t.tap_sum_row = &tap_sum_row;
        t.delta2_channels_row = &delta2_channels_row;
        t.patch_sum3 = &patch_sum3;
        t.accum_patch_row = &accum_patch_row;
        t.stage1_moments_row = &stage1_moments_row;
        t.rotate2_row = &rotate2_row;
        return t;
    }
};

}  // namespace nlswag::kernels

#endif

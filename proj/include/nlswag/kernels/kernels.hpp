// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_KERNELS_KERNELS_HPP
#define NLSWAG_KERNELS_KERNELS_HPP

#include <cstddef>
#include <string>

namespace nlswag::kernels {

// Inner-loop kernels of the filtering pipeline.  The scalar table is the
// reference; the AVX2 table must produce bit-identical results (enforced
// by the kernel equivalence tests).  Selection happens at runtime.
struct KernelTable {
    const char* name;

    // out[i] = exp(x[i])
    void (*exp_row)(const double* x, int n, double* out);
    // out[i] = exp(-s[i] * scale[i])
    void (*exp_neg_scaled_row)(const double* s, const double* scale, int n, double* out);
    // out[i] = log(x[i]),  x > 0
    void (*log_row)(const double* x, int n, double* out);

    // Stage-1 pixel dissimilarity: out[i] = -log delta1(q_i, q_{i+doff})
    // from per-pixel rasters S = |u1|^2 + |u2|^2, z = u1*conj(u2), |z|.
    void (*dissim1_row)(const double* S, const double* zre, const double* zim, const double* zabs,
                        std::ptrdiff_t doff, int n, double* out);

    // Sliding k-tap sums: out[i] = sum_{t < taps} src[i + t*step]
    void (*tap_sum_row)(const double* src, std::ptrdiff_t step, int taps, int n, double* out);

    // Stage-2 pairwise channel rasters for window offset doff:
    //   alpha = I_q/I_{q+d} * v_{q+d} + I_{q+d}/I_q * v_q          (v = 1/(1-gamma^2))
    //   betac = gamma_q * gamma_{q+d} * alpha * cos(phi_q - phi_{q+d})
    //   betas = gamma_q * gamma_{q+d} * alpha * sin(phi_q - phi_{q+d})
    void (*delta2_channels_row)(const double* I, const double* invI, const double* gam, const double* v,
                                const double* cp, const double* sp, std::ptrdiff_t doff, int n,
                                double* alpha, double* betac, double* betas);

    // Separable Gaussian-weighted patch sums for one center:
    //   out3[c] = sum_{r < prows} ga[r] * sum_{j < pcols} gr[j] * ch_c[r*stride + j]
    void (*patch_sum3)(const double* a, const double* bc, const double* bs, std::ptrdiff_t stride,
                       const double* ga, const double* gr, int prows, int pcols, double* out3);

    // Patch-row accumulation for a row of centers:
    //   for x < n, c < nch, j < pcols: acc[(x*nch + c)*pcols + j] += w[x] * src[c][x + j]
    void (*accum_patch_row)(const double* w, const double* const* src, int nch, int pcols, int n,
                            double* acc);

    // Stage-1 weighted moment accumulators for one window offset:
    //   Z += w, Q += w^2, s1 += w*wrapdiff(phi_d - rho), s2 += w*wrapdiff^2,
    //   m12 += w*p1_d*p2_d, m11 += w*p1_d^2, m22 += w*p2_d^2
    void (*stage1_moments_row)(const double* w, const double* phi_d, const double* rho,
                               const double* p1_d, const double* p2_d, int n, double* Z, double* Q,
                               double* s1, double* s2, double* m12, double* m11, double* m22);

    // Complex rotation row: out = (zre_d + j*zim_d) * (pa * pr)
    void (*rotate2_row)(const double* zre_d, const double* zim_d, const double* pa_re,
                        const double* pa_im, const double* pr_re, const double* pr_im, int n,
                        double* out_re, double* out_im);
};

enum class Variant { Auto, Scalar, Avx2 };

const KernelTable& scalar_kernels();
const KernelTable* avx2_kernels();  // nullptr when the CPU lacks AVX2/FMA

// Resolves Auto to the best available variant.
const KernelTable& select_kernels(Variant v);

Variant parse_variant(const std::string& name);  // "auto" | "scalar" | "avx2"
const char* variant_name(Variant v);

}  // namespace nlswag::kernels

#endif

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "nlswag/kernels/kernels.hpp"
#include "nlswag/kernels/pack_scalar.hpp"
#include "nlswag/kernels/vecmath.hpp"
#include "nlswag/rng.hpp"
#include "nlswag/similarity.hpp"

using namespace nlswag;
using namespace nlswag::kernels;

namespace {

std::vector<double> random_positive(int n, std::uint64_t seed, double lo, double hi) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto r = Philox4x32::block(seed, std::uint32_t(i), 0, 0, 0);
        v[static_cast<size_t>(i)] = lo + (hi - lo) * u01(r[0], r[1]);
    }
    return v;
}

std::vector<double> random_normal(int n, std::uint64_t seed) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = site_normals(seed, std::uint32_t(i), 0, 0, 0)[0];
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("vector math accuracy against libm") {
    SUBCASE("exp") {
        for (double x : random_normal(2000, 1)) {
            const double arg = x * 30.0;
            const double got = v_exp<PackScalar>(arg);
            const double ref = std::exp(arg);
            CHECK(std::abs(got - ref) <= 4e-15 * std::abs(ref));
        }
        CHECK(v_exp<PackScalar>(0.0) == 1.0);
        CHECK(v_exp<PackScalar>(-800.0) == 0.0);
        CHECK(v_exp<PackScalar>(-708.5) == 0.0);
        CHECK(std::isinf(v_exp<PackScalar>(800.0)));
    }
    SUBCASE("log") {
        for (double u : random_positive(2000, 2, 1e-12, 1e12)) {
            const double got = v_log<PackScalar>(u);
            const double ref = std::log(u);
            CHECK(std::abs(got - ref) <= 4e-15 * std::max(1.0, std::abs(ref)));
        }
        // near 1, absolute accuracy matters
        for (double e : {1e-10, 1e-6, 1e-3, 0.05}) {
            for (double s : {-1.0, 1.0}) {
                const double u = 1.0 + s * e;
                CHECK(std::abs(v_log<PackScalar>(u) - std::log(u)) <= 1e-16 + 4e-15 * std::abs(std::log(u)));
            }
        }
        CHECK(v_log<PackScalar>(1.0) == 0.0);
        // subnormal input
        const double sub = 1e-310;
        CHECK(std::abs(v_log<PackScalar>(sub) - std::log(sub)) <= 4e-13);
    }
    SUBCASE("asin") {
        for (int i = 0; i <= 2000; ++i) {
            const double u = double(i) / 2000.0;
            CHECK(std::abs(v_asin<PackScalar>(u) - std::asin(u)) <= 8e-16);
        }
        CHECK(v_asin<PackScalar>(0.0) == 0.0);
        CHECK(v_asin<PackScalar>(1.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    }
}

TEST_CASE("scalar and AVX2 kernel variants are bit-identical") {
    const KernelTable& S = scalar_kernels();
    const KernelTable* V = avx2_kernels();
    if (!V) {
        MESSAGE("AVX2 not available; skipping equivalence");
        return;
    }
    const int n = 1003;  // odd length exercises the remainder lanes

    SUBCASE("exp_row / log_row / exp_neg_scaled_row") {
        auto x = random_normal(n, 3);
        for (auto& v : x) v *= 50.0;
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
        S.exp_row(x.data(), n, a.data());
        V->exp_row(x.data(), n, b.data());
        CHECK(bit_equal(a, b));

        auto p = random_positive(n, 4, 1e-15, 1e15);
        S.log_row(p.data(), n, a.data());
        V->log_row(p.data(), n, b.data());
        CHECK(bit_equal(a, b));

        auto sarr = random_positive(n, 5, 0.0, 300.0);
        auto sc = random_positive(n, 6, 0.001, 3.0);
        S.exp_neg_scaled_row(sarr.data(), sc.data(), n, a.data());
        V->exp_neg_scaled_row(sarr.data(), sc.data(), n, b.data());
        CHECK(bit_equal(a, b));
    }

    SUBCASE("dissim1_row") {
        const int len = 500, doff = 37;
        auto zre = random_normal(len + doff + 8, 7);
        auto zim = random_normal(len + doff + 8, 8);
        std::vector<double> S_(static_cast<size_t>(len + doff + 8)), zabs(static_cast<size_t>(len + doff + 8));
        for (size_t i = 0; i < S_.size(); ++i) {
            zabs[i] = std::hypot(zre[i], zim[i]);
            S_[i] = zabs[i] * 2.0 + 0.1;  // any positive "sum of powers"
        }
        std::vector<double> a(static_cast<size_t>(len)), b(static_cast<size_t>(len));
        S.dissim1_row(S_.data(), zre.data(), zim.data(), zabs.data(), doff, len, a.data());
        V->dissim1_row(S_.data(), zre.data(), zim.data(), zabs.data(), doff, len, b.data());
        CHECK(bit_equal(a, b));
    }

    SUBCASE("tap_sum_row") {
        auto src = random_normal(n + 80, 9);
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
        S.tap_sum_row(src.data(), 7, 7, n, a.data());
        V->tap_sum_row(src.data(), 7, 7, n, b.data());
        CHECK(bit_equal(a, b));
        S.tap_sum_row(src.data(), 1, 5, n, a.data());
        V->tap_sum_row(src.data(), 1, 5, n, b.data());
        CHECK(bit_equal(a, b));
    }

    SUBCASE("delta2_channels_row") {
        const int len = 480, doff = 21;
        const int m = len + doff + 8;
        auto I = random_positive(m, 10, 0.2, 5.0);
        std::vector<double> invI(static_cast<size_t>(m)), gam(static_cast<size_t>(m)), v(static_cast<size_t>(m)), cp(static_cast<size_t>(m)), sp(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            invI[static_cast<size_t>(i)] = 1.0 / I[static_cast<size_t>(i)];
            auto r = Philox4x32::block(11, std::uint32_t(i), 0, 0, 0);
            gam[static_cast<size_t>(i)] = 0.999 * u01(r[0], r[1]);
            v[static_cast<size_t>(i)] = 1.0 / (1.0 - gam[static_cast<size_t>(i)] * gam[static_cast<size_t>(i)]);
            const double phi = kTwoPi * (u01(r[2], r[3]) - 0.5);
            cp[static_cast<size_t>(i)] = std::cos(phi);
            sp[static_cast<size_t>(i)] = std::sin(phi);
        }
        std::vector<double> a1(static_cast<size_t>(len)), a2(static_cast<size_t>(len)), a3(static_cast<size_t>(len));
        std::vector<double> b1(static_cast<size_t>(len)), b2(static_cast<size_t>(len)), b3(static_cast<size_t>(len));
        S.delta2_channels_row(I.data(), invI.data(), gam.data(), v.data(), cp.data(), sp.data(), doff,
                              len, a1.data(), a2.data(), a3.data());
        V->delta2_channels_row(I.data(), invI.data(), gam.data(), v.data(), cp.data(), sp.data(), doff,
                               len, b1.data(), b2.data(), b3.data());
        CHECK(bit_equal(a1, b1));
        CHECK(bit_equal(a2, b2));
        CHECK(bit_equal(a3, b3));
    }

    SUBCASE("patch_sum3 and accum_patch_row") {
        const int prows = 11, pcols = 12, stride = 40;
        auto a = random_normal(prows * stride + pcols, 12);
        auto bc = random_normal(prows * stride + pcols, 13);
        auto bs = random_normal(prows * stride + pcols, 14);
        auto ga = random_positive(prows, 15, 0.0, 1.0);
        auto gr = random_positive(pcols, 16, 0.0, 1.0);
        double s3a[3], s3b[3];
        S.patch_sum3(a.data(), bc.data(), bs.data(), stride, ga.data(), gr.data(), prows, pcols, s3a);
        V->patch_sum3(a.data(), bc.data(), bs.data(), stride, ga.data(), gr.data(), prows, pcols, s3b);
        CHECK(std::memcmp(s3a, s3b, sizeof s3a) == 0);

        const int nc = 257;
        auto w = random_positive(nc, 17, 0.0, 1.0);
        w[3] = 0.0;  // exercise the zero-weight skip
        auto s0 = random_normal(nc + pcols, 18);
        auto s1 = random_normal(nc + pcols, 19);
        const double* src[2] = {s0.data(), s1.data()};
        std::vector<double> accA(static_cast<size_t>(nc) * 2 * pcols, 0.5), accB(static_cast<size_t>(nc) * 2 * pcols, 0.5);
        // aligned slabs: copy into aligned buffers
        S.accum_patch_row(w.data(), src, 2, pcols, nc, accA.data());
        V->accum_patch_row(w.data(), src, 2, pcols, nc, accB.data());
        CHECK(bit_equal(accA, accB));
    }

    SUBCASE("stage1_moments_row and rotate2_row") {
        const int len = 311;
        auto w = random_positive(len, 20, 0.0, 1.0);
        auto phi = random_normal(len + 8, 21);
        auto rho = random_normal(len, 22);
        for (auto& x : phi) x = wrap_phase(x);
        for (auto& x : rho) x = wrap_phase(x);
        auto p1 = random_positive(len + 8, 23, 0.0, 4.0);
        auto p2 = random_positive(len + 8, 24, 0.0, 4.0);
        std::vector<double> Za(static_cast<size_t>(len), 0.1), Qa(static_cast<size_t>(len), 0.2), s1a(static_cast<size_t>(len), 0.0),
            s2a(static_cast<size_t>(len), 0.0), m12a(static_cast<size_t>(len), 0.0), m11a(static_cast<size_t>(len), 0.0), m22a(static_cast<size_t>(len), 0.0);
        auto Zb = Za, Qb = Qa, s1b = s1a, s2b = s2a, m12b = m12a, m11b = m11a, m22b = m22a;
        S.stage1_moments_row(w.data(), phi.data(), rho.data(), p1.data(), p2.data(), len, Za.data(),
                             Qa.data(), s1a.data(), s2a.data(), m12a.data(), m11a.data(), m22a.data());
        V->stage1_moments_row(w.data(), phi.data(), rho.data(), p1.data(), p2.data(), len, Zb.data(),
                              Qb.data(), s1b.data(), s2b.data(), m12b.data(), m11b.data(), m22b.data());
        CHECK(bit_equal(Za, Zb));
        CHECK(bit_equal(Qa, Qb));
        CHECK(bit_equal(s1a, s1b));
        CHECK(bit_equal(s2a, s2b));
        CHECK(bit_equal(m12a, m12b));
        CHECK(bit_equal(m11a, m11b));
        CHECK(bit_equal(m22a, m22b));

        auto zre = random_normal(len + 8, 25);
        auto zim = random_normal(len + 8, 26);
        auto are = random_normal(len, 27);
        auto aim = random_normal(len, 28);
        auto bre = random_normal(len, 29);
        auto bim = random_normal(len, 30);
        std::vector<double> ra(static_cast<size_t>(len)), ia(static_cast<size_t>(len)), rb(static_cast<size_t>(len)), ib(static_cast<size_t>(len));
        S.rotate2_row(zre.data(), zim.data(), are.data(), aim.data(), bre.data(), bim.data(), len,
                      ra.data(), ia.data());
        V->rotate2_row(zre.data(), zim.data(), are.data(), aim.data(), bre.data(), bim.data(), len,
                       rb.data(), ib.data());
        CHECK(bit_equal(ra, rb));
        CHECK(bit_equal(ia, ib));
    }
}

TEST_CASE("kernel semantics match the scalar operations") {
    const KernelTable& K = scalar_kernels();

    SUBCASE("dissim1_row equals neg_log_delta1") {
        const int len = 64, doff = 5;
        const int m = len + doff + 1;
        std::vector<cpx> u1(static_cast<size_t>(m)), u2(static_cast<size_t>(m));
        std::vector<double> S_(static_cast<size_t>(m)), zre(static_cast<size_t>(m)), zim(static_cast<size_t>(m)), zabs(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            auto n = site_normals(55, std::uint32_t(i), 0, 0, 0);
            u1[static_cast<size_t>(i)] = {n[0], n[1]};
            u2[static_cast<size_t>(i)] = {n[2], n[3]};
            const cpx z = u1[static_cast<size_t>(i)] * std::conj(u2[static_cast<size_t>(i)]);
            zre[static_cast<size_t>(i)] = z.real();
            zim[static_cast<size_t>(i)] = z.imag();
            zabs[static_cast<size_t>(i)] = std::abs(z);
            S_[static_cast<size_t>(i)] = std::norm(u1[static_cast<size_t>(i)]) + std::norm(u2[static_cast<size_t>(i)]);
        }
        std::vector<double> out(static_cast<size_t>(len));
        K.dissim1_row(S_.data(), zre.data(), zim.data(), zabs.data(), doff, len, out.data());
        for (int i = 0; i < len; ++i) {
            const double ref = neg_log_delta1(u1[static_cast<size_t>(i)], u2[static_cast<size_t>(i)], u1[static_cast<size_t>(i + doff)],
                                              u2[static_cast<size_t>(i + doff)]);
            CHECK(out[static_cast<size_t>(i)] == doctest::Approx(ref).epsilon(1e-12));
        }
    }

    SUBCASE("tap_sum_row equals direct sums") {
        auto src = random_normal(100, 56);
        std::vector<double> out(40);
        K.tap_sum_row(src.data(), 3, 5, 40, out.data());
        for (int i = 0; i < 40; ++i) {
            double ref = 0.0;
            for (int t = 0; t < 5; ++t) ref += src[static_cast<size_t>(i + 3 * t)];
            CHECK(out[static_cast<size_t>(i)] == doctest::Approx(ref).epsilon(1e-13));
        }
    }

    SUBCASE("patch_sum3 equals the separable weighted sum") {
        const int prows = 7, pcols = 8, stride = 21;
        auto a = random_normal(prows * stride + pcols, 57);
        auto ga = random_positive(prows, 58, 0.1, 1.0);
        auto gr = random_positive(pcols, 59, 0.1, 1.0);
        double s3[3];
        K.patch_sum3(a.data(), a.data(), a.data(), stride, ga.data(), gr.data(), prows, pcols, s3);
        double ref = 0.0;
        for (int r = 0; r < prows; ++r) {
            double row = 0.0;
            for (int j = 0; j < pcols; ++j) row += gr[static_cast<size_t>(j)] * a[static_cast<size_t>(r * stride + j)];
            ref += ga[static_cast<size_t>(r)] * row;
        }
        CHECK(s3[0] == doctest::Approx(ref).epsilon(1e-12));
        CHECK(s3[1] == doctest::Approx(ref).epsilon(1e-12));
    }

    SUBCASE("variant selection") {
        CHECK(parse_variant("scalar") == Variant::Scalar);
        CHECK(parse_variant("avx2") == Variant::Avx2);
        CHECK(parse_variant("auto") == Variant::Auto);
        CHECK_THROWS_AS(parse_variant("sse9"), ConfigError);
        CHECK(std::string(select_kernels(Variant::Scalar).name) == "scalar");
        if (avx2_kernels()) CHECK(std::string(select_kernels(Variant::Auto).name) == "avx2");
    }
}

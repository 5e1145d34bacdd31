// SPDX-License-Identifier: Apache-2.0

#include "nlswag/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlswag/kernels/vecmath.hpp"

namespace nlswag {
namespace {

constexpr double kEpsC = kernels::kEpsC;
constexpr double kCap = kernels::kDissimCap;
constexpr double kGammaClamp = 1.0 - 1e-9;

struct Quadratics {
    double A, B, C;
};

Quadratics delta1_quadratics(cpx u1x, cpx u2x, cpx u1y, cpx u2y) {
    const double p1x = std::norm(u1x), p2x = std::norm(u2x);
    const double p1y = std::norm(u1y), p2y = std::norm(u2y);
    const cpx zx = u1x * std::conj(u2x);
    const cpx zy = u1y * std::conj(u2y);
    const double sum = p1x + p2x + p1y + p2y;
    Quadratics q;
    q.A = sum * sum;
    q.B = std::abs(zx) * std::abs(zy);
    q.C = 4.0 * std::norm(zx + zy);
    return q;
}

// G(rho) = (1+rho)*sqrt(rho/(1-rho)) - asin(sqrt(rho)) on rho = C/A in
// (0, 1).  The direct form cancels as rho -> 0; below kGSwitch it is
// evaluated by its series rho^(3/2) * (4/3 + 4/5 rho + ...).
double g_bracket(double A, double C) {
    const double rho = C / A;
    if (rho < kernels::kGSwitch) {
        double s = kernels::vm::kGSeries[7];
        for (int k = 6; k >= 0; --k) s = s * rho + kernels::vm::kGSeries[size_t(k)];
        return rho * std::sqrt(rho) * s;
    }
    return (A + C) / A * std::sqrt(C / (A - C)) - std::asin(std::sqrt(rho));
}

}  // namespace

double GaussianWindow::g(int o_az, int o_r) const {
    const double d2 = double(o_az) * o_az + double(o_r) * o_r;
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

double GaussianWindow::mass() const {
    double m = 0.0;
    for (int oa = -half_width; oa <= half_width; ++oa)
        for (int orr = -half_width; orr <= half_width; ++orr) m += g(oa, orr);
    return m;
}

double delta1_pixel(cpx u1x, cpx u2x, cpx u1y, cpx u2y) {
    Quadratics q = delta1_quadratics(u1x, u2x, u1y, u2y);
    if (q.A <= 0.0) throw ValueError("delta1 undefined: all four amplitudes are zero");
    const double c = std::clamp(q.C, kEpsC, q.A * (1.0 - kEpsC));
    const double t = q.B / c;
    return std::sqrt(t * t * t) * g_bracket(q.A, c);
}

double neg_log_delta1(cpx u1x, cpx u2x, cpx u1y, cpx u2y) {
    Quadratics q = delta1_quadratics(u1x, u2x, u1y, u2y);
    if (q.A <= 0.0 || q.B <= 0.0) return kCap;
    const double c = std::clamp(q.C, kEpsC, q.A * (1.0 - kEpsC));
    const double t = q.B / c;
    const double nld = -(1.5 * std::log(t) + std::log(g_bracket(q.A, c)));
    return std::min(nld, kCap);
}

double delta2_pixel(double Ix, double gammax, double phix, double Iy, double gammay, double phiy) {
    if (!(Ix > 0.0) || !(Iy > 0.0)) throw ValueError("delta2 requires positive intensities");
    const double gx = std::min(gammax, kGammaClamp);
    const double gy = std::min(gammay, kGammaClamp);
    const double c = std::cos(phix - phiy);
    const double term_xy = Ix / Iy * (1.0 - gx * gy * c) / (1.0 - gy * gy);
    const double term_yx = Iy / Ix * (1.0 - gy * gx * c) / (1.0 - gx * gx);
    return 4.0 / kPi * (term_xy + term_yx - 2.0);
}

double patch_dissim_stage1(const SlcPair& pair, int xr, int xc, int yr, int yc,
                           const PatchGeometry& geom) {
    pair.require_consistent();
    const auto& m = pair.master;
    const auto& s = pair.slave;
    double sum = 0.0;
    int valid = 0;
    for (int oa = -geom.half_width; oa <= geom.half_width; ++oa) {
        for (int orr = -geom.half_width; orr <= geom.half_width; ++orr) {
            const int ar = xr + oa, ac = xc + orr;
            const int br = yr + oa, bc = yc + orr;
            if (!m.contains(ar, ac) || !m.contains(br, bc)) continue;
            sum += neg_log_delta1(m.at(ar, ac), s.at(ar, ac), m.at(br, bc), s.at(br, bc));
            ++valid;
        }
    }
    if (valid == 0) throw ValueError("patch dissimilarity: no valid offsets");
    return sum * (double(geom.count()) / double(valid));
}

double patch_dissim_stage2(const EstimateBundle& guide, int xr, int xc, int yr, int yc,
                           const GaussianWindow& win, const FringeField* fringe) {
    double num = 0.0, den = 0.0;
    double fr = 0.0, faz = 0.0;
    if (fringe) {
        fr = fringe->f_range.at(xr, xc);
        faz = fringe->f_azimuth.at(xr, xc);
    }
    const double shift = double(yr - xr) * faz + double(yc - xc) * fr;
    for (int oa = -win.half_width; oa <= win.half_width; ++oa) {
        for (int orr = -win.half_width; orr <= win.half_width; ++orr) {
            const int ar = xr + oa, ac = xc + orr;
            const int br = yr + oa, bc = yc + orr;
            if (!guide.phase.contains(ar, ac) || !guide.phase.contains(br, bc)) continue;
            const double g = win.g(oa, orr);
            const double phiy = guide.phase.at(br, bc) - shift;
            num += g * delta2_pixel(guide.intensity.at(ar, ac), guide.coherence.at(ar, ac),
                                    guide.phase.at(ar, ac), guide.intensity.at(br, bc),
                                    guide.coherence.at(br, bc), phiy);
            den += g;
        }
    }
    if (den <= 0.0) throw ValueError("patch dissimilarity: no valid offsets");
    return num / den;
}

std::vector<double> weights_from_dissim(std::span<const double> dissim, double h, double scale) {
    if (!(h > 0.0)) throw ValueError("kernel bandwidth h must be positive");
    if (!(scale > 0.0)) throw ValueError("kernel scale must be positive");
    std::vector<double> w(dissim.size(), 0.0);
    double total = 0.0;
    bool any = false;
    for (size_t i = 0; i < dissim.size(); ++i) {
        if (std::isfinite(dissim[i])) {
            any = true;
            w[i] = std::exp(-dissim[i] / (h * scale));
            total += w[i];
        }
    }
    if (!any) throw ValueError("weights_from_dissim: no finite dissimilarity");
    if (total > 0.0) {
        for (auto& x : w) x /= total;
    } else {
        // all weights underflowed; fall back to the minimum dissimilarity
        size_t best = 0;
        for (size_t i = 1; i < dissim.size(); ++i)
            if (dissim[i] < dissim[best]) best = i;
        w.assign(dissim.size(), 0.0);
        w[best] = 1.0;
    }
    return w;
}

}  // namespace nlswag

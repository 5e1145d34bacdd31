// SPDX-License-Identifier: Apache-2.0

#include "nlswag/adaptivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlswag/fft.hpp"

namespace nlswag {

double local_unwrap_reference(const RealRaster& phase, int r, int c) {
    double re = 0.0, im = 0.0;
    for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2; dc <= 2; ++dc) {
            if (!phase.contains(r + dr, c + dc)) continue;
            const double p = phase.at(r + dr, c + dc);
            re += std::cos(p);
            im += std::sin(p);
        }
    }
    return principal_arg(im, re);
}

std::vector<double> local_unwrap(const RealRaster& phase, int r, int c, int search_half) {
    if (search_half < 2) throw ValueError("local unwrapping needs a window of at least 5x5");
    const double rho = local_unwrap_reference(phase, r, c);
    const int side = 2 * search_half + 1;
    std::vector<double> out(size_t(side) * side, std::numeric_limits<double>::quiet_NaN());
    for (int dr = -search_half; dr <= search_half; ++dr)
        for (int dc = -search_half; dc <= search_half; ++dc) {
            if (!phase.contains(r + dr, c + dc)) continue;
            const double p = phase.at(r + dr, c + dc);
            out[size_t(dr + search_half) * side + size_t(dc + search_half)] =
                rho + wrap_phase(p - rho);
        }
    return out;
}

double weighted_phase_variance(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) throw ValueError("values/weights size mismatch");
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (!(wsum > 0.0)) throw ValueError("weights must have positive mass");
    double m1 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const double w = weights[i] / wsum;
        m1 += w * values[i];
        m2 += w * values[i] * values[i];
    }
    return std::max(0.0, m2 - m1 * m1);
}

double phase_pdf(double phi, double gamma) {
    const double b = gamma * std::cos(phi);
    const double one_m_b2 = 1.0 - b * b;
    return (1.0 - gamma * gamma) / (kTwoPi * one_m_b2) *
           (1.0 + b * std::acos(-b) / std::sqrt(one_m_b2));
}

namespace {

// sigma0^2(gamma) via composite Simpson on [0, pi] (the density is even).
double integrate_sigma0(double gamma) {
    constexpr int kIntervals = 8192;
    const double h = kPi / kIntervals;
    double acc = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
        const double phi = double(i) * h;
        const double f = phi * phi * phase_pdf(phi, gamma);
        const double wgt = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += wgt * f;
    }
    return 2.0 * acc * h / 3.0;
}

struct SigmaTable {
    static constexpr int kGrid = 1024;
    std::array<double, kGrid + 1> v;

    SigmaTable() {
        for (int i = 0; i < kGrid; ++i) v[size_t(i)] = integrate_sigma0(double(i) / kGrid);
        v[kGrid] = 0.0;  // noise-free limit
    }
};

const SigmaTable& sigma_table() {
    static const SigmaTable t;
    return t;
}

}  // namespace

double expected_phase_variance(double gamma) {
    if (!(gamma >= 0.0) || gamma >= 1.0) throw ValueError("coherence must lie in [0, 1)");
    const auto& tab = sigma_table();
    const double f = gamma * SigmaTable::kGrid;
    const int i = std::min(int(f), SigmaTable::kGrid - 1);
    const double frac = f - i;
    return tab.v[size_t(i)] * (1.0 - frac) + tab.v[size_t(i) + 1] * frac;
}

double moment_coherence(const SlcPair& pair, std::span<const double> weights, int r, int c,
                        int search_half, double* raw_ratio) {
    pair.require_consistent();
    const int side = 2 * search_half + 1;
    if (weights.size() != size_t(side) * size_t(side))
        throw ValueError("weight map size does not match the search window");
    double m12 = 0.0, m11 = 0.0, m22 = 0.0;
    for (int dr = -search_half; dr <= search_half; ++dr) {
        for (int dc = -search_half; dc <= search_half; ++dc) {
            const double w = weights[size_t(dr + search_half) * side + size_t(dc + search_half)];
            if (w == 0.0 || !pair.master.contains(r + dr, c + dc)) continue;
            const double p1 = std::norm(pair.master.at(r + dr, c + dc));
            const double p2 = std::norm(pair.slave.at(r + dr, c + dc));
            m12 += w * p1 * p2;
            m11 += w * p1 * p1;
            m22 += w * p2 * p2;
        }
    }
    const double den = std::sqrt(m11 * m22);
    const double ratio = den > 0.0 ? m12 / den : 0.5;
    if (raw_ratio) *raw_ratio = ratio;
    // Under the fully developed speckle model the ratio estimates
    // (1 + gamma^2)/2; invert for a consistent coherence estimate.
    return std::sqrt(std::clamp(2.0 * ratio - 1.0, 0.0, 1.0));
}

double heterogeneity_index(double var, double sigma0sq) {
    if (!(var >= 0.0) || !(sigma0sq >= 0.0)) throw ValueError("variances must be non-negative");
    if (var <= sigma0sq || var == 0.0) return 0.0;
    return (var - sigma0sq) / var;
}

double eta_to_sigma(double eta) { return 2.0 * (1.0 - eta) + 1.0; }

RealRaster gaussian_smooth(const RealRaster& src, double sigma) {
    if (!(sigma > 0.0)) throw ValueError("smoothing width must be positive");
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> k(size_t(radius) + 1);
    for (int i = 0; i <= radius; ++i) k[size_t(i)] = std::exp(-0.5 * double(i) * i / (sigma * sigma));

    const GridShape shape = src.shape();
    RealRaster tmp(shape, src.semantic());
    RealRaster out(shape, src.semantic());

    // horizontal pass
    for (int r = 0; r < shape.rows; ++r) {
        for (int c = 0; c < shape.cols; ++c) {
            double num = 0.0, den = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int cc = c + t;
                if (cc < 0 || cc >= shape.cols) continue;
                const double w = k[size_t(std::abs(t))];
                num += w * src.at(r, cc);
                den += w;
            }
            tmp.at(r, c) = num / den;
        }
    }
    // vertical pass
    for (int r = 0; r < shape.rows; ++r) {
        for (int c = 0; c < shape.cols; ++c) {
            double num = 0.0, den = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                const int rr = r + t;
                if (rr < 0 || rr >= shape.rows) continue;
                const double w = k[size_t(std::abs(t))];
                num += w * tmp.at(rr, c);
                den += w;
            }
            out.at(r, c) = num / den;
        }
    }
    return out;
}

FringeField estimate_fringe_field(const ComplexRaster& z, int block, int fft_size,
                                  double sigma_smooth) {
    if (block < 1 || fft_size < block) throw ValueError("need fft_size >= block >= 1");
    const GridShape shape = z.shape();
    Fft fft(fft_size);

    FringeField field{RealRaster(shape, Semantic::Frequency), RealRaster(shape, Semantic::Frequency)};

    std::vector<cpx> buf(size_t(fft_size) * fft_size);
    for (int br = 0; br < shape.rows; br += block) {
        for (int bc = 0; bc < shape.cols; bc += block) {
            std::fill(buf.begin(), buf.end(), cpx(0.0, 0.0));
            const int hr = std::min(block, shape.rows - br);
            const int hc = std::min(block, shape.cols - bc);
            for (int r = 0; r < hr; ++r)
                for (int c = 0; c < hc; ++c) buf[size_t(r) * fft_size + c] = z.at(br + r, bc + c);
            fft.forward2d(buf.data());

            // strict-greater scan keeps the first maximum, deterministically
            int best = 0;
            double best_mag = -1.0;
            for (int i = 0; i < fft_size * fft_size; ++i) {
                const double mag = std::norm(buf[size_t(i)]);
                if (mag > best_mag) {
                    best_mag = mag;
                    best = i;
                }
            }
            int k_az = best / fft_size;
            int k_r = best % fft_size;
            if (k_az >= fft_size / 2) k_az -= fft_size;
            if (k_r >= fft_size / 2) k_r -= fft_size;
            const double f_az = kTwoPi * double(k_az) / double(fft_size);
            const double f_r = kTwoPi * double(k_r) / double(fft_size);

            for (int r = 0; r < hr; ++r)
                for (int c = 0; c < hc; ++c) {
                    field.f_azimuth.at(br + r, bc + c) = f_az;
                    field.f_range.at(br + r, bc + c) = f_r;
                }
        }
    }

    field.f_azimuth = gaussian_smooth(field.f_azimuth, sigma_smooth);
    field.f_range = gaussian_smooth(field.f_range, sigma_smooth);
    return field;
}

}  // namespace nlswag

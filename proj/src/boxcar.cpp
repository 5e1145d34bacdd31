// SPDX-License-Identifier: Apache-2.0

#include "nlswag/boxcar.hpp"

#include <algorithm>
#include <cmath>

namespace nlswag {

EstimateBundle boxcar(const SlcPair& pair, int k) {
    if (k < 1 || k % 2 == 0) throw ConfigError("boxcar window size must be odd and >= 1");
    pair.require_consistent();
    const GridShape shape = pair.shape();
    const int half = k / 2;

    EstimateBundle out{RealRaster(shape, Semantic::Phase), RealRaster(shape, Semantic::Intensity),
                       RealRaster(shape, Semantic::Coherence), RealRaster(shape, Semantic::Enl)};

    // Column-wise running sums would be faster, but the direct window sum
    // keeps the summation order independent of the traversal.
    for (int r = 0; r < shape.rows; ++r) {
        const int r0 = std::max(0, r - half), r1 = std::min(shape.rows - 1, r + half);
        for (int c = 0; c < shape.cols; ++c) {
            const int c0 = std::max(0, c - half), c1 = std::min(shape.cols - 1, c + half);
            cpx zsum(0.0, 0.0);
            double p1 = 0.0, p2 = 0.0;
            int count = 0;
            for (int rr = r0; rr <= r1; ++rr) {
                for (int cc = c0; cc <= c1; ++cc) {
                    const cpx u1 = pair.master.at(rr, cc);
                    const cpx u2 = pair.slave.at(rr, cc);
                    zsum += u1 * std::conj(u2);
                    p1 += std::norm(u1);
                    p2 += std::norm(u2);
                    ++count;
                }
            }
            const double inv = 1.0 / double(count);
            const cpx zm = zsum * inv;
            const double m1 = p1 * inv, m2 = p2 * inv;
            out.phase.at(r, c) = principal_arg(zm.imag(), zm.real());
            out.intensity.at(r, c) = 0.5 * (m1 + m2);
            const double den = std::sqrt(m1 * m2);
            out.coherence.at(r, c) = den > 0.0 ? std::clamp(std::abs(zm) / den, 0.0, 1.0) : 0.0;
            out.enl.at(r, c) = double(count);
        }
    }
    return out;
}

}  // namespace nlswag

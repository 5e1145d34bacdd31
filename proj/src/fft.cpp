// SPDX-License-Identifier: Apache-2.0

#include "nlswag/fft.hpp"

#include <cmath>

namespace nlswag {

Fft::Fft(int n) : n_(n) {
    if (n < 1 || (n & (n - 1)) != 0) throw ValueError("FFT size must be a power of two");
    log2n_ = 0;
    while ((1 << log2n_) < n) ++log2n_;

    twiddle_.resize(size_t(n) / 2);
    for (int k = 0; k < n / 2; ++k)
        twiddle_[size_t(k)] = std::polar(1.0, -kTwoPi * double(k) / double(n));

    bitrev_.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < log2n_; ++b)
            if (i & (1 << b)) r |= 1 << (log2n_ - 1 - b);
        bitrev_[size_t(i)] = r;
    }
}

void Fft::forward(cpx* x) const {
    for (int i = 0; i < n_; ++i) {
        const int j = bitrev_[size_t(i)];
        if (j > i) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len >> 1;
        const int stride = n_ / len;
        for (int start = 0; start < n_; start += len) {
            for (int k = 0; k < half; ++k) {
                const cpx w = twiddle_[size_t(k * stride)];
                const cpx a = x[start + k];
                const cpx b = x[start + k + half] * w;
                x[start + k] = a + b;
                x[start + k + half] = a - b;
            }
        }
    }
}

void Fft::forward2d(cpx* data) const {
    std::vector<cpx> col(static_cast<size_t>(n_));
    for (int r = 0; r < n_; ++r) forward(data + size_t(r) * n_);
    for (int c = 0; c < n_; ++c) {
        for (int r = 0; r < n_; ++r) col[size_t(r)] = data[size_t(r) * n_ + c];
        forward(col.data());
        for (int r = 0; r < n_; ++r) data[size_t(r) * n_ + c] = col[size_t(r)];
    }
}

}  // namespace nlswag

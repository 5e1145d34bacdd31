// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_FFT_HPP
#define NLSWAG_FFT_HPP

#include <vector>

#include "nlswag/grid.hpp"

namespace nlswag {

// Iterative radix-2 FFT for power-of-two sizes.  Twiddle tables are
// precomputed per instance; results are deterministic.
class Fft {
  public:
    explicit Fft(int n);

    int size() const { return n_; }

    // In-place forward transform: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
    void forward(cpx* data) const;

    // In-place 2-D forward transform of an n x n row-major block.
    void forward2d(cpx* data) const;

  private:
    int n_;
    int log2n_;
    std::vector<cpx> twiddle_;
    std::vector<int> bitrev_;
};

}  // namespace nlswag

#endif

// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_FILTER_INTERNAL_HPP
#define NLSWAG_FILTER_INTERNAL_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nlswag/grid.hpp"

namespace nlswag::detail {

// Zero-filled guard band around every raster the kernels touch; wide
// enough for search_half + patch_half reach (10 + 5) plus one.
inline constexpr int kGuard = 16;

inline int round_up4(int x) { return (x + 3) & ~3; }

// Guarded, row-padded, 32-byte aligned raster of doubles.  Rows may be
// addressed in [-guard, rows+guard); guard content stays zero unless
// explicitly written.
class Field {
  public:
    Field() = default;
    Field(int rows, int cols, int guard = kGuard) { init(rows, cols, guard); }

    void init(int rows, int cols, int guard = kGuard) {
        rows_ = rows;
        cols_ = cols;
        guard_ = guard;
        stride_ = round_up4(cols + 2 * guard);
        buf_.assign(std::size_t(rows + 2 * guard) * std::size_t(stride_) + 4, 0.0);
        auto addr = reinterpret_cast<std::uintptr_t>(buf_.data());
        int shift = int((32 - (addr & 31)) & 31) / 8;
        origin_ = buf_.data() + shift + std::size_t(guard) * std::size_t(stride_) + std::size_t(guard);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::ptrdiff_t stride() const { return stride_; }

    double* row(int r) { return origin_ + std::ptrdiff_t(r) * stride_; }
    const double* row(int r) const { return origin_ + std::ptrdiff_t(r) * stride_; }
    double& at(int r, int c) { return row(r)[c]; }
    double at(int r, int c) const { return row(r)[c]; }

  private:
    int rows_ = 0, cols_ = 0, guard_ = 0;
    std::ptrdiff_t stride_ = 0;
    std::vector<double> buf_;
    double* origin_ = nullptr;
};

// 32-byte aligned scratch vector.
class AlignedVec {
  public:
    AlignedVec() = default;
    explicit AlignedVec(std::size_t n) { resize(n); }

    void resize(std::size_t n) {
        buf_.assign(n + 4, 0.0);
        auto addr = reinterpret_cast<std::uintptr_t>(buf_.data());
        int shift = int((32 - (addr & 31)) & 31) / 8;
        ptr_ = buf_.data() + shift;
        size_ = n;
    }
    void zero() { std::fill(buf_.begin(), buf_.end(), 0.0); }

    double* data() { return ptr_; }
    const double* data() const { return ptr_; }
    double& operator[](std::size_t i) { return ptr_[i]; }
    double operator[](std::size_t i) const { return ptr_[i]; }
    std::size_t size() const { return size_; }

  private:
    std::vector<double> buf_;
    double* ptr_ = nullptr;
    std::size_t size_ = 0;
};

struct Band {
    int lo;    // first row
    int rows;  // row count
};

inline std::vector<Band> make_bands(int rows, int target) {
    std::vector<Band> bands;
    for (int lo = 0; lo < rows; lo += target) bands.push_back({lo, std::min(target, rows - lo)});
    return bands;
}

// Valid-q rectangle for a window offset d: both q and q+d inside the raster.
struct Rect {
    int r0, r1, c0, c1;  // inclusive; empty when r0 > r1 or c0 > c1
    bool empty() const { return r0 > r1 || c0 > c1; }
};

inline Rect valid_rect(int rows, int cols, int daz, int dr) {
    Rect v;
    v.r0 = daz < 0 ? -daz : 0;
    v.r1 = (daz > 0 ? rows - 1 - daz : rows - 1);
    v.c0 = dr < 0 ? -dr : 0;
    v.c1 = (dr > 0 ? cols - 1 - dr : cols - 1);
    return v;
}

// Number of in-range offsets o in [-ph, ph] with x+o and x+o+d both valid.
inline int valid_tap_count(int x, int d, int n, int ph) {
    const int lo = std::max({-ph, -x, -x - d});
    const int hi = std::min({ph, n - 1 - x, n - 1 - x - d});
    return hi >= lo ? hi - lo + 1 : 0;
}

}  // namespace nlswag::detail

#endif

// SPDX-License-Identifier: Apache-2.0

#ifndef NLSWAG_GRID_HPP
#define NLSWAG_GRID_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nlswag/errors.hpp"

namespace nlswag {

using cpx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Row index = azimuth, column index = range, row-major storage.
struct GridShape {
    int rows = 0;
    int cols = 0;

    std::int64_t size() const { return std::int64_t(rows) * cols; }
    bool operator==(const GridShape&) const = default;
    bool valid() const { return rows >= 1 && cols >= 1; }
};

inline void require_valid(const GridShape& s) {
    if (!s.valid()) throw ValueError("grid shape must be at least 1x1");
}

inline void require_same_shape(const GridShape& a, const GridShape& b) {
    if (!(a == b))
        throw ShapeError("shape mismatch: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

// Principal value of a phase, mapped into (-pi, pi].
inline double wrap_phase(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

// atan2 with the -pi branch folded onto +pi so results lie in (-pi, pi].
inline double principal_arg(double im, double re) {
    double p = std::atan2(im, re);
    if (p <= -kPi) p = kPi;
    return p;
}

enum class Semantic {
    Phase,          // (-pi, pi]
    Intensity,      // >= 0
    Amplitude,      // >= 0 (intensity root)
    Coherence,      // [0, 1]
    Enl,            // >= 1
    Heterogeneity,  // [0, 1)
    Sigma,          // > 0
    Frequency,      // [-pi, pi] rad/pixel
    Generic,        // no range constraint
};

const char* semantic_name(Semantic s);
Semantic semantic_from_name(const std::string& name);

// Returns false if v violates the value range of semantic s.  A small
// tolerance absorbs float32 round-trips of boundary values such as pi.
bool semantic_allows(Semantic s, double v);

class ComplexRaster {
  public:
    ComplexRaster() = default;
    explicit ComplexRaster(GridShape shape, cpx fill = {0.0, 0.0})
        : shape_(shape), v_(static_cast<size_t>((require_valid(shape), shape.size())), fill) {}

    const GridShape& shape() const { return shape_; }
    int rows() const { return shape_.rows; }
    int cols() const { return shape_.cols; }

    cpx& at(int r, int c) { return v_[size_t(r) * shape_.cols + c]; }
    const cpx& at(int r, int c) const { return v_[size_t(r) * shape_.cols + c]; }
    bool contains(int r, int c) const { return r >= 0 && r < shape_.rows && c >= 0 && c < shape_.cols; }

    std::vector<cpx>& values() { return v_; }
    const std::vector<cpx>& values() const { return v_; }

  private:
    GridShape shape_;
    std::vector<cpx> v_;
};

class RealRaster {
  public:
    RealRaster() = default;
    RealRaster(GridShape shape, Semantic sem, double fill = 0.0)
        : shape_(shape), sem_(sem), v_(static_cast<size_t>((require_valid(shape), shape.size())), fill) {}

    const GridShape& shape() const { return shape_; }
    int rows() const { return shape_.rows; }
    int cols() const { return shape_.cols; }
    Semantic semantic() const { return sem_; }
    void set_semantic(Semantic s) { sem_ = s; }

    double& at(int r, int c) { return v_[size_t(r) * shape_.cols + c]; }
    const double& at(int r, int c) const { return v_[size_t(r) * shape_.cols + c]; }
    bool contains(int r, int c) const { return r >= 0 && r < shape_.rows && c >= 0 && c < shape_.cols; }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

  private:
    GridShape shape_;
    Semantic sem_ = Semantic::Generic;
    std::vector<double> v_;
};

// Two co-registered single-look complex images.
struct SlcPair {
    ComplexRaster master;
    ComplexRaster slave;

    const GridShape& shape() const { return master.shape(); }
    void require_consistent() const { require_same_shape(master.shape(), slave.shape()); }
};

// Filter output: phase, intensity, coherence and equivalent number of looks.
struct EstimateBundle {
    RealRaster phase;      // Semantic::Phase
    RealRaster intensity;  // Semantic::Intensity
    RealRaster coherence;  // Semantic::Coherence
    RealRaster enl;        // Semantic::Enl

    const GridShape& shape() const { return phase.shape(); }
};

// Per-pixel local fringe frequencies in range and azimuth (rad/pixel).
struct FringeField {
    RealRaster f_range;
    RealRaster f_azimuth;

    const GridShape& shape() const { return f_range.shape(); }
};

}  // namespace nlswag

#endif

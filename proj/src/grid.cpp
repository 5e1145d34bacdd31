// SPDX-License-Identifier: Apache-2.0

#include "nlswag/grid.hpp"

namespace nlswag {

const char* semantic_name(Semantic s) {
    switch (s) {
        case Semantic::Phase: return "phase";
        case Semantic::Intensity: return "intensity";
        case Semantic::Amplitude: return "amplitude";
        case Semantic::Coherence: return "coherence";
        case Semantic::Enl: return "enl";
        case Semantic::Heterogeneity: return "heterogeneity";
        case Semantic::Sigma: return "sigma";
        case Semantic::Frequency: return "frequency";
        case Semantic::Generic: return "generic";
    }
    return "generic";
}

Semantic semantic_from_name(const std::string& name) {
    if (name == "phase") return Semantic::Phase;
    if (name == "intensity") return Semantic::Intensity;
    if (name == "amplitude") return Semantic::Amplitude;
    if (name == "coherence") return Semantic::Coherence;
    if (name == "enl") return Semantic::Enl;
    if (name == "heterogeneity") return Semantic::Heterogeneity;
    if (name == "sigma") return Semantic::Sigma;
    if (name == "frequency") return Semantic::Frequency;
    if (name == "generic") return Semantic::Generic;
    throw FormatError("unknown raster semantic: " + name);
}

bool semantic_allows(Semantic s, double v) {
    // Tolerances absorb float32 rounding of boundary values (e.g. pi).
    constexpr double eps = 1e-5;
    switch (s) {
        case Semantic::Phase: return v > -kPi - eps && v <= kPi + eps;
        case Semantic::Intensity: return v >= -eps;
        case Semantic::Amplitude: return v >= -eps;
        case Semantic::Coherence: return v >= -eps && v <= 1.0 + eps;
        case Semantic::Enl: return v >= 1.0 - eps;
        case Semantic::Heterogeneity: return v >= -eps && v < 1.0;
        case Semantic::Sigma: return v > 0.0;
        case Semantic::Frequency: return v >= -kPi - eps && v <= kPi + eps;
        case Semantic::Generic: return true;
    }
    return true;
}

}  // namespace nlswag

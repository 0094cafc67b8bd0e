#pragma once

// Symmetric uniform frequency grid. Nodes xi_j = j*spacing for j in [-N, N],
// cell C_j = [xi_j - spacing/2, xi_j + spacing/2). The grid is exactly
// symmetric: xi_{-j} == -xi_j in floating point.

#include <stdexcept>

namespace specsim {

class FrequencyGrid {
public:
    FrequencyGrid(int half_width, double spacing)
        : half_width_(half_width), spacing_(spacing) {
        if (half_width <= 0) throw std::invalid_argument("FrequencyGrid: half_width must be positive");
        if (!(spacing > 0.0)) throw std::invalid_argument("FrequencyGrid: spacing must be positive");
    }

    int half_width() const { return half_width_; }
    double spacing() const { return spacing_; }
    int size() const { return 2 * half_width_ + 1; }

    // signed index j in [-N, N]
    double node(int j) const { return j * spacing_; }
    double cell_lo(int j) const { return (j - 0.5) * spacing_; }
    double cell_hi(int j) const { return (j + 0.5) * spacing_; }

    // linear storage index for signed j
    int index_of(int j) const { return j + half_width_; }
    int signed_index(int idx) const { return idx - half_width_; }
    double node_at(int idx) const { return node(signed_index(idx)); }

    // half-length of the covered interval [-(N+1/2)s, (N+1/2)s)
    double extent() const { return (half_width_ + 0.5) * spacing_; }

    // grid mapped by xi -> r*xi (cells scale with it)
    FrequencyGrid scaled(double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("FrequencyGrid::scaled: r must be positive");
        return FrequencyGrid(half_width_, spacing_ * r);
    }

    friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
        return a.half_width_ == b.half_width_ && a.spacing_ == b.spacing_;
    }

private:
    int half_width_;
    double spacing_;
};

} // namespace specsim

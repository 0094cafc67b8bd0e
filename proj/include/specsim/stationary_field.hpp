#pragma once

// Broad-sense stationary generalised random fields eta(phi) = integral F phi dZ
// over a discretised measure, their regular pointwise counterparts
// eta(x) = integral e^{i x xi} dZ (finite sigma only), and the discretised
// H_sigma norm  |phi|^2 = integral |F phi|^2 dsigma + integral phi^2 dx.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "specsim/random_measure.hpp"

namespace specsim {

class StationaryField {
public:
    StationaryField(SpectralDensity density, FrequencyGrid grid)
        : density_(std::move(density)), grid_(grid), masses_(cell_masses(density_, grid_)) {}

    const SpectralDensity& density() const { return density_; }
    const FrequencyGrid& grid() const { return grid_; }
    const std::vector<double>& masses() const { return masses_; }

    DiscretizedRandomMeasure sample(std::uint64_t seed, std::uint64_t replicate) const {
        return sample_measure(masses_, grid_, seed, replicate);
    }

    void attach_sample(std::uint64_t seed, std::uint64_t replicate) {
        measure_ = sample(seed, replicate);
    }
    bool has_sample() const { return measure_.has_value(); }
    const DiscretizedRandomMeasure& measure() const {
        if (!measure_) throw std::logic_error("StationaryField: no sampled measure attached");
        return *measure_;
    }

private:
    SpectralDensity density_;
    FrequencyGrid grid_;
    std::vector<double> masses_;
    std::optional<DiscretizedRandomMeasure> measure_;
};

// One sample of eta(phi) = sum_j F phi(xi_j) Z_j; real for real phi by the
// Hermitian symmetry of the increments.
inline double evaluate(const DiscretizedRandomMeasure& measure, const TestFunction& phi) {
    return integrate(measure, [&](double xi) { return phi.fourier(xi); }).real();
}

inline double evaluate(const StationaryField& field, const TestFunction& phi) {
    return evaluate(field.measure(), phi);
}

// Regular representation eta(x) = sum_j e^{i x xi_j} Z_j; requires a finite
// spectral measure.
inline double evaluate_regular(const DiscretizedRandomMeasure& measure, double x) {
    return integrate(measure, [&](double xi) { return std::polar(1.0, x * xi); }).real();
}

inline double evaluate_regular(const StationaryField& field, double x) {
    if (!field.density().integrable)
        throw std::domain_error(
            "evaluate_regular: spectral measure is not finite; no regular representation");
    return evaluate_regular(field.measure(), x);
}

// Evaluate the regular field on many points of a uniform lattice with one
// phasor recurrence per frequency node.
inline void evaluate_regular_lattice(const DiscretizedRandomMeasure& measure, double x0, double dx,
                                     std::span<double> out) {
    const int n = measure.grid.half_width();
    for (auto& v : out) v = 0.0;
    for (int j = -n; j <= n; ++j) {
        const cplx z = measure.increment(j);
        if (z == cplx{0.0, 0.0}) continue;
        const double xi = measure.grid.node(j);
        cplx phase = std::polar(1.0, x0 * xi);
        const cplx step = std::polar(1.0, dx * xi);
        for (std::size_t m = 0; m < out.size(); ++m) {
            out[m] += (z * phase).real();
            phase *= step;
        }
    }
}

// Discretised H_sigma squared norm.
inline double h_norm_squared(const SpectralDensity& density, const FrequencyGrid& grid,
                             const TestFunction& phi) {
    const double spectral =
        covariance_oracle(density, grid, phi, phi).real();
    return spectral + phi.l2_inner(phi);
}

inline double h_norm(const SpectralDensity& density, const FrequencyGrid& grid,
                     const TestFunction& phi) {
    const double sq = h_norm_squared(density, grid, phi);
    return sq <= 0.0 ? 0.0 : std::sqrt(sq);
}

} // namespace specsim

#pragma once

// Spectral densities f of tempered spectral measures sigma = f dxi, with the
// origin behaviour f(xi)|xi|^k -> C_k tracked explicitly, and the cell
// quadrature that discretises sigma over a FrequencyGrid.
//
// Regular cells use the midpoint value f(xi_j) * spacing: for smooth rapidly
// decaying integrands the resulting node sums are trapezoid-on-the-line sums
// and converge far beyond second order. The cell containing the origin
// integrates the |xi|^{-k} part in closed form,
//   integral_{|xi|<h/2} C_k |xi|^{-k} dxi = 2 C_k (h/2)^{1-k} / (1-k),
// and the remainder f - C_k|xi|^{-k} by a refined midpoint rule.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "specsim/grid.hpp"
#include "specsim/quadrature.hpp"
#include "specsim/statistics.hpp"

namespace specsim {

struct SpectralDensity {
    std::function<double(double)> f;
    double origin_exponent = 0.0;  // k in [0,1): f(xi) ~ origin_constant * |xi|^{-k} as xi -> 0
    double origin_constant = 0.0;  // C_k (for k == 0 the finite value f(0))
    bool integrable = true;

    double operator()(double xi) const { return f(xi); }
};

// sigma = Lebesgue; the measure of the Gaussian white noise. Not finite.
inline SpectralDensity white_noise_density() {
    return {[](double) { return 1.0; }, 0.0, 1.0, false};
}

// f(xi) = c |xi|^{-k}; self-similar, not integrable at infinity for k < 1.
inline SpectralDensity power_law_density(double k, double c = 1.0) {
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("power_law_density: k must be in [0,1)");
    return {[k, c](double xi) { return c * std::pow(std::abs(xi), -k); }, k, c, false};
}

// f(xi) = |xi|^{-k} e^{-xi^2}; integrable with origin constant 1.
inline SpectralDensity tempered_power_law_density(double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw std::invalid_argument("tempered_power_law_density: k must be in [0,1)");
    return {[k](double xi) { return std::pow(std::abs(xi), -k) * std::exp(-xi * xi); }, k, 1.0, true};
}

// f(xi) = (1/sqrt(2 pi)) e^{-xi^2/2}; covariance R(x) = e^{-x^2/2}, unit variance.
inline SpectralDensity gaussian_density() {
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return {[c](double xi) { return c * std::exp(-0.5 * xi * xi); }, 0.0, c, true};
}

// Density of prefactor * nu_r Z for Z with density f: prefactor^2 * r * f(r xi).
inline SpectralDensity scale_measure_density(const SpectralDensity& d, double r, double prefactor) {
    if (!(r > 0.0)) throw std::invalid_argument("scale_measure_density: r must be positive");
    const double amp = prefactor * prefactor * r;
    const auto base = d.f;
    SpectralDensity out;
    out.f = [base, r, amp](double xi) { return amp * base(r * xi); };
    out.origin_exponent = d.origin_exponent;
    out.origin_constant = d.origin_constant * prefactor * prefactor * std::pow(r, 1.0 - d.origin_exponent);
    out.integrable = d.integrable;
    return out;
}

// Cell masses sigma(C_j) for all cells of the grid. singular_constant is the
// C_k of the |xi|^{-k} origin part; ignored when singular_exponent == 0.
inline std::vector<double> cell_quadrature(const std::function<double(double)>& f,
                                           const FrequencyGrid& grid, double singular_exponent,
                                           double singular_constant = 0.0) {
    const double k = singular_exponent;
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("cell_quadrature: exponent must be in [0,1)");
    const int n = grid.half_width();
    const double h = grid.spacing();
    std::vector<double> masses(static_cast<std::size_t>(grid.size()), 0.0);
    for (int j = -n; j <= n; ++j) {
        double m;
        if (j == 0 && k > 0.0) {
            const double half = 0.5 * h;
            m = 2.0 * singular_constant * std::pow(half, 1.0 - k) / (1.0 - k);
            // remainder f - C_k |xi|^{-k} is integrable and vanishes at 0
            const auto rem = [&](double xi) {
                return f(xi) - singular_constant * std::pow(std::abs(xi), -k);
            };
            m += integrate_midpoint(rem, -half, half, 64);
        } else if (k > 0.0 && std::abs(j) <= 16) {
            // cells near the singularity: refined midpoint against the strong
            // curvature of |xi|^{-k}
            const int sub = std::abs(j) <= 4 ? 64 : 16;
            m = integrate_midpoint(f, grid.cell_lo(j), grid.cell_hi(j), sub);
            if (m < 0.0) throw std::domain_error("cell_quadrature: negative density sample");
        } else {
            const double v = f(grid.node(j));
            if (v < 0.0) throw std::domain_error("cell_quadrature: negative density sample");
            if (!std::isfinite(v)) throw std::domain_error("cell_quadrature: non-finite density sample");
            m = v * h;
        }
        if (!std::isfinite(m)) throw std::domain_error("cell_quadrature: non-finite cell mass");
        masses[static_cast<std::size_t>(grid.index_of(j))] = m;
    }
    return masses;
}

inline std::vector<double> cell_masses(const SpectralDensity& d, const FrequencyGrid& grid) {
    return cell_quadrature(d.f, grid, d.origin_exponent, d.origin_constant);
}

inline double total_mass(const std::vector<double>& masses) {
    NeumaierSum s;
    for (double m : masses) s.add(m);
    return s.value();
}

} // namespace specsim

#pragma once

// Discretised orthogonal random measures. One sample holds complex Gaussian
// cell increments Z_j with E Z_j = 0, E|Z_j|^2 = sigma(C_j), Hermitian
// symmetry Z_{-j} = conj(Z_j), and Z_0 real. Increments for distinct cells are
// independent. Sampling is a pure function of (seed, replicate).

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "specsim/grid.hpp"
#include "specsim/rng.hpp"
#include "specsim/spectral_density.hpp"
#include "specsim/statistics.hpp"
#include "specsim/test_function.hpp"

namespace specsim {

struct DiscretizedRandomMeasure {
    FrequencyGrid grid;
    std::vector<double> masses;       // sigma(C_j), linear index j + N
    std::vector<cplx> increments;     // Z_j, same indexing
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    const cplx& increment(int j) const {
        return increments[static_cast<std::size_t>(grid.index_of(j))];
    }
    double mass(int j) const { return masses[static_cast<std::size_t>(grid.index_of(j))]; }
};

// Sample from precomputed cell masses. For j > 0,
//   Z_j = sqrt(sigma(C_j)/2) (A_j + i B_j),  Z_0 = sqrt(sigma(C_0)) A_0,
// with independent standard Gaussians drawn from the (seed, replicate, j)
// counter stream; Z_{-j} is the mirror conjugate.
inline DiscretizedRandomMeasure sample_measure(std::vector<double> masses, const FrequencyGrid& grid,
                                               std::uint64_t seed, std::uint64_t replicate) {
    if (masses.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("sample_measure: mass vector does not match grid");
    for (double m : masses)
        if (!std::isfinite(m)) throw std::domain_error("sample_measure: non-finite cell mass");
    DiscretizedRandomMeasure out{grid, std::move(masses), {}, seed, replicate};
    out.increments.assign(static_cast<std::size_t>(grid.size()), cplx{0.0, 0.0});
    const CounterRng rng(seed, rng_domain::measure);
    const int n = grid.half_width();
    {
        const double a0 = rng.normal_pair(replicate, 0).first;
        out.increments[static_cast<std::size_t>(grid.index_of(0))] =
            cplx{std::sqrt(out.mass(0)) * a0, 0.0};
    }
    for (int j = 1; j <= n; ++j) {
        const auto [a, b] = rng.normal_pair(replicate, static_cast<std::uint64_t>(j));
        const double s = std::sqrt(0.5 * out.mass(j));
        const cplx z{s * a, s * b};
        out.increments[static_cast<std::size_t>(grid.index_of(j))] = z;
        out.increments[static_cast<std::size_t>(grid.index_of(-j))] = std::conj(z);
    }
    return out;
}

inline DiscretizedRandomMeasure sample_measure(const SpectralDensity& density,
                                               const FrequencyGrid& grid, std::uint64_t seed,
                                               std::uint64_t replicate) {
    return sample_measure(cell_masses(density, grid), grid, seed, replicate);
}

// One sample of integral g dZ = sum_j g(xi_j) Z_j.
inline cplx integrate(const DiscretizedRandomMeasure& measure,
                      const std::function<cplx(double)>& g) {
    const int n = measure.grid.half_width();
    cplx acc{0.0, 0.0};
    for (int j = -n; j <= n; ++j) acc += g(measure.grid.node(j)) * measure.increment(j);
    return acc;
}

inline cplx integrate(const DiscretizedRandomMeasure& measure, std::span<const cplx> node_values) {
    if (node_values.size() != measure.increments.size())
        throw std::invalid_argument("integrate: node values do not match grid");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < node_values.size(); ++i)
        acc += node_values[i] * measure.increments[i];
    return acc;
}

// Deterministic value of E (integral g dZ)(conj integral h dZ)
//   = sum_j g(xi_j) conj(h(xi_j)) sigma(C_j).
inline cplx covariance_oracle(const std::vector<double>& masses, const FrequencyGrid& grid,
                              const std::function<cplx(double)>& g,
                              const std::function<cplx(double)>& h) {
    if (masses.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("covariance_oracle: mass vector does not match grid");
    const int n = grid.half_width();
    NeumaierSum re, im;
    for (int j = -n; j <= n; ++j) {
        const double xi = grid.node(j);
        const cplx v = g(xi) * std::conj(h(xi)) * masses[static_cast<std::size_t>(grid.index_of(j))];
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

inline cplx covariance_oracle(const SpectralDensity& density, const FrequencyGrid& grid,
                              const std::function<cplx(double)>& g,
                              const std::function<cplx(double)>& h) {
    return covariance_oracle(cell_masses(density, grid), grid, g, h);
}

inline cplx covariance_oracle(const SpectralDensity& density, const FrequencyGrid& grid,
                              const TestFunction& phi, const TestFunction& psi) {
    return covariance_oracle(density, grid, [&](double xi) { return phi.fourier(xi); },
                             [&](double xi) { return psi.fourier(xi); });
}

} // namespace specsim

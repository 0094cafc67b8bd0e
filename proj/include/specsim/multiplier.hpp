#pragma once

// Fourier multiplier symbols p with Re p <= 0 and the semigroups e^{t p} they
// generate. The evolution acts on test functions through the adjoint symbol:
//   e^{tL} eta (phi) = eta(e^{tL*} phi),   F(e^{tL*} phi) = e^{t conj p} F phi,
// so every solution statistic reduces to weighted spectral sums.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specsim/stationary_field.hpp"
#include "specsim/test_function.hpp"

namespace specsim {

struct MultiplierSymbol {
    std::function<cplx(double)> p;
    bool hermitian = true;   // p(-xi) = conj(p(xi)); operator maps real to real
    std::string name;

    cplx operator()(double xi) const { return p(xi); }
};

inline MultiplierSymbol heat_symbol() {
    return {[](double xi) { return cplx{-xi * xi, 0.0}; }, true, "heat"};
}

// p(xi) = -c |xi|^{2s}; the fractional Laplacian -c(-Laplacian)^s.
inline MultiplierSymbol fractional_laplacian_symbol(double c, double s) {
    if (!(c > 0.0) || !(s > 0.0))
        throw std::invalid_argument("fractional_laplacian_symbol: c and s must be positive");
    return {[c, s](double xi) { return cplx{-c * std::pow(std::abs(xi), 2.0 * s), 0.0}; }, true,
            "fractional"};
}

// Bounded dissipative symbol p(xi) = -xi^2/(1+xi^2).
inline MultiplierSymbol bounded_relaxation_symbol() {
    return {[](double xi) { return cplx{-xi * xi / (1.0 + xi * xi), 0.0}; }, true, "bounded"};
}

inline MultiplierSymbol zero_symbol() {
    return {[](double) { return cplx{0.0, 0.0}; }, true, "zero"};
}

// q(xi) = q1 |xi|^e with q1 <= 0 (fitted limit symbols).
inline MultiplierSymbol power_law_symbol(double q1, double exponent) {
    return {[q1, exponent](double xi) { return cplx{q1 * std::pow(std::abs(xi), exponent), 0.0}; },
            true, "power-law"};
}

// |e^{t p}| <= 1 on the grid: the admissibility surrogate.
inline bool dissipative_on_grid(const MultiplierSymbol& symbol, const FrequencyGrid& grid) {
    for (int j = -grid.half_width(); j <= grid.half_width(); ++j)
        if (symbol(grid.node(j)).real() > 0.0) return false;
    return true;
}

// Semigroup weight applied to test-function transforms.
inline cplx semigroup_weight(const MultiplierSymbol& symbol, double t, double xi) {
    return std::exp(t * std::conj(symbol(xi)));
}

// Fourier-side action: g -> e^{t conj p} g. The semigroup law
// apply(t1 + t2) = apply(t1) o apply(t2) holds by the exponential law.
inline std::function<cplx(double)> apply_semigroup(const MultiplierSymbol& symbol, double t,
                                                   std::function<cplx(double)> g) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be nonnegative");
    return [symbol, t, g = std::move(g)](double xi) { return semigroup_weight(symbol, t, xi) * g(xi); };
}

// Semigroup solution u(t) = e^{tL} eta_0 over a shared initial sample.
struct SolutionField {
    StationaryField initial;
    MultiplierSymbol symbol;
};

// One sample of u(t)(phi) = sum_j e^{t conj p(xi_j)} F phi(xi_j) Z_j.
inline double solution_sample(const SolutionField& sol, double t, const TestFunction& phi) {
    if (t < 0.0) throw std::invalid_argument("solution_sample: t must be nonnegative");
    const auto& measure = sol.initial.measure();
    return integrate(measure, [&](double xi) {
               return semigroup_weight(sol.symbol, t, xi) * phi.fourier(xi);
           }).real();
}

// Exact second moment E u(t)(phi) u(s)(psi)
//   = sum_j e^{t conj p} F phi conj(e^{s conj p} F psi)(xi_j) sigma(C_j).
inline double solution_covariance(const SpectralDensity& density, const FrequencyGrid& grid,
                                  const MultiplierSymbol& symbol, double t, double s,
                                  const TestFunction& phi, const TestFunction& psi) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("solution_covariance: times must be nonnegative");
    return covariance_oracle(
               cell_masses(density, grid), grid,
               [&](double xi) { return semigroup_weight(symbol, t, xi) * phi.fourier(xi); },
               [&](double xi) { return semigroup_weight(symbol, s, xi) * psi.fourier(xi); })
        .real();
}

inline double solution_covariance(const SolutionField& sol, double t, double s,
                                  const TestFunction& phi, const TestFunction& psi) {
    return solution_covariance(sol.initial.density(), sol.initial.grid(), sol.symbol, t, s, phi, psi);
}

// Weak-solution residual of the test pair (B psi, psi(0)) with B = d/dt + L*.
// For psi(t,x) = a(t) phi(x) the exact spectral residual per frequency is
//   r(xi) = [ integral_0^T e^{t conj p(xi)} (a'(t) + conj p(xi) a(t)) dt + a(0) ] F phi(xi),
// which vanishes identically since the integrand is d/dt (e^{t conj p} a).
// The time integral is a trapezoid sum with the given step, so the returned
// weighted energy sum_j |r(xi_j)|^2 sigma(C_j) is quadrature-limited.
inline double weak_residual(const MultiplierSymbol& symbol, const TimeTestFunction& psi,
                            const SpectralDensity& density, const FrequencyGrid& grid,
                            double time_step) {
    if (!(time_step > 0.0)) throw std::invalid_argument("weak_residual: time step must be positive");
    const double t_end = psi.support_end();
    int steps = static_cast<int>(std::ceil(t_end / time_step));
    if (steps < 2) steps = 2;
    const double dt = t_end / steps;
    const auto masses = cell_masses(density, grid);
    const TestFunction& phi = psi.space_part();
    NeumaierSum energy;
    for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
        const double xi = grid.node(j);
        const cplx pbar = std::conj(symbol(xi));
        cplx integral{0.0, 0.0};
        for (int i = 0; i <= steps; ++i) {
            const double t = i * dt;
            const cplx term = std::exp(t * pbar) * (psi.amplitude_dt(t) + pbar * psi.amplitude(t));
            integral += (i == 0 || i == steps) ? 0.5 * term : term;
        }
        integral *= dt;
        const cplx r = (integral + psi.amplitude(0.0)) * phi.fourier(xi);
        energy.add(std::norm(r) * masses[static_cast<std::size_t>(grid.index_of(j))]);
    }
    return energy.value();
}

} // namespace specsim

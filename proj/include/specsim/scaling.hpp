#pragma once

// Scaling transforms nu_r and the deterministic verification of the scaling
// limit hypotheses: L^2 distances between rescaled and limit measures, the
// semigroup hypothesis distance, rescaled and limit solution covariances, and
// pointwise identification of limit symbols q(x) = lim T p(T^alpha x).

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specsim/multiplier.hpp"
#include "specsim/quadrature.hpp"
#include "specsim/random_measure.hpp"

namespace specsim {

struct ScalingExponents {
    double alpha = 0.0;  // measure/space scaling
    double beta = 0.0;   // test-function scaling
    double gamma = 0.0;  // amplitude normalisation
    double T = 1.0;      // scale parameter
};

// nu_r Z realised on the mapped grid: cells C'_j = C_j / r carry the same
// increments and masses, so integral F phi d(nu_r Z) = sum F phi(xi_j / r) Z_j.
inline DiscretizedRandomMeasure map_measure(const DiscretizedRandomMeasure& measure, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("map_measure: r must be positive");
    DiscretizedRandomMeasure out = measure;
    out.grid = measure.grid.scaled(1.0 / r);
    return out;
}

// E |T^gamma nu_{T^alpha} Z_0(A) - Z(A)|^2 for Z_0, Z coupled on one white
// noise: integral_A (T^{gamma + alpha/2} sqrt(f(T^alpha x)) - sqrt(f_inf(x)))^2 dx.
inline double measure_scaling_distance(const SpectralDensity& f, const SpectralDensity& f_inf,
                                       const ScalingExponents& e, double a, double b) {
    const double r = std::pow(e.T, e.alpha);
    const double amp = std::pow(e.T, e.gamma + 0.5 * e.alpha);
    const auto integrand = [&](double x) {
        const double d = amp * std::sqrt(f(r * x)) - std::sqrt(f_inf(x));
        return d * d;
    };
    const double k = std::max(f.origin_exponent, f_inf.origin_exponent);
    return integrate_power_singular(integrand, a, b, k);
}

// T^{2 gamma} integral |F(e^{tTL} nu_{T^beta} phi) - F(nu_{T^alpha} e^{tQ*} phi)|^2 dsigma_0,
// evaluated after the substitution xi = T^alpha u:
//   T^{2 gamma + alpha} integral |e^{tT conj p(T^alpha u)} F phi(T^{alpha-beta} u)
//                                 - e^{t conj q(u)} F phi(u)|^2 f(T^alpha u) du.
inline double semigroup_scaling_distance(const MultiplierSymbol& p, const MultiplierSymbol& q,
                                         const TestFunction& phi, double t,
                                         const ScalingExponents& e, const SpectralDensity& f,
                                         double domain_half_width = 40.0) {
    if (t < 0.0) throw std::invalid_argument("semigroup_scaling_distance: t must be nonnegative");
    const double r = std::pow(e.T, e.alpha);
    const double cross = std::pow(e.T, e.alpha - e.beta);
    const double pref = std::pow(e.T, 2.0 * e.gamma + e.alpha);
    const auto integrand = [&](double u) {
        const cplx lhs = std::exp(t * e.T * std::conj(p(r * u))) * phi.fourier(cross * u);
        const cplx rhs = std::exp(t * std::conj(q(u))) * phi.fourier(u);
        return std::norm(lhs - rhs) * f(r * u);
    };
    return pref * integrate_power_singular(integrand, -domain_half_width, domain_half_width,
                                           f.origin_exponent);
}

struct ScalingScenario {
    SpectralDensity initial_density;
    MultiplierSymbol symbol;
    SpectralDensity limit_density;
    MultiplierSymbol limit_symbol;
    double alpha = -0.5;
    double beta = -0.5;
    double gamma = 0.0;
    std::vector<double> sweep{10.0, 1e2, 1e3, 1e4};
    FrequencyGrid grid{800, 0.01};  // reference grid in the limit-side variable
};

// Covariance of the rescaled solution u^T(t, phi) = T^gamma u(T t)(nu_{T^beta} phi):
//   T^{2 gamma} sum_j e^{tT conj p} conj(e^{sT conj p}) F phi(xi_j / T^beta)
//                     conj(F psi(xi_j / T^beta)) sigma_0(C_j)
// over the reference grid mapped by T^alpha, so the limit-side resolution is
// uniform along the sweep.
inline double rescaled_solution_covariance(const ScalingScenario& sc, double T, double t, double s,
                                           const TestFunction& phi, const TestFunction& psi) {
    if (t < 0.0 || s < 0.0)
        throw std::invalid_argument("rescaled_solution_covariance: times must be nonnegative");
    if (!(T > 0.0)) throw std::invalid_argument("rescaled_solution_covariance: T must be positive");
    const FrequencyGrid mapped = sc.grid.scaled(std::pow(T, sc.alpha));
    const auto masses = cell_masses(sc.initial_density, mapped);
    const double pref = std::pow(T, 2.0 * sc.gamma);
    const double unscale = std::pow(T, -sc.beta);
    NeumaierSum acc;
    for (int j = -mapped.half_width(); j <= mapped.half_width(); ++j) {
        const double xi = mapped.node(j);
        const cplx pbar = std::conj(sc.symbol(xi));
        const cplx wt = std::exp(t * T * pbar) * std::conj(std::exp(s * T * pbar));
        const cplx pair = phi.fourier(unscale * xi) * std::conj(psi.fourier(unscale * xi));
        acc.add((wt * pair).real() * masses[static_cast<std::size_t>(mapped.index_of(j))]);
    }
    return pref * acc.value();
}

// E w(t, phi) w(s, psi) for the limit family w(t, phi) = integral e^{t q} F phi dZ
// with reference density f_inf, by singularity-aware cell quadrature.
inline double limit_covariance(const SpectralDensity& f_inf, const MultiplierSymbol& q, double t,
                               double s, const TestFunction& phi, const TestFunction& psi,
                               const FrequencyGrid& grid) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("limit_covariance: times must be nonnegative");
    if (t == 0.0 && s == 0.0 && !f_inf.integrable)
        throw std::domain_error(
            "limit_covariance: spectral density not integrable; the limit field is "
            "generalised-only at t = s = 0");
    const auto masses = cell_masses(f_inf, grid);
    NeumaierSum acc;
    for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
        const double u = grid.node(j);
        const cplx qbar = std::conj(q(u));
        const cplx wt = std::exp(t * qbar) * std::conj(std::exp(s * qbar));
        const cplx pair = phi.fourier(u) * std::conj(psi.fourier(u));
        acc.add((wt * pair).real() * masses[static_cast<std::size_t>(grid.index_of(j))]);
    }
    return acc.value();
}

struct SymbolIdentification {
    bool converged = false;
    double q_at_1 = 0.0;        // Re of the limit at x = 1
    double exponent = 0.0;      // fitted power; the scaling relation gives -1/alpha
    double max_rel_change = 0.0;
    MultiplierSymbol fitted;
};

// q(x) = lim_{T->infinity} T p(T^alpha x), evaluated on a T ladder at probe
// points. Reports non-convergence instead of guessing when the top two rungs
// differ by more than 1e-3 relative.
inline SymbolIdentification identify_limit_symbol(const MultiplierSymbol& p, double alpha,
                                                  std::vector<double> probes = {0.5, 1.0},
                                                  std::vector<double> ladder = {1e2, 1e3, 1e4}) {
    if (ladder.size() < 2) throw std::invalid_argument("identify_limit_symbol: ladder needs two rungs");
    for (double x : probes)
        if (!(x > 0.0)) throw std::invalid_argument("identify_limit_symbol: probes must be positive");
    const auto q_at = [&](double T, double x) {
        return T * p(std::pow(T, alpha) * x);
    };
    const double T_top = ladder.back();
    const double T_prev = ladder[ladder.size() - 2];
    SymbolIdentification out;
    out.max_rel_change = 0.0;
    for (double x : probes) {
        const cplx top = q_at(T_top, x), prev = q_at(T_prev, x);
        const double scale = std::max(std::abs(top), 1e-300);
        out.max_rel_change = std::max(out.max_rel_change, std::abs(top - prev) / scale);
    }
    out.converged = out.max_rel_change <= 1e-3;
    out.q_at_1 = q_at(T_top, 1.0).real();
    // least-squares slope of log|q| against log x
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double x : probes) {
        const double lx = std::log(x);
        const double ly = std::log(std::abs(q_at(T_top, x)));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(probes.size());
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.fitted = power_law_symbol(out.q_at_1, out.exponent);
    return out;
}

struct LimitBoundReport {
    bool satisfied = true;
    double worst_bound = 0.0;     // sup of T^{-k/2} f(x/sqrt(T)) |x|^k over the probe set
    double worst_limit_gap = 0.0; // max |value - 1| at the top T
    std::string message;
};

// Numerical gate for the heat-scaling hypothesis: T^{-k/2} f(x/sqrt(T)) |x|^k
// must stay bounded over the sweep and approach 1 pointwise (probed at a
// large T independent of the configured sweep).
inline LimitBoundReport verify_limit_bound(const SpectralDensity& f, double k,
                                           const std::vector<double>& sweep,
                                           const std::vector<double>& x_probes,
                                           double bound_cap = 16.0, double limit_tol = 0.05) {
    LimitBoundReport rep;
    const double T_limit = std::max(sweep.back(), 1e8);
    std::vector<double> ts = sweep;
    ts.push_back(T_limit);
    for (double T : ts)
        for (double x : x_probes) {
            const double v = std::pow(T, -0.5 * k) * f(x / std::sqrt(T)) * std::pow(std::abs(x), k);
            rep.worst_bound = std::max(rep.worst_bound, v);
            if (T == T_limit)
                rep.worst_limit_gap = std::max(rep.worst_limit_gap, std::abs(v - 1.0));
        }
    if (rep.worst_bound > bound_cap) {
        rep.satisfied = false;
        rep.message = "limit-bound violated: T^{-k/2} f(x/sqrt(T)) |x|^k exceeds the domination cap";
    } else if (rep.worst_limit_gap > limit_tol) {
        rep.satisfied = false;
        rep.message = "limit-bound violated: T^{-k/2} f(x/sqrt(T)) |x|^k does not approach 1";
    }
    return rep;
}

} // namespace specsim

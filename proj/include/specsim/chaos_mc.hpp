#pragma once

// Monte Carlo for the non-Gaussian rescaled solutions. The regular Gaussian
// field is sampled exactly on the probe lattice by factorising its covariance
// matrix (Cholesky with an escalating diagonal jitter for the numerically
// rank-deficient oversampled case); the pairing test functions are the
// analytically heat-evolved, rescaled Gaussians. Replicates draw from
// counter-based streams and land in per-replicate slots, so results do not
// depend on the worker count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specsim/hermite.hpp"
#include "specsim/parallel.hpp"
#include "specsim/rng.hpp"
#include "specsim/statistics.hpp"
#include "specsim/test_function.hpp"

namespace specsim {

class GaussianLatticeSampler {
public:
    GaussianLatticeSampler(const std::function<double(double)>& covariance, double x0, double dx,
                           int n, std::uint64_t seed)
        : x0_(x0), dx_(dx), n_(n), rng_(seed, rng_domain::lattice) {
        if (n < 2) throw std::invalid_argument("GaussianLatticeSampler: need at least two points");
        if (!(dx > 0.0)) throw std::invalid_argument("GaussianLatticeSampler: dx must be positive");
        std::vector<double> row(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) row[static_cast<std::size_t>(d)] = covariance(d * dx);
        const double diag = row[0];
        double jitter = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (try_cholesky(row, jitter)) {
                jitter_ = jitter;
                return;
            }
            jitter = (jitter == 0.0) ? 1e-12 * diag : 10.0 * jitter;
        }
        throw std::runtime_error("GaussianLatticeSampler: covariance matrix is not positive definite");
    }

    int size() const { return n_; }
    double x(int i) const { return x0_ + i * dx_; }
    double jitter_used() const { return jitter_; }

    // field sample; out.size() == size(). Deterministic in (seed, replicate).
    void sample(std::uint64_t replicate, std::span<double> out) const {
        if (out.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("GaussianLatticeSampler::sample: output size mismatch");
        std::vector<double> z(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; i += 2) {
            const auto [a, b] = rng_.normal_pair(replicate, static_cast<std::uint64_t>(i / 2));
            z[static_cast<std::size_t>(i)] = a;
            if (i + 1 < n_) z[static_cast<std::size_t>(i) + 1] = b;
        }
        // lower-triangular product
        for (int i = 0; i < n_; ++i) {
            const double* li = chol_.data() + static_cast<std::size_t>(i) * n_;
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) acc += li[j] * z[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
    }

private:
    bool try_cholesky(const std::vector<double>& toeplitz_row, double jitter) {
        chol_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
        std::vector<double> a(static_cast<std::size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                a[static_cast<std::size_t>(i) * n_ + j] =
                    toeplitz_row[static_cast<std::size_t>(std::abs(i - j))] + (i == j ? jitter : 0.0);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = a[static_cast<std::size_t>(i) * n_ + j];
                for (int p = 0; p < j; ++p)
                    sum -= chol_[static_cast<std::size_t>(i) * n_ + p] *
                           chol_[static_cast<std::size_t>(j) * n_ + p];
                if (i == j) {
                    if (sum <= 0.0) return false;
                    chol_[static_cast<std::size_t>(i) * n_ + j] = std::sqrt(sum);
                } else {
                    chol_[static_cast<std::size_t>(i) * n_ + j] =
                        sum / chol_[static_cast<std::size_t>(j) * n_ + j];
                }
            }
        }
        return true;
    }

    double x0_, dx_;
    int n_;
    double jitter_ = 0.0;
    CounterRng rng_;
    std::vector<double> chol_;  // dense lower triangle
};

// Exact covariance of lattice-paired chaos functionals over a unit-variance
// Gaussian field: Cov(<G(eta), w>, <G(eta), w'>) =
//   sum_{q>=1} (c_q^2/q!) sum_{i,j} w_i w'_j R(|x_i - x_j|)^q.
inline double lattice_chaos_covariance(const std::function<double(double)>& covariance, double dx,
                                       std::span<const double> w_t, std::span<const double> w_s,
                                       std::span<const double> coeffs) {
    if (w_t.size() != w_s.size())
        throw std::invalid_argument("lattice_chaos_covariance: weight size mismatch");
    const int n = static_cast<int>(w_t.size());
    // displacement kernel K(d) = sum_{q>=1} (c_q^2/q!) R(d dx)^q
    std::vector<double> kernel(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const double rho = covariance(d * dx);
        double pw = 1.0;
        NeumaierSum s;
        for (std::size_t q = 1; q < coeffs.size(); ++q) {
            pw *= rho;
            s.add(coeffs[q] * coeffs[q] / factorial(static_cast<int>(q)) * pw);
        }
        kernel[static_cast<std::size_t>(d)] = s.value();
    }
    NeumaierSum acc;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc.add(w_t[static_cast<std::size_t>(i)] * w_s[static_cast<std::size_t>(j)] *
                    kernel[static_cast<std::size_t>(std::abs(i - j))]);
    return acc.value();
}

struct McCovariance {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t replicates = 0;
    double oracle = 0.0;  // exact covariance of the discretised pipeline
};

struct ChaosMcOptions {
    int lattice_points = 513;
    double window_sigmas = 3.6;  // lattice half-width in units of the evolved bump scale
    int workers = 1;
};

// Pairing weights for u^T(t, phi) = T^gamma <G(eta_0), nu_{T^{-1/2}} e^{t Delta} phi>:
// the heat flow and the scaling act on phi in closed form.
inline std::vector<double> rescaled_pairing_weights(const TestFunction& phi, double t, double T,
                                                    double gamma, double x0, double dx, int n) {
    const TestFunction paired = phi.heat_evolved(t).scaled(1.0 / std::sqrt(T));
    const double amp = std::pow(T, gamma) * dx;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = amp * paired(x0 + i * dx);
    return w;
}

// Empirical E[u^T(t, phi) u^T(s, psi)] with a delete-1 jackknife standard
// error, plus the exact covariance of the discretised pipeline as an oracle.
inline McCovariance mc_nongaussian_rescaled(const std::function<double(double)>& G,
                                            const CovarianceProfile& profile, double t, double s,
                                            const TestFunction& phi, const TestFunction& psi,
                                            double T, std::uint64_t seed, std::uint64_t replicates,
                                            const ChaosMcOptions& opts = {}) {
    if (!profile.density.integrable)
        throw std::domain_error("mc_nongaussian_rescaled: no regular representation (density not "
                                "integrable)");
    if (replicates < 1000)
        throw std::invalid_argument("mc_nongaussian_rescaled: need at least 1e3 replicates");
    if (!(T > 0.0)) throw std::invalid_argument("mc_nongaussian_rescaled: T must be positive");
    const double k = profile.tail_exponent_k;
    const auto coeffs = hermite_coefficients(G, 8);
    const double g2 = gaussian_second_moment(G);
    const int m = hermite_rank(coeffs, g2);
    if (std::abs(coeffs[0]) > 1e-6 * std::sqrt(g2))
        throw std::domain_error("mc_nongaussian_rescaled: G must be centred (c_0 = 0)");
    if (!(k >= 1.0 - 1.0 / m && k < 1.0))
        throw std::domain_error("mc_nongaussian_rescaled: k outside [1 - 1/m, 1) for the detected rank");
    const double gamma = 0.25 * m * (1.0 - k);

    // lattice window sized to the wider of the two evolved, rescaled bumps
    double reach = 0.0;
    const TestFunction evolved_phi = phi.heat_evolved(t);
    const TestFunction evolved_psi = psi.heat_evolved(s);
    for (const auto& atom : evolved_phi.atoms())
        reach = std::max(reach, std::abs(atom.center) + opts.window_sigmas * atom.width);
    for (const auto& atom : evolved_psi.atoms())
        reach = std::max(reach, std::abs(atom.center) + opts.window_sigmas * atom.width);
    const double x_max = reach * std::sqrt(T);
    const int n = opts.lattice_points;
    const double dx = 2.0 * x_max / (n - 1);
    const double x0 = -x_max;

    const auto w_t = rescaled_pairing_weights(phi, t, T, gamma, x0, dx, n);
    const auto w_s = rescaled_pairing_weights(psi, s, T, gamma, x0, dx, n);

    const GaussianLatticeSampler sampler(profile.R, x0, dx, n, seed);
    std::vector<double> u_t(replicates), u_s(replicates);
    run_replicates(replicates, opts.workers, [&](std::uint64_t r) {
        std::vector<double> field(static_cast<std::size_t>(n));
        sampler.sample(r, field);
        NeumaierSum at, as;
        for (int i = 0; i < n; ++i) {
            const double g = G(field[static_cast<std::size_t>(i)]);
            at.add(w_t[static_cast<std::size_t>(i)] * g);
            as.add(w_s[static_cast<std::size_t>(i)] * g);
        }
        u_t[r] = at.value();
        u_s[r] = as.value();
    });
    const auto est = covariance_with_jackknife(u_t, u_s);
    McCovariance out;
    out.value = est.value;
    out.std_error = est.std_error;
    out.replicates = replicates;
    out.oracle = lattice_chaos_covariance(profile.R, dx, w_t, w_s, coeffs);
    return out;
}

} // namespace specsim

#pragma once

// Deterministic quadrature helpers: composite rules, adaptive Simpson for
// oracle-grade integrals, power-law singularity handling and truncated
// oscillatory cosine transforms.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace specsim {

using RealFn = std::function<double(double)>;

inline double integrate_midpoint(const RealFn& f, double a, double b, int n) {
    if (n <= 0) throw std::invalid_argument("integrate_midpoint: n must be positive");
    const double h = (b - a) / n;
    double acc = 0.0, comp = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = f(a + (i + 0.5) * h);
        const double y = v - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc * h;
}

inline double integrate_simpson(const RealFn& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

namespace detail {

inline double adaptive_simpson_rec(const RealFn& f, double a, double b, double fa, double fm,
                                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Oracle-grade adaptive Simpson; suited to smooth integrands.
inline double integrate_adaptive(const RealFn& f, double a, double b, double tol = 1e-12,
                                 int max_depth = 40) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral of f over [a,b] where f behaves like |x|^{-k} (k in [0,1)) near the
// origin. The substitution x = y^m with m = 2/(1-k) turns the integrand into
// m y^{m-1} f(y^m) ~ y near y = 0, so composite Simpson applies with the
// origin value pinned to its limit 0.
inline double integrate_power_singular(const RealFn& f, double a, double b, double k,
                                       int n_per_section = 4000) {
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("integrate_power_singular: k must be in [0,1)");
    if (a > b) throw std::invalid_argument("integrate_power_singular: empty interval");
    const double m = 2.0 / (1.0 - k);
    const auto one_side = [&](double upper, double sign) {
        // integral over (0, upper] of f(sign * x)
        if (upper <= 0.0) return 0.0;
        const double y_up = std::pow(upper, 1.0 / m);
        const RealFn g = [&](double y) {
            if (y <= 0.0) return 0.0;
            return f(sign * std::pow(y, m)) * m * std::pow(y, m - 1.0);
        };
        return integrate_simpson(g, 0.0, y_up, n_per_section);
    };
    if (a >= 0.0) return one_side(b, 1.0) - one_side(a, 1.0);
    if (b <= 0.0) return one_side(-a, -1.0) - one_side(-b, -1.0);
    return one_side(-a, -1.0) + one_side(b, 1.0);
}

// Truncated cosine transform: integral of cos(xi*x) g(x) over [0, window].
// g is tabulated once on a uniform Simpson grid; the step resolves both g and
// the oscillation.
inline double cosine_transform_truncated(const RealFn& g, double xi, double window,
                                         double step_hint = 0.01) {
    double h = step_hint;
    if (xi > 0.0) {
        const double per = 2.0 * std::numbers::pi / xi;
        if (per / 24.0 < h) h = per / 24.0;
    }
    int n = static_cast<int>(std::ceil(window / h));
    if (n % 2) ++n;
    const auto fn = [&](double x) { return std::cos(xi * x) * g(x); };
    return integrate_simpson(fn, 0.0, window, n);
}

// integral of cos(xi*x) g(x) over [x0, infinity) for non-increasing g with a
// slowly decaying tail: half-period chunks with iterated averaging of the
// alternating partial sums (Longman / van Wijngaarden).
inline double cosine_transform_tail_averaged(const RealFn& g, double xi, double x0,
                                             int max_chunks = 80, int chunk_points = 64) {
    if (xi <= 0.0) throw std::invalid_argument("cosine_transform_tail_averaged: xi must be positive");
    const double half = std::numbers::pi / xi;
    std::vector<double> partial;
    partial.reserve(max_chunks);
    double acc = 0.0;
    // start at the first zero of cos(xi x) at or beyond x0
    double start = (std::floor(x0 * xi / std::numbers::pi - 0.5) + 0.5) * std::numbers::pi / xi;
    while (start < x0) start += half;
    // leading partial piece [x0, start]
    const auto fn = [&](double x) { return std::cos(xi * x) * g(x); };
    double lead = integrate_simpson(fn, x0, start, chunk_points);
    for (int c = 0; c < max_chunks; ++c) {
        const double a = start + c * half;
        acc += integrate_simpson(fn, a, a + half, chunk_points);
        partial.push_back(acc);
    }
    // iterated averaging accelerates the alternating series
    std::vector<double> s = partial;
    std::size_t len = s.size();
    for (int it = 0; it < 12 && len > 1; ++it, --len)
        for (std::size_t i = 0; i + 1 < len; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    return lead + s.front();
}

} // namespace specsim

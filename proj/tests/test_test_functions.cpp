#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "specsim/quadrature.hpp"
#include "specsim/test_function.hpp"

using namespace specsim;

namespace {

// independent transform oracle: wide fine trapezoid in x
cplx fourier_by_quadrature(const TestFunction& phi, double xi) {
    const int n = 40000;
    const double a = -25.0, b = 25.0, h = (b - a) / n;
    cplx acc{0.0, 0.0};
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * phi(x) * std::polar(1.0, x * xi);
    }
    return acc * h;
}

} // namespace

TEST(TestFunction, GaussianClosedFormTransform) {
    // phi(x) = e^{-x^2/2}  ->  F phi(xi) = sqrt(2 pi) e^{-xi^2/2}
    const TestFunction phi = TestFunction::gaussian(1.0, 0.0, 1.0);
    for (double xi : {0.0, 0.5, 1.0, 2.0, -1.7}) {
        const double expected = std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi);
        EXPECT_NEAR(phi.fourier(xi).real(), expected, 1e-12);
        EXPECT_NEAR(phi.fourier(xi).imag(), 0.0, 1e-12);
        const cplx oracle = fourier_by_quadrature(phi, xi);
        EXPECT_NEAR(phi.fourier(xi).real(), oracle.real(), 1e-10);
        EXPECT_NEAR(phi.fourier(xi).imag(), oracle.imag(), 1e-10);
    }
}

TEST(TestFunction, OffCenterTransformAgainstQuadrature) {
    const TestFunction phi = TestFunction::gaussian(0.8, 1.3, 0.6);
    for (double xi : {0.3, 1.1, -2.2}) {
        const cplx closed = phi.fourier(xi);
        const cplx oracle = fourier_by_quadrature(phi, xi);
        EXPECT_NEAR(closed.real(), oracle.real(), 1e-10);
        EXPECT_NEAR(closed.imag(), oracle.imag(), 1e-10);
    }
}

TEST(TestFunction, ZeroFunction) {
    const TestFunction none = TestFunction::from_atoms({});
    EXPECT_TRUE(none.zero());
    EXPECT_EQ(none.fourier(0.7), cplx(0.0, 0.0));
}

TEST(TestFunction, RealFunctionHermitianTransform) {
    const TestFunction phi = TestFunction::gaussian(1.0, -0.9, 1.4);
    for (double xi : {0.4, 1.9}) {
        const cplx plus = phi.fourier(xi), minus = phi.fourier(-xi);
        EXPECT_NEAR(minus.real(), plus.real(), 1e-14);
        EXPECT_NEAR(minus.imag(), -plus.imag(), 1e-14);
    }
    // real even function: transform real
    const TestFunction even = TestFunction::gaussian(2.0, 0.0, 0.7);
    for (double xi : {0.3, 2.5}) EXPECT_NEAR(even.fourier(xi).imag(), 0.0, 1e-12);
}

TEST(TestFunction, SampledKindTransform) {
    // sample a Gaussian and compare against its closed form
    const TestFunction exact = TestFunction::gaussian(1.0, 0.0, 1.0);
    const double x0 = -12.0, dx = 0.01;
    std::vector<double> vals;
    for (int i = 0; i <= 2400; ++i) vals.push_back(exact(x0 + i * dx));
    const TestFunction sampled = TestFunction::sampled(x0, dx, std::move(vals));
    for (double xi : {0.0, 0.8, 1.6})
        EXPECT_NEAR(std::abs(sampled.fourier(xi) - exact.fourier(xi)), 0.0, 1e-6);
}

TEST(ScaleFunction, IdentityAtOne) {
    const TestFunction phi = TestFunction::gaussian(1.2, 0.4, 0.9);
    const TestFunction same = scale_function(phi, 1.0);
    for (double x : {-1.0, 0.0, 2.3}) EXPECT_NEAR(same(x), phi(x), 1e-15);
}

TEST(ScaleFunction, DirectSubstitution) {
    // nu_2 phi (x) = 2 e^{-2 x^2} for phi = e^{-x^2/2}
    const TestFunction phi = TestFunction::gaussian(1.0, 0.0, 1.0);
    const TestFunction nu2 = scale_function(phi, 2.0);
    for (double x : {0.0, 0.5, -1.2})
        EXPECT_NEAR(nu2(x), 2.0 * std::exp(-2.0 * x * x), 1e-14);
}

TEST(ScaleFunction, FourierScalingIdentity) {
    // F(nu_r phi)(xi) = F phi(xi / r), both sides on a grid of points
    const TestFunction phi = TestFunction::gaussian(0.7, -0.8, 1.1);
    for (double r : {0.5, 2.0, 7.3}) {
        const TestFunction nu = scale_function(phi, r);
        double worst = 0.0;
        for (int i = -20; i <= 20; ++i) {
            const double xi = 0.37 * i;
            worst = std::max(worst, std::abs(nu.fourier(xi) - phi.fourier(xi / r)));
        }
        EXPECT_LT(worst, 1e-12);
    }
    EXPECT_THROW(scale_function(phi, 0.0), std::invalid_argument);
    EXPECT_THROW(scale_function(phi, -2.0), std::invalid_argument);
}

TEST(TestFunction, TranslationActsOnTransformByPhase) {
    const TestFunction phi = TestFunction::gaussian(1.0, 0.2, 1.3);
    const double h = 0.9;
    const TestFunction shifted = phi.translated(h);
    for (double xi : {0.5, 1.7}) {
        const cplx expected = std::polar(1.0, -h * xi) * phi.fourier(xi);
        EXPECT_NEAR(std::abs(shifted.fourier(xi) - expected), 0.0, 1e-13);
        EXPECT_NEAR(shifted(0.0), phi(h), 1e-15);
    }
}

TEST(TestFunction, HeatEvolutionClosedForm) {
    const TestFunction phi = TestFunction::gaussian(1.0, 0.5, 0.8);
    const double t = 0.7;
    const TestFunction evolved = phi.heat_evolved(t);
    // Fourier side: e^{-t xi^2} F phi
    for (double xi : {0.4, 1.3}) {
        const cplx expected = std::exp(-t * xi * xi) * phi.fourier(xi);
        EXPECT_NEAR(std::abs(evolved.fourier(xi) - expected), 0.0, 1e-13);
    }
    // L2 contraction under the heat flow
    EXPECT_LE(evolved.l2_inner(evolved), phi.l2_inner(phi));
}

TEST(TestFunction, L2InnerClosedFormAgainstQuadrature) {
    const TestFunction a = TestFunction::gaussian(1.1, -0.4, 0.9);
    const TestFunction b = TestFunction::gaussian(0.6, 0.8, 1.7);
    const double oracle =
        integrate_adaptive([&](double x) { return a(x) * b(x); }, -30.0, 30.0, 1e-13);
    EXPECT_NEAR(a.l2_inner(b), oracle, 1e-10);
}

TEST(TimeTestFunction, SmoothBumpProfile) {
    const TestFunction phi = TestFunction::gaussian(1.0, 0.0, 1.0);
    const TimeTestFunction psi = TimeTestFunction::smooth_bump(1.0, 1.0, phi);
    EXPECT_NEAR(psi.amplitude(0.0), 1.0, 1e-15);
    EXPECT_EQ(psi.amplitude(1.0), 0.0);
    EXPECT_EQ(psi.amplitude(2.0), 0.0);
    EXPECT_NEAR(psi.amplitude_dt(0.0), 0.0, 1e-15);
    // finite-difference check of the derivative
    const double t = 0.43, eps = 1e-6;
    const double fd = (psi.amplitude(t + eps) - psi.amplitude(t - eps)) / (2.0 * eps);
    EXPECT_NEAR(psi.amplitude_dt(t), fd, 1e-7);
}

TEST(TimeTestFunction, RejectsNonCompactProfiles) {
    const TestFunction phi = TestFunction::gaussian(1.0, 0.0, 1.0);
    EXPECT_THROW(TimeTestFunction([](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, phi),
                 std::invalid_argument);
}

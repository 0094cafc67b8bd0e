#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "specsim/grid.hpp"
#include "specsim/quadrature.hpp"
#include "specsim/spectral_density.hpp"
#include "specsim/test_function.hpp"

using namespace specsim;

TEST(FrequencyGrid, SymmetryAndPartition) {
    const FrequencyGrid grid(50, 0.1);
    for (int j = 1; j <= grid.half_width(); ++j) {
        EXPECT_EQ(grid.node(-j), -grid.node(j));  // exact
        EXPECT_EQ(grid.cell_hi(j - 1), grid.cell_lo(j));
    }
    EXPECT_EQ(grid.cell_lo(-grid.half_width()), -grid.extent());
    EXPECT_EQ(grid.cell_hi(grid.half_width()), grid.extent());
    EXPECT_THROW(FrequencyGrid(0, 0.1), std::invalid_argument);
    EXPECT_THROW(FrequencyGrid(4, -1.0), std::invalid_argument);
}

TEST(CellQuadrature, ConstantDensity) {
    const FrequencyGrid grid(10, 0.1);
    const auto masses = cell_quadrature([](double) { return 1.0; }, grid, 0.0);
    for (double m : masses) EXPECT_NEAR(m, 0.1, 1e-15);
}

TEST(CellQuadrature, SingularCenterCellClosedForm) {
    // integral over [-0.05, 0.05) of |xi|^{-1/2} = 2 (0.05)^{1/2} / (1/2)
    const FrequencyGrid grid(10, 0.1);
    const auto masses = cell_quadrature([](double xi) { return std::pow(std::abs(xi), -0.5); },
                                        grid, 0.5, 1.0);
    EXPECT_NEAR(masses[static_cast<std::size_t>(grid.index_of(0))], 4.0 * std::sqrt(0.05), 1e-12);
}

TEST(CellQuadrature, GaussianTotalMass) {
    const FrequencyGrid grid(160, 0.05);
    const auto masses = cell_quadrature([](double xi) { return std::exp(-xi * xi); }, grid, 0.0);
    EXPECT_NEAR(total_mass(masses), std::sqrt(std::numbers::pi), 1e-6);
}

TEST(CellQuadrature, RejectsNegativeDensity) {
    const FrequencyGrid grid(4, 0.25);
    EXPECT_THROW(cell_quadrature([](double xi) { return xi; }, grid, 0.0), std::domain_error);
}

// Halving the spacing shrinks the error of integral |F phi|^2 f by second
// order at least; for this analytic pair the observed order is much higher.
TEST(CellQuadrature, RefinementLadderOrder) {
    const TestFunction phi = TestFunction::gaussian(1.0, 0.3, 1.0);
    const SpectralDensity f{[](double xi) { return 1.0 / (1.0 + xi * xi); }, 0.0, 1.0, true};
    const auto value_at = [&](double spacing) {
        const int n = static_cast<int>(std::round(12.0 / spacing));
        const FrequencyGrid grid(n, spacing);
        const auto masses = cell_masses(f, grid);
        double acc = 0.0;
        for (int j = -n; j <= n; ++j)
            acc += std::norm(phi.fourier(grid.node(j))) *
                   masses[static_cast<std::size_t>(grid.index_of(j))];
        return acc;
    };
    const double coarse = value_at(0.8), mid = value_at(0.4), fine = value_at(0.2);
    const double order = std::log2(std::abs(coarse - mid) / std::abs(mid - fine));
    EXPECT_GE(order, 1.9);
}

// For real phi and even f, spectral sums are real.
TEST(CellQuadrature, SymmetryKeepsIntegralsReal) {
    const FrequencyGrid grid(80, 0.1);
    const SpectralDensity f = tempered_power_law_density(0.5);
    const auto masses = cell_masses(f, grid);
    const TestFunction phi = TestFunction::gaussian(1.3, 0.7, 0.8);
    cplx acc{0.0, 0.0};
    for (int j = -grid.half_width(); j <= grid.half_width(); ++j)
        acc += phi.fourier(grid.node(j)) * std::conj(phi.fourier(grid.node(j))) *
               masses[static_cast<std::size_t>(grid.index_of(j))];
    EXPECT_NEAR(acc.imag(), 0.0, 1e-10);
}

TEST(Quadrature, PowerSingularMatchesClosedForms) {
    // integral_{-1}^{1} |x|^{-1/2} dx = 4
    const double v = integrate_power_singular([](double x) { return std::pow(std::abs(x), -0.5); },
                                              -1.0, 1.0, 0.5);
    EXPECT_NEAR(v, 4.0, 1e-8);
    // smooth integrand unaffected by the substitution
    const double g = integrate_power_singular([](double x) { return std::exp(-x * x); }, -3.0, 3.0, 0.3);
    EXPECT_NEAR(g, integrate_adaptive([](double x) { return std::exp(-x * x); }, -3.0, 3.0, 1e-13),
                1e-8);
}

TEST(Quadrature, AdaptiveSimpson) {
    EXPECT_NEAR(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi),
                2.0, 1e-11);
}

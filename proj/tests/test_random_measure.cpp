#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "specsim/random_measure.hpp"
#include "specsim/rng.hpp"
#include "specsim/statistics.hpp"

using namespace specsim;

namespace {

// random polynomial-times-Gaussian weights with Hermitian symmetry:
// g(xi) = (sum_d c_d (i xi)^d) e^{-a xi^2} with real c_d.
std::function<cplx(double)> random_hermitian_weight(int which) {
    const CounterRng rng(777, rng_domain::bank);
    std::vector<double> c(4);
    for (int d = 0; d < 4; ++d)
        c[static_cast<std::size_t>(d)] = 2.0 * rng.uniform(static_cast<std::uint64_t>(which), d) - 1.0;
    const double a = 0.3 + 0.7 * rng.uniform(static_cast<std::uint64_t>(which), 9);
    return [c, a](double xi) {
        cplx poly{0.0, 0.0}, z{1.0, 0.0};
        const cplx ixi{0.0, xi};
        for (double cd : c) {
            poly += cd * z;
            z *= ixi;
        }
        return poly * std::exp(-a * xi * xi);
    };
}

} // namespace

TEST(SampleMeasure, ZeroMassGivesZeroIncrements) {
    const FrequencyGrid grid(8, 0.25);
    const SpectralDensity zero{[](double) { return 0.0; }, 0.0, 0.0, true};
    const auto m = sample_measure(zero, grid, 5, 0);
    for (const auto& z : m.increments) EXPECT_EQ(z, cplx(0.0, 0.0));
}

TEST(SampleMeasure, DeterministicGivenSeedAndReplicate) {
    const FrequencyGrid grid(16, 0.2);
    const SpectralDensity f = tempered_power_law_density(0.3);
    const auto a = sample_measure(f, grid, 42, 17);
    const auto b = sample_measure(f, grid, 42, 17);
    for (std::size_t i = 0; i < a.increments.size(); ++i) EXPECT_EQ(a.increments[i], b.increments[i]);
    const auto c = sample_measure(f, grid, 42, 18);
    EXPECT_NE(a.increment(1), c.increment(1));
}

TEST(SampleMeasure, HermitianSymmetryAndRealCenter) {
    const FrequencyGrid grid(20, 0.15);
    const auto m = sample_measure(white_noise_density(), grid, 3, 4);
    EXPECT_EQ(m.increment(0).imag(), 0.0);
    for (int j = 1; j <= grid.half_width(); ++j)
        EXPECT_EQ(m.increment(-j), std::conj(m.increment(j)));
}

TEST(SampleMeasure, RejectsNonFiniteMasses) {
    const FrequencyGrid grid(2, 0.5);
    std::vector<double> masses(5, 1.0);
    masses[2] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(sample_measure(masses, grid, 0, 0), std::domain_error);
}

TEST(SampleMeasure, EmpiricalSecondMomentsMatchMasses) {
    const FrequencyGrid grid(6, 0.4);
    const SpectralDensity f = tempered_power_law_density(0.5);
    const auto masses = cell_masses(f, grid);
    const int replicates = 10000;
    std::vector<NeumaierSum> sq(masses.size());
    for (int r = 0; r < replicates; ++r) {
        const auto m = sample_measure(masses, grid, 91, static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < masses.size(); ++i) sq[i].add(std::norm(m.increments[i]));
    }
    // relative 5-sigma band sqrt(2/M) for |Z|^2 averages of complex Gaussians
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (masses[i] == 0.0) continue;
        const double emp = sq[i].value() / replicates;
        EXPECT_NEAR(emp / masses[i], 1.0, 5.0 * std::sqrt(2.0 / replicates));
    }
}

TEST(Integrate, ZeroWeightAndIndicatorConsistency) {
    const FrequencyGrid grid(12, 0.3);
    const auto m = sample_measure(white_noise_density(), grid, 7, 1);
    EXPECT_EQ(integrate(m, [](double) { return cplx{0.0, 0.0}; }), cplx(0.0, 0.0));
    // indicator of cell C_5 picks out Z_5 exactly
    const auto indicator = [&](double xi) {
        return (xi >= grid.cell_lo(5) && xi < grid.cell_hi(5)) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    };
    EXPECT_EQ(integrate(m, indicator), m.increment(5));
}

TEST(Integrate, AdditivityOverDisjointCells) {
    const FrequencyGrid grid(12, 0.3);
    const auto m = sample_measure(white_noise_density(), grid, 7, 2);
    const auto cell_indicator = [&](int j) {
        return [&, j](double xi) {
            return (xi >= grid.cell_lo(j) && xi < grid.cell_hi(j)) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        };
    };
    const auto union_indicator = [&](double xi) {
        for (int j : {-4, 0, 3, 9})
            if (xi >= grid.cell_lo(j) && xi < grid.cell_hi(j)) return cplx{1.0, 0.0};
        return cplx{0.0, 0.0};
    };
    cplx sum{0.0, 0.0};
    for (int j : {-4, 0, 3, 9}) sum += integrate(m, cell_indicator(j));
    EXPECT_EQ(integrate(m, union_indicator), sum);
}

TEST(Integrate, HermitianWeightsGiveRealSamples) {
    const FrequencyGrid grid(30, 0.2);
    const SpectralDensity f = tempered_power_law_density(0.4);
    const auto masses = cell_masses(f, grid);
    for (int which = 0; which < 5; ++which) {
        const auto g = random_hermitian_weight(which);
        const auto m = sample_measure(masses, grid, 11, static_cast<std::uint64_t>(which));
        EXPECT_LT(std::abs(integrate(m, g).imag()), 1e-10);
    }
}

// Quantified isometry: empirical Var(integral g dZ) within five relative
// standard errors of the oracle for 20 randomised weights.
TEST(Integrate, IsometryAgainstCovarianceOracle) {
    const FrequencyGrid grid(40, 0.2);
    const SpectralDensity f = white_noise_density();
    const auto masses = cell_masses(f, grid);
    const int n_fn = 20, replicates = 10000;
    std::vector<std::vector<cplx>> weights;
    std::vector<double> oracle;
    for (int which = 0; which < n_fn; ++which) {
        const auto g = random_hermitian_weight(which);
        std::vector<cplx> w(static_cast<std::size_t>(grid.size()));
        for (int j = -grid.half_width(); j <= grid.half_width(); ++j)
            w[static_cast<std::size_t>(grid.index_of(j))] = g(grid.node(j));
        weights.push_back(std::move(w));
        oracle.push_back(covariance_oracle(masses, grid, g, g).real());
    }
    std::vector<std::vector<double>> samples(n_fn, std::vector<double>(replicates));
    for (int r = 0; r < replicates; ++r) {
        const auto m = sample_measure(masses, grid, 2718, static_cast<std::uint64_t>(r));
        for (int which = 0; which < n_fn; ++which)
            samples[static_cast<std::size_t>(which)][static_cast<std::size_t>(r)] =
                integrate(m, weights[static_cast<std::size_t>(which)]).real();
    }
    for (int which = 0; which < n_fn; ++which) {
        const double emp = variance(samples[static_cast<std::size_t>(which)]);
        const double ora = oracle[static_cast<std::size_t>(which)];
        EXPECT_LE(std::abs(emp - ora), 5.0 * ora * std::sqrt(2.0 / replicates))
            << "weight #" << which;
    }
}

TEST(CovarianceOracle, LebesgueReferenceAndDisjointSupports) {
    const FrequencyGrid grid(10, 0.1);  // covers [-1.05, 1.05)
    const auto masses = cell_masses(white_noise_density(), grid);
    const auto g = [](double xi) { return cplx{std::cos(xi), 0.0}; };
    double riemann = 0.0;
    for (int j = -10; j <= 10; ++j) riemann += std::norm(g(grid.node(j)).real()) * 0.1;
    EXPECT_NEAR(covariance_oracle(masses, grid, g, g).real(), riemann, 1e-14);
    // disjoint node supports are exactly orthogonal
    const auto left = [&](double xi) { return xi < 0.0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}; };
    const auto right = [&](double xi) { return xi > 0.0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}; };
    EXPECT_EQ(covariance_oracle(masses, grid, left, right), cplx(0.0, 0.0));
}

// White-noise Parseval: E eta(phi) eta(psi) = 2 pi integral phi psi dx.
TEST(CovarianceOracle, WhiteNoiseParseval) {
    const FrequencyGrid grid(500, 0.05);
    const auto masses = cell_masses(white_noise_density(), grid);
    const TestFunction phi = TestFunction::gaussian(1.0, 0.3, 0.8);
    const TestFunction psi = TestFunction::gaussian(0.7, -0.5, 1.2);
    const double lhs = covariance_oracle(masses, grid,
                                         [&](double xi) { return phi.fourier(xi); },
                                         [&](double xi) { return psi.fourier(xi); })
                           .real();
    EXPECT_NEAR(lhs, 2.0 * std::numbers::pi * phi.l2_inner(psi), 1e-6);
}

TEST(SpectralDensityInvariants, EvennessAndMassLadder) {
    // spectral measures of real fields are even
    for (const auto& d : {white_noise_density(), power_law_density(0.5),
                          tempered_power_law_density(0.3), gaussian_density()})
        for (double xi : {0.3, 1.1, 4.7}) EXPECT_EQ(d(xi), d(-xi));
    // integrable densities: total cell mass converges as the grid widens
    for (const auto& d : {tempered_power_law_density(0.5), gaussian_density()}) {
        double prev = total_mass(cell_masses(d, FrequencyGrid(160, 0.05)));
        const double wide = total_mass(cell_masses(d, FrequencyGrid(320, 0.05)));
        const double wider = total_mass(cell_masses(d, FrequencyGrid(640, 0.05)));
        EXPECT_LT(std::abs(wide - prev), 1e-8);
        EXPECT_LT(std::abs(wider - wide), 1e-12);
    }
}

TEST(SampleMeasure, DistinctCellsUncorrelated) {
    const FrequencyGrid grid(6, 0.4);
    const auto masses = cell_masses(tempered_power_law_density(0.3), grid);
    const int replicates = 20000;
    NeumaierSum prod_re, prod_im;
    for (int r = 0; r < replicates; ++r) {
        const auto m = sample_measure(masses, grid, 404, static_cast<std::uint64_t>(r));
        const cplx v = m.increment(2) * std::conj(m.increment(5));
        prod_re.add(v.real());
        prod_im.add(v.imag());
    }
    const double scale = std::sqrt(masses[static_cast<std::size_t>(grid.index_of(2))] *
                                   masses[static_cast<std::size_t>(grid.index_of(5))]);
    EXPECT_LE(std::abs(prod_re.value() / replicates), 5.0 * scale / std::sqrt(replicates));
    EXPECT_LE(std::abs(prod_im.value() / replicates), 5.0 * scale / std::sqrt(replicates));
}

TEST(ScaleMeasureDensity, SelfSimilarCases) {
    // white noise with prefactor r^{-1/2} is invariant
    const SpectralDensity wn = white_noise_density();
    for (double r : {0.5, 3.0, 10.0}) {
        const auto scaled = scale_measure_density(wn, r, 1.0 / std::sqrt(r));
        for (double xi : {0.0, 0.7, 5.0}) EXPECT_NEAR(scaled(xi), 1.0, 1e-14);
    }
    // |xi|^{-k} with prefactor T^{alpha(k-1)/2} is invariant
    const double k = 0.5, alpha = -0.5;
    const SpectralDensity pl = power_law_density(k);
    for (double T : {10.0, 1e3}) {
        const double r = std::pow(T, alpha);
        const auto scaled = scale_measure_density(pl, r, std::pow(T, alpha * (k - 1.0) / 2.0));
        for (double xi : {0.3, 1.0, 4.0}) EXPECT_NEAR(scaled(xi) / pl(xi), 1.0, 1e-13);
        EXPECT_NEAR(scaled.origin_constant, pl.origin_constant, 1e-13);
    }
    // identity
    const auto same = scale_measure_density(pl, 1.0, 1.0);
    EXPECT_NEAR(same(0.9), pl(0.9), 1e-15);
    EXPECT_THROW(scale_measure_density(pl, -1.0, 1.0), std::invalid_argument);
}

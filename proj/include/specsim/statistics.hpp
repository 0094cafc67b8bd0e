#pragma once

// Compensated summation and the sample statistics used by the Monte Carlo
// verification paths (moments, skew/kurtosis, jackknife covariance errors).

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace specsim {

// Neumaier variant of Kahan summation; associative enough that fixed-order
// reduction over replicate slots is reproducible to the last bit.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline double compensated_sum(std::span<const double> xs) {
    NeumaierSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance: need at least two samples");
    const double m = mean(xs);
    NeumaierSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

inline double skewness(std::span<const double> xs) {
    const double m = mean(xs);
    NeumaierSum s2, s3;
    for (double x : xs) {
        const double d = x - m;
        s2.add(d * d);
        s3.add(d * d * d);
    }
    const double n = static_cast<double>(xs.size());
    const double v = s2.value() / n;
    return (s3.value() / n) / std::pow(v, 1.5);
}

inline double excess_kurtosis(std::span<const double> xs) {
    const double m = mean(xs);
    NeumaierSum s2, s4;
    for (double x : xs) {
        const double d = x - m;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    const double n = static_cast<double>(xs.size());
    const double v = s2.value() / n;
    return (s4.value() / n) / (v * v) - 3.0;
}

struct CovarianceEstimate {
    double value = 0.0;        // sample covariance (1/(M-1) normalisation)
    double std_error = 0.0;    // delete-1 jackknife standard error
    std::size_t replicates = 0;
};

// Covariance of paired samples with a delete-1 jackknife standard error.
inline CovarianceEstimate covariance_with_jackknife(std::span<const double> a,
                                                    std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("covariance_with_jackknife: size mismatch");
    const std::size_t n = a.size();
    if (n < 3) throw std::invalid_argument("covariance_with_jackknife: need at least three samples");
    NeumaierSum sa, sb, sab;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(a[i]);
        sb.add(b[i]);
        sab.add(a[i] * b[i]);
    }
    const double Sa = sa.value(), Sb = sb.value(), Sab = sab.value();
    const double nn = static_cast<double>(n);
    const double full = (Sab - Sa * Sb / nn) / (nn - 1.0);

    // leave-one-out estimates from the sufficient sums
    std::vector<double> loo(n);
    NeumaierSum mean_loo;
    for (std::size_t i = 0; i < n; ++i) {
        const double sa_i = Sa - a[i], sb_i = Sb - b[i], sab_i = Sab - a[i] * b[i];
        loo[i] = (sab_i - sa_i * sb_i / (nn - 1.0)) / (nn - 2.0);
        mean_loo.add(loo[i]);
    }
    const double lm = mean_loo.value() / nn;
    NeumaierSum dev;
    for (std::size_t i = 0; i < n; ++i) dev.add((loo[i] - lm) * (loo[i] - lm));
    const double se = std::sqrt((nn - 1.0) / nn * dev.value());
    return {full, se, n};
}

inline CovarianceEstimate variance_with_jackknife(std::span<const double> a) {
    return covariance_with_jackknife(a, a);
}

} // namespace specsim

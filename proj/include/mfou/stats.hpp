#pragma once

#include <cstddef>
#include <vector>

namespace mfou::stats {

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

struct Moments {
    std::size_t count = 0;
    double mean = 0;
    double variance = 0;  // unbiased
    double skewness = 0;  // m3 / m2^{3/2}
    double skewness_se = 0;
    double excess_kurtosis = 0;  // m4 / m2^2 - 3
    double kurtosis_se = 0;
};
Moments moments(const std::vector<double>& v);

// Kolmogorov-Smirnov distance to N(mean, sd^2).
double ks_normal(std::vector<double> v, double mean, double sd);
// Asymptotic Kolmogorov critical value at level 1%.
double ks_critical_1pct(std::size_t count);

double normal_cdf(double x);

}  // namespace mfou::stats

#include "mfou/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfou::stats {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("ols: length mismatch");
    if (n < 2) throw std::invalid_argument("ols: need at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissae");
    LineFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.count = v.size();
    if (m.count < 4) throw std::invalid_argument("moments: need at least four values");
    const double n = static_cast<double>(m.count);
    for (double x : v) m.mean += x;
    m.mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : v) {
        const double d = x - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = m2 * n / (n - 1);
    if (m2 > 0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    m.skewness_se = std::sqrt(6.0 * n * (n - 1) / ((n - 2) * (n + 1) * (n + 3)));
    m.kurtosis_se = 2.0 * m.skewness_se * std::sqrt((n * n - 1) / ((n - 3) * (n + 5)));
    return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_normal(std::vector<double> v, double mean, double sd) {
    if (v.empty()) throw std::invalid_argument("ks: empty sample");
    if (!(sd > 0)) throw std::invalid_argument("ks: sd must be positive");
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = normal_cdf((v[i] - mean) / sd);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_critical_1pct(std::size_t count) { return 1.6276 / std::sqrt(static_cast<double>(count)); }

}  // namespace mfou::stats

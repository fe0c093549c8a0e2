#include "mfou/estim.hpp"

#include "mfou/kernels.hpp"
#include "mfou/special.hpp"

#include <cmath>
#include <stdexcept>

namespace mfou {

namespace {

void require_lag(std::size_t n, int s) {
    if (s < 1) throw std::invalid_argument("lag s must be >= 1");
    if (n <= static_cast<std::size_t>(s)) {
        throw std::invalid_argument("insufficient observations: n = " + std::to_string(n) + " <= s = " + std::to_string(s));
    }
}

std::size_t steps_of(std::span<const double> y) {
    if (y.size() < 2) throw std::invalid_argument("insufficient observations: need at least two samples");
    return y.size() - 1;
}

void require_same_length(std::span<const double> y1, std::span<const double> y2) {
    if (y1.size() != y2.size()) throw std::invalid_argument("component series differ in length");
}

void require_inverse_defined(double hsum) {
    if (near_unit_hsum(hsum)) throw std::domain_error("inversion undefined at H=1");
}

}  // namespace

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::low_freq_cov: return "low_freq_cov";
        case Estimator::low_freq_corr: return "low_freq_corr";
        case Estimator::high_freq: return "high_freq";
        case Estimator::nu_low: return "nu_low";
        case Estimator::nu_high: return "nu_high";
    }
    return "?";
}

Estimator estimator_from_string(const std::string& s) {
    for (auto e : {Estimator::low_freq_cov, Estimator::low_freq_corr, Estimator::high_freq, Estimator::nu_low,
                   Estimator::nu_high}) {
        if (to_string(e) == s) return e;
    }
    throw std::invalid_argument("unknown estimator '" + s + "'");
}

LagCoefficients low_freq_coeffs(const PairParams& p, int s) {
    if (s < 1) throw std::invalid_argument("lag s must be >= 1");
    require_valid(p);
    const double h = p.hsum();
    require_inverse_defined(h);
    const double sd = static_cast<double>(s);
    // damped integrals e^{-alpha_i s} I_ij(s) keep everything finite
    const double j12 = damped_i_integral(p.alpha1, p.alpha2, h, sd);
    const double j21 = damped_i_integral(p.alpha2, p.alpha1, h, sd);
    const double inv12 = std::exp(-p.alpha1 * sd) / j12;  // 1 / I_12(s)
    const double inv21 = std::exp(-p.alpha2 * sd) / j21;
    const double den = p.nu1 * p.nu2 * h * (h - 1);
    LagCoefficients c;
    c.s = s;
    c.a1 = -(inv12 + inv21) / den;
    c.a2 = 1.0 / (den * j12);
    c.a3 = 1.0 / (den * j21);
    c.b1 = (inv21 - inv12) / den;
    c.b2 = c.a2;
    c.b3 = -c.a3;
    return c;
}

CorrCoefficients low_freq_corr_coeffs(const PairParams& p, int s) {
    if (s < 1) throw std::invalid_argument("lag s must be >= 1");
    require_valid(p);
    const double h = p.hsum();
    require_inverse_defined(h);
    const double sd = static_cast<double>(s);
    const double j12 = damped_i_integral(p.alpha1, p.alpha2, h, sd);
    const double j21 = damped_i_integral(p.alpha2, p.alpha1, h, sd);
    const double inv12 = std::exp(-p.alpha1 * sd) / j12;
    const double inv21 = std::exp(-p.alpha2 * sd) / j21;
    const double gg = std::sqrt(special::gamma(2 * p.h1 + 1) * special::gamma(2 * p.h2 + 1));
    const double ah = std::pow(p.alpha1, p.h1) * std::pow(p.alpha2, p.h2);
    const double amp = gg / (2 * ah * h * (h - 1));
    CorrCoefficients c;
    c.g1 = -amp * (inv12 + inv21);
    c.g2 = amp / j12;
    c.g3 = amp / j21;
    c.e1 = -amp * (inv12 - inv21);
    c.e2 = amp / j12;
    c.e3 = -amp / j21;
    c.shortcut = gg / special::gamma(h + 1) * (p.alpha1 + p.alpha2) /
                 (ah * (std::pow(p.alpha1, 1 - h) + std::pow(p.alpha2, 1 - h)));
    return c;
}

LaggedMoments lagged_moments(std::span<const double> y1, std::span<const double> y2, int s) {
    require_same_length(y1, y2);
    const std::size_t n = steps_of(y1);
    require_lag(n, s);
    const auto su = static_cast<std::size_t>(s);
    LaggedMoments m;
    m.n = n;
    m.s = s;
    for (std::size_t j = 1; j <= n; ++j) {
        m.c0 += y1[j] * y2[j];
        m.v1 += y1[j] * y1[j];
        m.v2 += y2[j] * y2[j];
    }
    for (std::size_t j = 1; j <= n - su; ++j) {
        m.c_plus += y1[j + su] * y2[j];
        m.c_minus += y1[j] * y2[j + su];
    }
    const double nd = static_cast<double>(n);
    m.c0 /= nd;
    m.v1 /= nd;
    m.v2 /= nd;
    m.c_plus /= nd;
    m.c_minus /= nd;
    return m;
}

PairParams unit_spacing(const PairParams& p, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("spacing must be positive");
    PairParams q = p;
    q.alpha1 *= delta;
    q.alpha2 *= delta;
    q.nu1 *= std::pow(delta, p.h1);
    q.nu2 *= std::pow(delta, p.h2);
    return q;
}

EstimateResult estimate_low_freq(std::span<const double> y1, std::span<const double> y2, const PairParams& p, int s,
                                 double delta) {
    const LaggedMoments m = lagged_moments(y1, y2, s);
    const LagCoefficients c = low_freq_coeffs(unit_spacing(p, delta), s);
    EstimateResult r;
    r.estimator = Estimator::low_freq_cov;
    r.n = m.n;
    r.s = s;
    r.delta = delta;
    r.rho = c.a1 * m.c0 + c.a2 * m.c_plus + c.a3 * m.c_minus;
    r.eta = c.b1 * m.c0 + c.b2 * m.c_plus + c.b3 * m.c_minus;
    return r;
}

EstimateResult estimate_low_freq_corr(std::span<const double> y1, std::span<const double> y2, const PairParams& p,
                                      int s, double delta) {
    const LaggedMoments m = lagged_moments(y1, y2, s);
    const CorrCoefficients c = low_freq_corr_coeffs(unit_spacing(p, delta), s);
    const double norm = std::sqrt(m.v1 * m.v2);
    if (!(norm > 0.0)) throw std::domain_error("sample variance is zero");
    const double k0 = m.c0 / norm;
    const double kp = m.c_plus / norm;
    const double km = m.c_minus / norm;
    EstimateResult r;
    r.estimator = Estimator::low_freq_corr;
    r.n = m.n;
    r.s = s;
    r.delta = delta;
    r.rho = c.g1 * k0 + c.g2 * kp + c.g3 * km;
    r.eta = c.e1 * k0 + c.e2 * kp + c.e3 * km;
    r.rho_eta_zero = c.shortcut * k0;
    return r;
}

EstimateResult estimate_high_freq(std::span<const double> y1, std::span<const double> y2, double h1, double h2,
                                  double nu1, double nu2, double delta) {
    require_same_length(y1, y2);
    const std::size_t n = steps_of(y1);
    const double h = h1 + h2;
    if (near_unit_hsum(h)) throw std::domain_error("singular H=1 scaling for the high-frequency estimator");
    if (!(delta > 0.0)) throw std::invalid_argument("spacing must be positive");
    if (!(nu1 > 0.0 && nu2 > 0.0)) throw std::invalid_argument("nu must be positive");
    double sr = 0.0;
    double se = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sr += (y1[k + 1] - y1[k]) * (y2[k + 1] - y2[k]);
        se += y1[k] * y2[k + 1] - y1[k + 1] * y2[k];
    }
    const double scale = 1.0 / (nu1 * nu2 * static_cast<double>(n) * std::pow(delta, h));
    EstimateResult r;
    r.estimator = Estimator::high_freq;
    r.n = n;
    r.delta = delta;
    r.rho = sr * scale;
    r.eta = se * scale;
    r.eta_supported = h < 1.0;
    return r;
}

EstimateResult estimate_nu_low(std::span<const double> y, double alpha, double h, int s, double delta) {
    const std::size_t n = steps_of(y);
    require_lag(n, s);
    if (!(h > 0.0 && h < 1.0) || std::fabs(h - 0.5) <= kHalfHurstExclusion) {
        throw std::invalid_argument("H must lie in (0,1) and differ from 1/2");
    }
    if (!(alpha > 0.0) || !(delta > 0.0)) throw std::invalid_argument("alpha and spacing must be positive");
    const double a = alpha * delta;
    const double sd = static_cast<double>(s);
    const double jd = damped_i_integral(a, a, 2 * h, sd);  // e^{-alpha s} I(s)
    const double den = h * (2 * h - 1);
    const double abar1 = -std::exp(-a * sd) / (den * jd);
    const double abar2 = 1.0 / (den * jd);
    const auto su = static_cast<std::size_t>(s);
    double q0 = 0.0;
    double qs = 0.0;
    for (std::size_t k = 0; k < n; ++k) q0 += y[k] * y[k];
    for (std::size_t k = 0; k <= n - su; ++k) qs += y[k + su] * y[k];
    const double nd = static_cast<double>(n);
    EstimateResult r;
    r.estimator = Estimator::nu_low;
    r.n = n;
    r.s = s;
    r.delta = delta;
    // unit-time estimate is nu^2 delta^{2H}
    r.nu2 = (abar1 * q0 / nd + abar2 * qs / nd) / std::pow(delta, 2 * h);
    return r;
}

EstimateResult estimate_nu_high(std::span<const double> y, double h, double delta) {
    const std::size_t n = steps_of(y);
    if (!(delta > 0.0)) throw std::invalid_argument("spacing must be positive");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("H must lie in (0,1)");
    double q = 0.0;
    for (std::size_t k = 0; k < n; ++k) q += (y[k + 1] - y[k]) * (y[k + 1] - y[k]);
    EstimateResult r;
    r.estimator = Estimator::nu_high;
    r.n = n;
    r.delta = delta;
    r.nu2 = q / (static_cast<double>(n) * std::pow(delta, 2 * h));
    return r;
}

}  // namespace mfou

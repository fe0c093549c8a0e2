#include "mfou/kernels.hpp"

#include "mfou/special.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfou {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kEulerGamma = boost::math::constants::euler<double>();
// contributions damped by more than e^-50 are dropped
constexpr double kDampingCutoff = 50.0;

double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::fabs(x)); }

// Shape of the inner incomplete gamma, zero on the logarithmic branch.
double gamma_shape(double hsum) { return near_unit_hsum(hsum) ? 0.0 : hsum - 1.0; }

// Integral of e^{-alpha_i (t_end - u)} g(alpha_j u) over [lo, hi], with
// g(x) = e^x Gamma(a, x). Only the panel touching u = 0 is singular.
double damped_panel(double alpha_i, double alpha_j, double a, double lo, double hi, double t_end) {
    auto f = [=](double u) {
        if (u <= 0.0) return 0.0;
        return std::exp(-alpha_i * (t_end - u)) * special::scaled_upper_gamma(a, alpha_j * u);
    };
    const double width = 1.0 / std::max({1.0, alpha_i, alpha_j});
    double sum = 0.0;
    double x = lo;
    if (x == 0.0 && hi > 0.0) {
        const double end = std::min(hi, width);
        sum += quad::endpoint_singular(f, 0.0, end).value;
        x = end;
    }
    while (x < hi) {
        const double end = std::min(hi, x + width);
        sum += quad::smooth(f, x, end).value;
        x = end;
    }
    return sum;
}

struct KernelTerms {
    int later, earlier;  // component indices after orienting the lag
    double c0;           // lag-zero covariance
    double weight;       // nu_i nu_j times the increment density prefactor
    double hsum;
};

KernelTerms kernel_terms(const PairParams& p, int i, int j) {
    KernelTerms k{i, j, lag_zero_cov(p, i, j), 0.0, 0.0};
    if (i == j) {
        const double h = 2 * p.hurst(i);
        k.hsum = h;
        k.weight = p.nu(i) * p.nu(i) * h * (h - 1) / 2;
        return k;
    }
    const double h = p.hsum();
    const double nn = p.nu1 * p.nu2;
    const double eta = p.eta(i, j);
    k.hsum = h;
    k.weight = near_unit_hsum(h) ? -nn * eta / 2 : nn * h * (h - 1) * (p.rho + eta) / 2;
    return k;
}

}  // namespace

double fbm_cov(double h, double t, double s) {
    const double e = 2 * h;
    return 0.5 * (std::pow(std::fabs(t), e) + std::pow(std::fabs(s), e) - std::pow(std::fabs(t - s), e));
}

double mfbm_cross_cov(double h1, double h2, double rho, double eta12, double t, double s) {
    const double h = h1 + h2;
    if (near_unit_hsum(h)) {
        return 0.5 * (rho * (std::fabs(s) + std::fabs(t) - std::fabs(s - t)) +
                      eta12 * (xlogx(s) - xlogx(t) - xlogx(s - t)));
    }
    auto pw = [h](double x) { return std::pow(std::fabs(x), h); };
    return 0.5 * ((rho + sgn(t) * eta12) * pw(t) + (rho - sgn(s) * eta12) * pw(s) -
                  (rho - sgn(s - t) * eta12) * pw(s - t));
}

double mfbm_increment_cov(double hsum, double rho, double eta_ij, long tau) {
    if (tau == 0) return rho;
    if (tau < 0) return mfbm_increment_cov(hsum, rho, -eta_ij, -tau);
    const double x = static_cast<double>(tau);
    if (near_unit_hsum(hsum)) {
        // second difference of x log x, arranged to avoid cancellation
        const double d2 = tau == 1 ? 2 * std::log(2.0) : x * std::log1p(-1.0 / (x * x)) + std::log1p(2.0 / (x - 1));
        return -0.5 * eta_ij * d2;
    }
    const double d2 = std::pow(x, hsum) * (std::expm1(hsum * std::log1p(1.0 / x)) +
                                           std::expm1(hsum * std::log1p(-1.0 / x)));
    return 0.5 * (rho + eta_ij) * d2;
}

double damped_i_integral(double alpha_i, double alpha_j, double hsum, double t) {
    if (!(t >= 0.0)) throw std::domain_error("I-integral needs t >= 0");
    if (!(alpha_i > 0.0 && alpha_j > 0.0)) throw std::domain_error("I-integral needs positive alphas");
    if (!(hsum > 0.0 && hsum < 2.0)) throw std::domain_error("I-integral needs Hsum in (0,2)");
    if (t == 0.0) return 0.0;
    const double a = gamma_shape(hsum);
    const double lo = alpha_i * t > kDampingCutoff ? t - kDampingCutoff / alpha_i : 0.0;
    return std::pow(alpha_j, -a) * damped_panel(alpha_i, alpha_j, a, lo, t, t);
}

double i_integral(double alpha_i, double alpha_j, double hsum, double t) {
    const double j = damped_i_integral(alpha_i, alpha_j, hsum, t);
    return j == 0.0 ? 0.0 : j * std::exp(alpha_i * t);
}

std::vector<double> damped_i_series(double alpha_i, double alpha_j, double hsum, double delta,
                                    std::size_t count) {
    if (!(delta > 0.0)) throw std::domain_error("I-integral series needs delta > 0");
    if (!(alpha_i > 0.0 && alpha_j > 0.0)) throw std::domain_error("I-integral needs positive alphas");
    if (!(hsum > 0.0 && hsum < 2.0)) throw std::domain_error("I-integral needs Hsum in (0,2)");
    const double a = gamma_shape(hsum);
    const double scale = std::pow(alpha_j, -a);
    const double decay = std::exp(-alpha_i * delta);
    std::vector<double> out(count + 1, 0.0);
    for (std::size_t k = 1; k <= count; ++k) {
        const double t0 = static_cast<double>(k - 1) * delta;
        const double t1 = static_cast<double>(k) * delta;
        out[k] = decay * out[k - 1] + scale * damped_panel(alpha_i, alpha_j, a, t0, t1, t1);
    }
    return out;
}

double lag_zero_cov(const PairParams& p, int i, int j) {
    if (i == j) {
        const double h = p.hurst(i);
        const double nu = p.nu(i);
        return nu * nu * special::gamma(2 * h + 1) / (2 * std::pow(p.alpha(i), 2 * h));
    }
    const double ai = p.alpha(i);
    const double aj = p.alpha(j);
    const double nn = p.nu1 * p.nu2;
    const double eta = p.eta(i, j);
    const double h = p.hsum();
    if (near_unit_hsum(h)) return nn / (ai + aj) * (p.rho + eta / 2 * (std::log(aj) - std::log(ai)));
    const double pi_ = std::pow(ai, 1 - h);
    const double pj = std::pow(aj, 1 - h);
    return special::gamma(h + 1) * nn / (2 * (ai + aj)) * ((pi_ + pj) * p.rho + (pj - pi_) * eta);
}

double mfou_cross_cov(const PairParams& p, int i, int j, double lag) {
    if (lag < 0.0) return mfou_cross_cov(p, j, i, -lag);
    const KernelTerms k = kernel_terms(p, i, j);
    if (lag == 0.0) return k.c0;
    const double ai = p.alpha(i);
    const double aj = p.alpha(j);
    return std::exp(-ai * lag) * k.c0 + k.weight * damped_i_integral(ai, aj, k.hsum, lag);
}

std::vector<double> cross_cov_series(const PairParams& p, int i, int j, double delta, std::size_t count) {
    const KernelTerms k = kernel_terms(p, i, j);
    const double ai = p.alpha(i);
    const auto jv = damped_i_series(ai, p.alpha(j), k.hsum, delta, count);
    std::vector<double> out(count + 1);
    for (std::size_t n = 0; n <= count; ++n) {
        out[n] = std::exp(-ai * delta * static_cast<double>(n)) * k.c0 + k.weight * jv[n];
    }
    return out;
}

double mfou_corr(const PairParams& p, int i, int j) {
    return lag_zero_cov(p, i, j) / std::sqrt(lag_zero_cov(p, i, i) * lag_zero_cov(p, j, j));
}

quad::Result spectral_autocov_oracle(double h, double alpha, double nu, double lag) {
    using namespace boost::math::quadrature;
    const double s = std::fabs(lag);
    const double c = nu * nu * special::gamma(2 * h + 1) * std::sin(kPi * h) / kPi;
    auto dens = [=](double x) { return std::pow(x, 1 - 2 * h) / (alpha * alpha + x * x); };

    auto head = quad::endpoint_singular([&](double x) { return dens(x) * std::cos(s * x); }, 0.0, alpha);
    quad::Result tail;
    if (s == 0.0) {
        exp_sinh<double> es;
        double err = 0.0;
        tail.value = es.integrate(dens, alpha, std::numeric_limits<double>::infinity(), 1e-13, &err);
        tail.error = err * std::fabs(tail.value);
    } else {
        // shift the tail to start at the origin and split into cosine and sine transforms
        auto shifted = [&](double x) { return dens(x + alpha); };
        static thread_local ooura_fourier_cos<double> fc(1e-13);
        static thread_local ooura_fourier_sin<double> fs(1e-13);
        auto [vc, ec] = fc.integrate(shifted, s);
        auto [vs, es] = fs.integrate(shifted, s);
        tail.value = std::cos(s * alpha) * vc - std::sin(s * alpha) * vs;
        tail.error = std::fabs(ec * vc) + std::fabs(es * vs);
    }
    return {c * (head.value + tail.value), std::fabs(c) * (head.error + tail.error)};
}

double longlag_expansion(const PairParams& p, int i, int j, double lag, int terms) {
    if (!(lag > 0.0)) throw std::domain_error("long-lag expansion needs lag > 0");
    if (terms < 0) throw std::domain_error("long-lag expansion needs terms >= 0");
    if (i == j) {
        const double h = 2 * p.hurst(i);
        const double a = p.alpha(i);
        const double nu = p.nu(i);
        double sum = 0.0;
        for (int n = 1; n <= terms; ++n) {
            double prod = 1.0;
            for (int k = 0; k <= 2 * n - 1; ++k) prod *= h - k;
            sum += std::pow(a, -2.0 * n) * prod * std::pow(lag, h - 2.0 * n);
        }
        return 0.5 * nu * nu * sum;
    }
    const KernelTerms k = kernel_terms(p, i, j);
    const double al = p.alpha(i);
    const double ae = p.alpha(j);
    const double h = k.hsum;
    double sum = 0.0;
    double prod = 1.0;
    for (int n = 0; n <= terms; ++n) {
        if (n >= 1) prod *= h - (n + 1);
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        sum += (sign / std::pow(al, n + 1) + 1.0 / std::pow(ae, n + 1)) * prod * std::pow(lag, h - 2 - n);
    }
    return k.weight / (al + ae) * sum;
}

double shortlag_expansion(const PairParams& p, int i, int j, double lag) {
    if (lag < 0.0) return shortlag_expansion(p, j, i, -lag);
    const KernelTerms k = kernel_terms(p, i, j);
    const double al = p.alpha(i);
    const double ae = p.alpha(j);
    const double s = lag;
    if (i != j && near_unit_hsum(k.hsum)) {
        // weight is -nu nu eta / 2 here
        return k.c0 * (1 - al * s) + k.weight * (-s * std::log(s) + s * (1 - kEulerGamma - std::log(ae)));
    }
    const double h = k.hsum;
    const double nnk = k.weight / (h * (h - 1));  // nu_i nu_j (rho + eta) / 2
    const double gh = special::gamma(h + 1);
    const double pe = std::pow(ae, 1 - h);
    return k.c0 - nnk * std::pow(s, h) + (-al * k.c0 + pe * gh * nnk) * s +
           (al - ae) * nnk / (h + 1) * std::pow(s, h + 1) +
           (al * al * k.c0 / 2 - 0.5 * nnk * gh * (al * pe - std::pow(ae, 2 - h))) * s * s;
}

double shortlag_remainder_order(const PairParams& p, int i, int j) {
    if (i != j && near_unit_hsum(p.hsum())) return 2.0;
    const double h = i == j ? 2 * p.hurst(i) : p.hsum();
    return std::min(h + 2, 3.0);
}

}  // namespace mfou

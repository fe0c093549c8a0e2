#pragma once

#include "mfou/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace mfou {

struct LagCoefficients {
    int s = 1;
    double a1 = 0, a2 = 0, a3 = 0;
    double b1 = 0, b2 = 0, b3 = 0;
};

// Coefficients that invert (r(0), r_12(s), r_21(s)) into (rho, eta12).
LagCoefficients low_freq_coeffs(const PairParams& p, int s);

enum class Estimator { low_freq_cov, low_freq_corr, high_freq, nu_low, nu_high };
std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

struct EstimateResult {
    Estimator estimator = Estimator::low_freq_cov;
    std::size_t n = 0;
    int s = 0;           // lag, low-frequency and nu_low only
    double delta = 1.0;  // observation spacing
    std::optional<double> rho;
    std::optional<double> eta;
    std::optional<double> nu2;
    std::optional<double> rho_eta_zero;  // correlation shortcut assuming eta = 0
    bool eta_supported = true;           // false when theory gives no consistency for eta
};

// Sample moments over Y_0..Y_n, all normalized by 1/n:
//   c0      = sum_{j=1}^{n}   Y1_j     Y2_j
//   c_plus  = sum_{j=1}^{n-s} Y1_{j+s} Y2_j
//   c_minus = sum_{j=1}^{n-s} Y1_j     Y2_{j+s}
struct LaggedMoments {
    double c0 = 0, c_plus = 0, c_minus = 0;
    double v1 = 0, v2 = 0;  // sum_{j=1}^{n} (Y^i_j)^2 / n
    std::size_t n = 0;
    int s = 0;
};
LaggedMoments lagged_moments(std::span<const double> y1, std::span<const double> y2, int s);

// Spacing delta is absorbed by rescaling time: alpha -> alpha delta, nu -> nu delta^H.
PairParams unit_spacing(const PairParams& p, double delta);

EstimateResult estimate_low_freq(std::span<const double> y1, std::span<const double> y2, const PairParams& p,
                                 int s = 1, double delta = 1.0);
EstimateResult estimate_low_freq_corr(std::span<const double> y1, std::span<const double> y2, const PairParams& p,
                                      int s = 1, double delta = 1.0);
EstimateResult estimate_high_freq(std::span<const double> y1, std::span<const double> y2, double h1, double h2,
                                  double nu1, double nu2, double delta);
EstimateResult estimate_nu_low(std::span<const double> y, double alpha, double h, int s = 1, double delta = 1.0);
EstimateResult estimate_nu_high(std::span<const double> y, double h, double delta);

// Coefficients of the sample-correlation variant.
struct CorrCoefficients {
    double g1 = 0, g2 = 0, g3 = 0;  // rho
    double e1 = 0, e2 = 0, e3 = 0;  // eta
    double shortcut = 0;            // rho = shortcut * Corr(Y1_0, Y2_0) when eta = 0
};
CorrCoefficients low_freq_corr_coeffs(const PairParams& p, int s);

}  // namespace mfou

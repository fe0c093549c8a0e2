#pragma once

#include "mfou/model.hpp"
#include "mfou/quadrature.hpp"

#include <cstddef>
#include <vector>

// Component indices are 0 and 1 within a PairParams. For a lag s >= 0,
// mfou_cross_cov(p, i, j, s) = Cov(Y^i_{t+s}, Y^j_t); negative lags follow
// r_ij(-s) = r_ji(s).
namespace mfou {

double fbm_cov(double h, double t, double s);

// Cov(B^1_t, B^2_s) for a unit-variance bivariate fBm.
double mfbm_cross_cov(double h1, double h2, double rho, double eta12, double t, double s);

// Cov(dB^i_tau, dB^j_0) for unit-step increments of a bivariate fBm, i.e. the
// stationary increment covariance at integer lag tau. `hsum` is H_i + H_j and
// `eta_ij` the antisymmetric parameter oriented from i to j.
double mfbm_increment_cov(double hsum, double rho, double eta_ij, long tau);

// I_ij(t) as a double integral of e^{alpha_i u + alpha_j v} |u - v|^{H-2}.
// Overflows to +inf once alpha_i t is large; prefer damped_i_integral.
double i_integral(double alpha_i, double alpha_j, double hsum, double t);

// e^{-alpha_i t} I_ij(t), bounded for all t.
double damped_i_integral(double alpha_i, double alpha_j, double hsum, double t);

// damped_i_integral at t = k*delta for k = 0..count, by a contracting recurrence.
std::vector<double> damped_i_series(double alpha_i, double alpha_j, double hsum, double delta,
                                    std::size_t count);

double lag_zero_cov(const PairParams& p, int i, int j);
double mfou_cross_cov(const PairParams& p, int i, int j, double lag);
double mfou_corr(const PairParams& p, int i, int j);

// r_ij(k*delta) for k = 0..count.
std::vector<double> cross_cov_series(const PairParams& p, int i, int j, double delta, std::size_t count);

// Univariate fOU autocovariance from its spectral density.
quad::Result spectral_autocov_oracle(double h, double alpha, double nu, double lag);

// Partial sums of the large-lag and small-lag asymptotic expansions.
double longlag_expansion(const PairParams& p, int i, int j, double lag, int terms);
double shortlag_expansion(const PairParams& p, int i, int j, double lag);
// Exponent q of the remainder |r - shortlag_expansion| = O(lag^q).
double shortlag_remainder_order(const PairParams& p, int i, int j);

}  // namespace mfou

#pragma once

#include "mfou/estim.hpp"
#include "mfou/model.hpp"

#include <cstddef>
#include <string>

namespace mfou {

enum class Regime { gaussian, log_gaussian, non_gaussian, conjecture };
std::string to_string(Regime r);

struct RatePrediction {
    double exponent = 0.5;  // RMSE ~ n^{-exponent}
    bool log_correction = false;
    Regime regime = Regime::gaussian;
};

RatePrediction predicted_rate(double hsum, Process process);

enum class Estimand { rho, eta };

struct SeriesLimit {
    double value = 0;
    double tail_bound = 0;
    std::size_t terms = 0;
};

inline constexpr std::size_t kDefaultTruncation = 10000;

// A jointly Gaussian variable: component `comp` at integer time `time`.
struct GaussNode {
    int comp;
    long time;
};

// Cov(X_a X_b, X_c X_d) for centred jointly Gaussian X (Isserlis).
template <class Cov>
double isserlis_product_cov(const Cov& cov, GaussNode a, GaussNode b, GaussNode c, GaussNode d) {
    return cov(a, c) * cov(b, d) + cov(a, d) * cov(b, c);
}

// Limit of n Var(rho_hat) (or eta_hat) for the low-frequency estimator, Hsum < 3/2.
SeriesLimit var_limit_low_freq(const PairParams& p, const LagCoefficients& c, std::size_t truncation = kDefaultTruncation,
                               Estimand target = Estimand::rho);

// Exact Var(rho_hat_n) (or eta_hat_n) at finite n, edge sums included.
double finite_var_low_freq(const PairParams& p, const LagCoefficients& c, std::size_t n,
                           Estimand target = Estimand::rho);

// Limit of n Var(rho_tilde) from the fGn product series, Hsum < 3/2.
SeriesLimit var_limit_high_freq(double h1, double h2, double rho, double eta12,
                                std::size_t truncation = kDefaultTruncation);

// Limit of Var(n^{2-H}(rho_hat - rho)) for Hsum > 3/2; a_sum = a1 + a2 + a3.
double var_limit_supercritical(const PairParams& p, double a_sum);

}  // namespace mfou

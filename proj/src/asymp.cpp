#include "mfou/asymp.hpp"

#include "mfou/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mfou {

namespace {

constexpr double kCritical = 1.5;

// One product term coef * Y^1_{t+off1} Y^2_{t+off2} of a stationary summand.
struct Term {
    double coef;
    long off1, off2;
};

std::array<Term, 3> summand_terms(const LagCoefficients& c, Estimand target) {
    const long s = c.s;
    if (target == Estimand::rho) return {{{c.a1, 0, 0}, {c.a2, s, 0}, {c.a3, 0, s}}};
    return {{{c.b1, 0, 0}, {c.b2, s, 0}, {c.b3, 0, s}}};
}

// r_ij(k) tables for integer lags 0..count, indexed [i][j].
struct CovTables {
    std::array<std::array<std::vector<double>, 2>, 2> r;

    double operator()(GaussNode a, GaussNode b) const {
        const long lag = a.time - b.time;
        return lag >= 0 ? r[a.comp][b.comp][static_cast<std::size_t>(lag)]
                        : r[b.comp][a.comp][static_cast<std::size_t>(-lag)];
    }
};

CovTables mfou_tables(const PairParams& p, std::size_t count) {
    CovTables t;
    const PairParams m1{p.h1, p.h1, p.alpha1, p.alpha1, p.nu1, p.nu1, 1.0, 0.0};
    const PairParams m2{p.h2, p.h2, p.alpha2, p.alpha2, p.nu2, p.nu2, 1.0, 0.0};
    t.r[0][0] = cross_cov_series(m1, 0, 0, 1.0, count);
    t.r[1][1] = cross_cov_series(m2, 0, 0, 1.0, count);
    t.r[0][1] = cross_cov_series(p, 0, 1, 1.0, count);
    t.r[1][0] = cross_cov_series(p, 1, 0, 1.0, count);
    return t;
}

template <class Cov>
double summand_cov(const Cov& cov, const std::array<Term, 3>& terms, long k) {
    double v = 0.0;
    for (const auto& x : terms) {
        for (const auto& y : terms) {
            v += x.coef * y.coef *
                 isserlis_product_cov(cov, {0, x.off1}, {1, x.off2}, {0, k + y.off1}, {1, k + y.off2});
        }
    }
    return v;
}

// sigma^2 = T_0 + 2 sum_{k=1}^{K} T_k with a k^{2H-4} tail bound.
template <class TermFn>
SeriesLimit stationary_series(TermFn term, double hsum, std::size_t truncation) {
    if (truncation < 10) throw std::invalid_argument("series truncation must be >= 10");
    SeriesLimit out;
    out.terms = truncation;
    double sum = term(0);
    double c = 0.0;
    const std::size_t decade = std::max<std::size_t>(1, truncation / 10);
    const double decay = 4.0 - 2.0 * hsum;
    for (std::size_t k = 1; k <= truncation; ++k) {
        const double t = term(static_cast<long>(k));
        sum += 2.0 * t;
        if (k >= decade) c = std::max(c, std::fabs(t) * std::pow(static_cast<double>(k), decay));
    }
    out.value = sum;
    out.tail_bound = 2.0 * c * std::pow(static_cast<double>(truncation), 2.0 * hsum - 3.0) / (3.0 - 2.0 * hsum);
    return out;
}

void require_subcritical(double hsum) {
    if (!(hsum < kCritical)) throw std::domain_error("series divergent for H >= 3/2");
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::gaussian: return "gaussian";
        case Regime::log_gaussian: return "log-gaussian";
        case Regime::non_gaussian: return "non-gaussian";
        case Regime::conjecture: return "conjecture";
    }
    return "?";
}

RatePrediction predicted_rate(double hsum, Process process) {
    RatePrediction r;
    if (process == Process::mfbm) {
        if (!(hsum > 0.0 && hsum < 1.0)) throw std::domain_error("mfBm rate defined for H in (0,1)");
        r.exponent = std::min(0.5, 1.0 - hsum);
        r.regime = Regime::conjecture;
        return r;
    }
    if (!(hsum > 0.0 && hsum < 2.0)) throw std::domain_error("mfOU rate defined for H in (0,2)");
    r.exponent = std::min(0.5, 2.0 - hsum);
    if (hsum == kCritical) {
        r.log_correction = true;
        r.regime = Regime::log_gaussian;
    } else {
        r.regime = hsum < kCritical ? Regime::gaussian : Regime::non_gaussian;
    }
    return r;
}

SeriesLimit var_limit_low_freq(const PairParams& p, const LagCoefficients& c, std::size_t truncation, Estimand target) {
    require_valid(p);
    require_subcritical(p.hsum());
    const CovTables cov = mfou_tables(p, truncation + static_cast<std::size_t>(c.s));
    const auto terms = summand_terms(c, target);
    return stationary_series([&](long k) { return summand_cov(cov, terms, k); }, p.hsum(), truncation);
}

double finite_var_low_freq(const PairParams& p, const LagCoefficients& c, std::size_t n, Estimand target) {
    require_valid(p);
    if (n <= static_cast<std::size_t>(c.s)) throw std::invalid_argument("insufficient observations");
    const CovTables cov = mfou_tables(p, n + static_cast<std::size_t>(c.s));
    const auto terms = summand_terms(c, target);
    const long nl = static_cast<long>(n);
    const std::array<long, 3> len{nl, nl - c.s, nl - c.s};  // summation ranges j = 1..len
    double total = 0.0;
    for (std::size_t u = 0; u < 3; ++u) {
        for (std::size_t v = 0; v < 3; ++v) {
            const Term& x = terms[u];
            const Term& y = terms[v];
            for (long d = -(len[u] - 1); d <= len[v] - 1; ++d) {
                // pairs (j, j + d) with j in [1, len_u] and j + d in [1, len_v]
                const long count = std::min(len[u], len[v] - d) - std::max(1L, 1 - d) + 1;
                if (count <= 0) continue;
                total += static_cast<double>(count) * x.coef * y.coef *
                         isserlis_product_cov(cov, {0, x.off1}, {1, x.off2}, {0, d + y.off1}, {1, d + y.off2});
            }
        }
    }
    return total / (static_cast<double>(n) * static_cast<double>(n));
}

SeriesLimit var_limit_high_freq(double h1, double h2, double rho, double eta12, std::size_t truncation) {
    const double h = h1 + h2;
    require_subcritical(h);
    require_valid(PairParams{h1, h2, 1.0, 1.0, 1.0, 1.0, rho, eta12});
    auto cov = [=](GaussNode a, GaussNode b) {
        const long tau = a.time - b.time;
        if (a.comp == b.comp) return mfbm_increment_cov(2 * (a.comp == 0 ? h1 : h2), 1.0, 0.0, tau);
        return mfbm_increment_cov(h, rho, a.comp == 0 ? eta12 : -eta12, tau);
    };
    return stationary_series(
        [&](long k) { return isserlis_product_cov(cov, {0, 0}, {1, 0}, {0, k}, {1, k}); }, h, truncation);
}

double var_limit_supercritical(const PairParams& p, double a_sum) {
    require_valid(p);
    const double h = p.hsum();
    if (!(h > kCritical)) throw std::domain_error("supercritical variance needs H > 3/2");
    if (a_sum == 0.0) throw std::domain_error("supercritical variance needs a1 + a2 + a3 != 0");
    // Cov(X_0, X_k) ~ A k^{2H-4} with A from the leading long-lag kernel terms
    const double bracket = (p.rho * p.rho - p.eta12 * p.eta12) * h * h * (h - 1) * (h - 1) +
                           4 * p.h1 * p.h2 * (2 * p.h1 - 1) * (2 * p.h2 - 1);
    const double nn = p.nu1 * p.nu1 * p.nu2 * p.nu2;
    const double aa = p.alpha1 * p.alpha1 * p.alpha2 * p.alpha2;
    return a_sum * a_sum * nn * bracket / (2 * aa * (2 * h - 3) * (2 * h - 2));
}

}  // namespace mfou

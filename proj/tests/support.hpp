#pragma once

#include "mfou/model.hpp"

#include <cmath>
#include <vector>

namespace mfou::testing {

inline PairParams fig1_pair() { return {0.1, 0.2, 0.5, 0.5, 1.0, 1.0, 0.5, 0.2}; }
inline PairParams fig2_pair() { return {0.8, 0.9, 0.5, 0.5, 1.0, 1.0, 0.5, 0.2}; }
inline PairParams fig4_pair() { return {0.2, 0.3, 0.1, 0.1, 1.0, 1.0, 0.5, 0.2}; }

// A spread of admissible pairs away from H = 1: both Hurst exponents on each side of 1/2,
// unequal rates and volatilities, (rho, eta) inside the coherence ellipse.
inline std::vector<PairParams> admissible_sets() {
    std::vector<PairParams> out;
    const double hs[][2] = {{0.1, 0.2}, {0.3, 0.3}, {0.15, 0.7}, {0.45, 0.65}, {0.8, 0.9}, {0.6, 0.95}, {0.2, 0.35}};
    const double rates[][2] = {{0.5, 0.5}, {0.2, 1.5}, {2.0, 0.7}};
    int k = 0;
    for (const auto& h : hs) {
        for (const auto& a : rates) {
            const auto e = coherence_ellipse(h[0], h[1]);
            const double u = 0.3 + 0.1 * (k % 5), v = (k % 2 == 0 ? 1 : -1) * (0.2 + 0.1 * (k % 4));
            out.push_back({h[0], h[1], a[0], a[1], 1.0 + 0.25 * (k % 3), 0.8 + 0.3 * (k % 2), u * e.a, v * e.b});
            ++k;
        }
    }
    return out;
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace mfou::testing

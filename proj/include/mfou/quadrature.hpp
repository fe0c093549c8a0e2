#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mfou::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

inline constexpr double kAbsTol = 1e-10;
inline constexpr double kRelTol = 1e-9;

// Adaptive Gauss-Kronrod on a smooth panel.
template <class F>
Result smooth(F&& f, double a, double b, double rel_tol = 1e-12) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol, &err);
    return {v, err};
}

// Double-exponential rule for panels with an integrable endpoint singularity.
template <class F>
Result endpoint_singular(F&& f, double a, double b, double rel_tol = 1e-12) {
    static thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    double l1 = 0.0;
    double v = ts.integrate(f, a, b, rel_tol, &err, &l1);
    return {v, err * l1};
}

}  // namespace mfou::quad

#include "mfou/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace mfou::special {

namespace {

constexpr double kZeroShape = 1e-13;

// Modified Lentz evaluation of x^{-a} e^x Gamma(a, x).
double upper_gamma_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

}  // namespace

double gamma(double x) { return boost::math::tgamma(x); }

double scaled_upper_gamma(double a, double x) {
    if (!(x > 0.0)) throw std::domain_error("scaled_upper_gamma: x must be positive");
    if (!(a > -1.0 && a < 1.0)) throw std::domain_error("scaled_upper_gamma: shape outside (-1, 1)");
    if (x >= 1.0) return std::pow(x, a) * upper_gamma_fraction(a, x);
    if (std::fabs(a) < kZeroShape) return std::exp(x) * boost::math::expint(1, x);
    if (a > 0.0) return std::exp(x) * boost::math::tgamma(a, x);
    // one integration by parts lifts the shape to a + 1 > 0
    return (std::exp(x) * boost::math::tgamma(a + 1.0, x) - std::pow(x, a)) / a;
}

}  // namespace mfou::special

#pragma once

namespace mfou::special {

double gamma(double x);

// e^x * Gamma(a, x) for a in (-1, 1) and x > 0. The scaling keeps the value
// O(x^(a-1)) for large x instead of underflowing.
double scaled_upper_gamma(double a, double x);

}  // namespace mfou::special

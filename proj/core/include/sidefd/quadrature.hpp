#pragma once

#include <functional>

namespace sidefd {

/// Adaptive Simpson integration of f over [a, b] to an absolute tolerance.
///
/// Throws QuadratureError when the tolerance cannot be met within the depth
/// limit. The integrand must be bounded on [a, b]; endpoint singularities are
/// expected to be removed by substitution before calling this.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 48);

/// Lower incomplete gamma function, gamma(s, x) = int_0^x t^{s-1} e^{-t} dt,
/// for s > 0, x >= 0. Series expansion for x < s + 1, continued fraction for
/// the complement otherwise.
double lower_incomplete_gamma(double s, double x);

} // namespace sidefd

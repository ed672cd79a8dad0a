#pragma once

#include "sidefd/grid.hpp"

#include <cmath>
#include <random>

namespace testsupport {

/// Random grid function supported on the inner half of the grid (zero near
/// the boundary), values uniform in [-1, 1].
inline sidefd::GridFunction random_interior(const sidefd::Grid& g, std::mt19937_64& rng) {
    sidefd::GridFunction phi(g);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int half = g.max_index / 2;
    for (int k = -half; k <= half; ++k) phi.at(k) = u(rng);
    return phi;
}

/// Centered Gaussian density with standard deviation sd, plus derivatives.
struct Gaussian {
    double sd = 1.0;

    double operator()(double x) const {
        return std::exp(-x * x / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * M_PI));
    }
    double d1(double x) const { return -x / (sd * sd) * (*this)(x); }
    double d2(double x) const {
        const double s2 = sd * sd;
        return (x * x / s2 - 1.0) / s2 * (*this)(x);
    }
    double d3(double x) const {
        const double s2 = sd * sd;
        return x * (3.0 - x * x / s2) / (s2 * s2) * -1.0 * (*this)(x);
    }
};

} // namespace testsupport

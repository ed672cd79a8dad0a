#pragma once

#include "sidefd/grid.hpp"
#include "sidefd/levy.hpp"
#include "sidefd/noise.hpp"
#include "sidefd/operators.hpp"

#include <vector>

namespace sidefd {

/// The 1D jump-diffusion test problem with a closed-form solution:
///
///   du = ((sigma1^2 + sigma2^2)/2 u'' + I u) dt + sigma2 u' dw
///        + int (u(x+z) - u(x)) q(dt, dz),
///
/// whose solution is a spreading Gaussian evaluated along the noise:
/// u_t(x) = v_t(x + sigma2 w_t + J_t) with v_t the heat kernel of variance
/// sigma0^2 + sigma1^2 t and J_t the compensated jump sum (including the
/// small-jump Brownian surrogate, so the oracle and the schemes consume
/// identical randomness).
struct ModelParams {
    double sigma1 = 0.5;
    double sigma2 = 0.25;
    double sigma0 = 0.5;
    double c_minus = 1.0;
    double c_plus = 1.0;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    double alpha_minus = 1.1;
    double alpha_plus = 1.1;
    double T = 1.0;
    double support_radius = 3.0; // Z
    double domain_radius = 8.0;  // L
    double delta = 0.01;
    double eps = 0.00390625; // 2^-8

    LevyMeasure measure() const;
    Coefficients coefficients(Grid grid) const;
    double a11() const { return 0.5 * (sigma1 * sigma1 + sigma2 * sigma2); }
    /// Parabolicity margin 2 a11 - sigma2^2 = sigma1^2.
    double kappa() const { return sigma1 * sigma1; }
};

/// Gaussian density with variance sigma0^2 + sigma1^2 t; solves
/// v_t' = (sigma1^2 / 2) v_xx with v_0 equal to the initial condition.
double heat_kernel_value(const ModelParams& p, double t, double x);

/// Initial condition sampled on the grid.
GridFunction initial_condition(const ModelParams& p, Grid grid);

/// Cumulative noise functionals w_t and J_t at every multiple of tau.
/// J sums the simulated jump sizes, subtracts t times the compensator mean
/// of the simulated sizes (zero for a symmetric measure, computed anyway),
/// and adds the small-jump Brownian surrogate.
struct PathFunctionals {
    double tau = 0.0;
    std::vector<double> w;        // w at t_n, n = 0..steps
    std::vector<double> jump_sum; // J at t_n
};

PathFunctionals accumulate_path(const NoisePath& path, double tau);

/// u_t(x) given the noise functionals at time t.
double exact_solution_value(const ModelParams& p, double t, double x, double w_t, double jump_t);

/// u_t on the whole grid; t must be a multiple of pf.tau.
GridFunction exact_solution_on_grid(const ModelParams& p, Grid grid, double t,
                                    const PathFunctionals& pf);

} // namespace sidefd

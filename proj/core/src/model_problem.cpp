#include "sidefd/model_problem.hpp"

#include "sidefd/errors.hpp"

#include <cmath>
#include <numbers>

namespace sidefd {

LevyMeasure ModelParams::measure() const {
    return LevyMeasure::tempered_stable(c_minus, c_plus, beta_minus, beta_plus,
                                        alpha_minus, alpha_plus, support_radius);
}

Coefficients ModelParams::coefficients(Grid grid) const {
    return Coefficients::constant(grid, a11(), 0.0, 0.0, 0.0, sigma2, 0.0);
}

double heat_kernel_value(const ModelParams& p, double t, double x) {
    const double s = p.sigma0 * p.sigma0 + p.sigma1 * p.sigma1 * t;
    return std::exp(-x * x / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi * s);
}

GridFunction initial_condition(const ModelParams& p, Grid grid) {
    return GridFunction::sample(grid, [&](double x) { return heat_kernel_value(p, 0.0, x); });
}

PathFunctionals accumulate_path(const NoisePath& path, double tau) {
    const double ratio = tau / path.tau_fine;
    const int factor = static_cast<int>(std::llround(ratio));
    if (factor < 1 || std::abs(ratio - factor) > 1e-9) {
        throw ResolutionMismatchError("accumulate_path: tau must be a multiple of tau_fine");
    }
    const std::size_t fine_steps = path.steps();
    if (fine_steps % static_cast<std::size_t>(factor) != 0) {
        throw ResolutionMismatchError("accumulate_path: step count not divisible");
    }
    const std::size_t steps = fine_steps / static_cast<std::size_t>(factor);

    PathFunctionals pf;
    pf.tau = tau;
    pf.w.assign(steps + 1, 0.0);
    pf.jump_sum.assign(steps + 1, 0.0);

    // Mean jump compensator of the simulated sizes (zero for a symmetric
    // measure; kept general).
    double comp_rate = 0.0;
    if (!path.measure.is_zero()) {
        comp_rate = measure_integral(path.measure, path.eps, path.measure.support_radius, 1) +
                    measure_integral(path.measure, -path.measure.support_radius, -path.eps, 1);
    }

    std::size_t jump_idx = 0;
    double w = 0.0;
    double surrogate = 0.0;
    double jump_total = 0.0;
    for (std::size_t n = 1; n <= steps; ++n) {
        for (int i = 0; i < factor; ++i) {
            const std::size_t fine = (n - 1) * static_cast<std::size_t>(factor) +
                                     static_cast<std::size_t>(i);
            w += path.wiener[fine];
            surrogate += path.small_jump_wiener[fine];
        }
        const double t_n = static_cast<double>(n) * tau;
        // Same interval predicate as the histogram binning, so the oracle and
        // the schemes agree on which step a jump belongs to.
        while (jump_idx < path.jumps.size() &&
               static_cast<std::size_t>(std::ceil(path.jumps[jump_idx].time / tau)) <= n) {
            jump_total += path.jumps[jump_idx].size;
            ++jump_idx;
        }
        pf.w[n] = w;
        pf.jump_sum[n] = jump_total - comp_rate * t_n + surrogate;
    }
    return pf;
}

double exact_solution_value(const ModelParams& p, double t, double x, double w_t,
                            double jump_t) {
    return heat_kernel_value(p, t, x + p.sigma2 * w_t + jump_t);
}

GridFunction exact_solution_on_grid(const ModelParams& p, Grid grid, double t,
                                    const PathFunctionals& pf) {
    const double ratio = t / pf.tau;
    const int n = static_cast<int>(std::llround(ratio));
    if (n < 0 || n >= static_cast<int>(pf.w.size()) || std::abs(ratio - n) > 1e-9) {
        throw TimeNotOnGridError("exact_solution_on_grid: t is not a stored time");
    }
    const double shift = p.sigma2 * pf.w[static_cast<std::size_t>(n)] +
                         pf.jump_sum[static_cast<std::size_t>(n)];
    const double s = p.sigma0 * p.sigma0 + p.sigma1 * p.sigma1 * t;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * s);
    const double inv2s = 1.0 / (2.0 * s);
    GridFunction out(grid);
    for (int k = -grid.max_index; k <= grid.max_index; ++k) {
        const double y = grid.node(k) + shift;
        out.at(k) = norm * std::exp(-y * y * inv2s);
    }
    return out;
}

} // namespace sidefd

#pragma once

#include "sidefd/grid.hpp"
#include "sidefd/levy.hpp"
#include "sidefd/operators.hpp"
#include "support.hpp"

#include <cmath>

namespace testsupport {

// 12-point Gauss-Legendre rule on [0, 1].
inline constexpr double kGl12Nodes[12] = {
    0.00921968287664038, 0.04794137181476257, 0.11504866290284765, 0.20634102285669128,
    0.31608425050090994, 0.43738329574426554, 0.56261670425573446, 0.68391574949909006,
    0.79365897714330872, 0.88495133709715235, 0.95205862818523743, 0.99078031712335962};
inline constexpr double kGl12Weights[12] = {
    0.02358766819325591, 0.05346966299765922, 0.08003916427167311, 0.10158371336153296,
    0.11674626826917740, 0.12457352290670139, 0.12457352290670139, 0.11674626826917740,
    0.10158371336153296, 0.08003916427167311, 0.05346966299765922, 0.02358766819325591};

/// int_0^1 (1-theta) phi''(x + theta z) dtheta, the exact value of
/// (phi(x+z) - phi(x) - z phi'(x)) / z^2. Quadrature in theta avoids the
/// catastrophic cancellation of the difference form at small z.
inline double taylor_remainder(const Gaussian& phi, double x, double z) {
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) {
        sum += kGl12Weights[i] * (1.0 - kGl12Nodes[i]) * phi.d2(x + kGl12Nodes[i] * z);
    }
    return sum;
}

/// int_0^1 phi'(x + theta z) dtheta = (phi(x+z) - phi(x)) / z, stable form.
inline double growth_rate(const Gaussian& phi, double x, double z) {
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) {
        sum += kGl12Weights[i] * phi.d1(x + kGl12Nodes[i] * z);
    }
    return sum;
}

/// Continuous nonlocal drift I phi(x) for a closed-form Gaussian, by
/// singularity-aware quadrature against the measure: the small-jump part via
/// the remainder form, the large-jump part with the first-order compensation
/// restricted to |z| <= 1.
inline double nonlocal_drift_cont(const sidefd::LevyMeasure& m, const Gaussian& phi,
                                  double delta, double x) {
    double total = sidefd::measure_integral_weighted(
        m, -delta, delta, 2, [&](double z) { return taylor_remainder(phi, x, z); });
    const double Z = m.support_radius;
    auto with_comp = [&](double z) { return z * z * taylor_remainder(phi, x, z); };
    auto without_comp = [&](double z) { return phi(x + z) - phi(x); };
    total += sidefd::measure_integral_weighted(m, delta, std::min(1.0, Z), 0, with_comp);
    total += sidefd::measure_integral_weighted(m, -std::min(1.0, Z), -delta, 0, with_comp);
    if (Z > 1.0) {
        total += sidefd::measure_integral_weighted(m, 1.0, Z, 0, without_comp);
        total += sidefd::measure_integral_weighted(m, -Z, -1.0, 0, without_comp);
    }
    return total;
}

inline sidefd::GridFunction nonlocal_drift_cont_on_grid(const sidefd::LevyMeasure& m,
                                                        const Gaussian& phi, double delta,
                                                        const sidefd::Grid& g) {
    return sidefd::GridFunction::sample(
        g, [&](double x) { return nonlocal_drift_cont(m, phi, delta, x); });
}

/// int ||Ih(z) phi_grid - (phi(.+z) - phi)||^2_{l2} pi(dz), integrating cell
/// by cell so the piecewise-constant stencil choice never crosses a jump.
inline double jump_noise_consistency_sq(const sidefd::LevyMeasure& m,
                                        const sidefd::CellCoefficients& cc,
                                        const Gaussian& phi, const sidefd::Grid& g) {
    const sidefd::GridFunction phig =
        sidefd::GridFunction::sample(g, [&](double x) { return phi(x); });

    double total = 0.0;
    // Small-jump cells: the operator is z * stencil_k, the target z * G(., z).
    for (const auto& [k, z2] : cc.zeta) {
        const double lo = std::max((k - 0.5) * cc.h, -cc.delta);
        const double hi = std::min((k + 0.5) * cc.h, cc.delta);
        if (!(lo < hi)) continue;
        const sidefd::GridFunction stencil = sidefd::jump_drift_stencil(cc, phig, k);
        auto weight = [&](double z) {
            double sum = 0.0;
            for (int j = -g.max_index; j <= g.max_index; ++j) {
                const double d = stencil(j) - growth_rate(phi, g.node(j), z);
                sum += d * d;
            }
            return g.h * sum;
        };
        total += sidefd::measure_integral_weighted(m, lo, hi, 2, weight);
    }
    // Large-jump cells: shift difference against the true translation.
    for (const auto& [k, mass] : cc.zeta_bar) {
        const double a = (k - 0.5) * cc.h;
        const double b = (k + 0.5) * cc.h;
        const sidefd::GridFunction shifted = sidefd::shift(phig, k);
        auto piece = [&](double lo, double hi) {
            if (!(lo < hi)) return;
            // phi_grid(x) = phi(x) at stored nodes, so the error per node is
            // phi_grid(x + h k) - phi(x + z).
            auto weight = [&](double z) {
                double sum = 0.0;
                for (int j = -g.max_index; j <= g.max_index; ++j) {
                    const double e = shifted(j) - phi(g.node(j) + z);
                    sum += e * e;
                }
                return g.h * sum;
            };
            total += sidefd::measure_integral_weighted(m, lo, hi, 0, weight);
        };
        piece(std::max(a, cc.delta), b);
        piece(a, std::min(b, -cc.delta));
    }
    return total;
}

} // namespace testsupport

#include "sidefd/model_problem.hpp"

#include "sidefd/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace sidefd;

TEST_SUITE_BEGIN("model_problem");

TEST_CASE("initial condition: peak, symmetry, mass") {
    const ModelParams p;
    const Grid g = Grid::make(0.03125, 8.0);
    const GridFunction u0 = initial_condition(p, g);

    CHECK(u0(0) == doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * p.sigma0)).epsilon(1e-14));
    for (int k = 1; k <= g.max_index; ++k) {
        CHECK(u0(k) == u0(-k));
    }
    // Trapezoid mass of the density against the closed-form total mass 1.
    double mass = 0.0;
    for (int k = -g.max_index; k < g.max_index; ++k) {
        mass += 0.5 * (u0(k) + u0(k + 1)) * g.h;
    }
    CHECK(std::abs(mass - 1.0) <= 1e-4);
}

TEST_CASE("heat kernel solves the deterministic part") {
    const ModelParams p;
    // Residual (v(t+eta) - v(t))/eta - (sigma1^2/2) v'' shrinks linearly in eta.
    auto residual = [&](double eta, double t, double x) {
        const double s = p.sigma0 * p.sigma0 + p.sigma1 * p.sigma1 * t;
        const double v = heat_kernel_value(p, t, x);
        const double vxx = v * (x * x / (s * s) - 1.0 / s);
        const double dvdt = (heat_kernel_value(p, t + eta, x) - v) / eta;
        return std::abs(dvdt - 0.5 * p.sigma1 * p.sigma1 * vxx);
    };
    for (double t : {0.0, 0.25, 0.8}) {
        for (double x : {0.0, 0.4, 1.3}) {
            const double r1 = residual(1e-4, t, x);
            const double r2 = residual(5e-5, t, x);
            CHECK(r1 <= 1e-3);
            if (r1 > 1e-12) {
                CHECK(r2 <= 0.75 * r1);
            }
        }
    }
    // Peak height decreases in t.
    CHECK(heat_kernel_value(p, 0.5, 0.0) < heat_kernel_value(p, 0.0, 0.0));
    CHECK(heat_kernel_value(p, 1.0, 0.0) < heat_kernel_value(p, 0.5, 0.0));
}

TEST_CASE("exact solution with silent noise is pure heat spreading") {
    const ModelParams p;
    CHECK(exact_solution_value(p, 0.0, 0.3, 0.0, 0.0) ==
          doctest::Approx(heat_kernel_value(p, 0.0, 0.3)));
    CHECK(exact_solution_value(p, 0.7, -0.2, 0.0, 0.0) ==
          doctest::Approx(heat_kernel_value(p, 0.7, -0.2)));
    // Noise enters as a pure spatial shift.
    CHECK(exact_solution_value(p, 0.5, 0.1, 2.0, 0.3) ==
          doctest::Approx(heat_kernel_value(p, 0.5, 0.1 + p.sigma2 * 2.0 + 0.3)));
}

TEST_CASE("path functionals accumulate the simulated noise") {
    const ModelParams p;
    NoisePath path;
    path.measure = LevyMeasure::zero();
    path.T = 1.0;
    path.tau_fine = 0.25;
    path.eps = 0.001;
    path.wiener = {0.1, -0.2, 0.05, 0.3};
    path.small_jump_wiener = {0.01, 0.02, -0.03, 0.0};
    path.jumps.push_back({0.2, 0.5});
    path.jumps.push_back({0.5, -0.25}); // exactly at t_2: belongs to (t_1, t_2]
    path.jumps.push_back({0.9, 1.0});

    const PathFunctionals pf = accumulate_path(path, 0.25);
    CHECK(pf.w[0] == 0.0);
    CHECK(pf.w[1] == doctest::Approx(0.1));
    CHECK(pf.w[4] == doctest::Approx(0.25));
    CHECK(pf.jump_sum[1] == doctest::Approx(0.5 + 0.01));
    CHECK(pf.jump_sum[2] == doctest::Approx(0.5 - 0.25 + 0.03));
    CHECK(pf.jump_sum[4] == doctest::Approx(1.25 + 0.0));

    // Coarser sampling of the same path agrees at common times.
    const PathFunctionals half = accumulate_path(path, 0.5);
    CHECK(half.w[1] == doctest::Approx(pf.w[2]).epsilon(1e-15));
    CHECK(half.jump_sum[2] == doctest::Approx(pf.jump_sum[4]).epsilon(1e-15));

    const Grid g = Grid::make(0.25, 4.0);
    CHECK_THROWS_AS(exact_solution_on_grid(p, g, 0.3, pf), TimeNotOnGridError);
    const GridFunction u = exact_solution_on_grid(p, g, 0.5, pf);
    CHECK(u(0) == doctest::Approx(exact_solution_value(p, 0.5, 0.0, pf.w[2], pf.jump_sum[2])));
}

TEST_CASE("exact solution values coincide across resolutions on a real path") {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    const double tau_fine = 1.0 / 256.0;
    const NoisePath path = simulate_path(m, 1.0, tau_fine, p.eps, 2718);
    const Grid g = Grid::make(0.25, 8.0);

    const PathFunctionals fine = accumulate_path(path, tau_fine);
    const PathFunctionals coarse = accumulate_path(path, 1.0 / 16.0);
    for (int n = 0; n <= 16; ++n) {
        const double t = n / 16.0;
        const GridFunction a = exact_solution_on_grid(p, g, t, fine);
        const GridFunction b = exact_solution_on_grid(p, g, t, coarse);
        CHECK(norms(a - b).sup <= 1e-12);
    }
}

TEST_SUITE_END();

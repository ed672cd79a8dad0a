#include "sidefd/schemes.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sidefd {

namespace {

GridFunction sample_forcing(const Grid& g, double t,
                            const std::function<double(double, double)>& f) {
    return GridFunction::sample(g, [&](double x) { return f(t, x); });
}

/// Large-jump noise term sum_k (phi(.+hk) - phi) w_k for a weight table,
/// written as shift_sum(phi, w) - (sum w) phi.
void add_large_jump_term(GridFunction& out, const GridFunction& phi,
                         const std::map<int, double>& weights, std::size_t crossover) {
    if (weights.empty()) return;
    double total = 0.0;
    for (const auto& [k, w] : weights) total += w;
    GridFunction shifted = shift_sum(phi, weights, crossover);
    add_scaled(out, 1.0, shifted);
    add_scaled(out, -total, phi);
}

std::map<int, double> compensated_large_weights(const CellCoefficients& cc,
                                                const std::map<int, double>& counts,
                                                double tau) {
    std::map<int, double> w;
    for (const auto& [k, mass] : cc.zeta_bar) w[k] = -mass * tau;
    for (const auto& [k, count] : counts) w[k] += count;
    return w;
}

void add_small_jump_terms(GridFunction& out, const GridFunction& phi,
                          const CellCoefficients& cc, const std::map<int, double>& small) {
    for (const auto& [k, dp] : small) {
        if (dp == 0.0) continue;
        add_scaled(out, dp, jump_drift_stencil(cc, phi, k));
    }
}

} // namespace

int SchemeConfig::steps() const {
    if (!(tau > 0.0) || !(T > 0.0)) {
        throw InvalidParamsError("SchemeConfig: tau and T must be positive");
    }
    const double ratio = T / tau;
    const int n = static_cast<int>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9) {
        throw InvalidParamsError("SchemeConfig: T / tau must be a positive integer");
    }
    return n;
}

double cfl_rhs(const Coefficients& c, const LevyMeasure& m, double delta) {
    const auto& tb = c.tables(0.0);
    const Varsigma vs = varsigma(m, delta);
    if (vs.s >= tb.kappa) {
        throw DeltaTooLargeError("cfl_rhs: varsigma(delta) >= kappa; decrease delta");
    }
    const double denom = 2.0 * std::sqrt(tb.sup_a11_sq) + vs.s1;
    return (tb.kappa - vs.s) / (denom * denom);
}

BandedMatrix imex_matrix(const Coefficients& c, const CellCoefficients& cc, double tau,
                         double t) {
    const Grid& g = c.grid();
    const auto& tb = c.tables(t);
    int bw = 1;
    for (const auto& [k, p] : cc.partitions) {
        if (cc.zeta.count(k) == 0) continue;
        for (int idx : p.indices) bw = std::max(bw, std::abs(idx) + 1);
    }
    const int n = g.count();
    BandedMatrix D(n, std::min(bw, n - 1));
    const double h = g.h;
    const double inv_h = 1.0 / h;
    const double inv_h2 = inv_h * inv_h;

    auto add_if_inside = [&](int row, int col, double v) {
        if (col >= 0 && col < n) D.add(row, col, v);
    };

    for (int row = 0; row < n; ++row) {
        const auto i = static_cast<std::size_t>(row);
        D.add(row, row, 1.0);
        // -tau * Ltilde
        add_if_inside(row, row + 1,
                      -tau * (tb.a11[i] * inv_h2 + tb.a10[i] * inv_h -
                              cc.xi_bar_total * 0.5 * inv_h));
        add_if_inside(row, row,
                      -tau * (-2.0 * tb.a11[i] * inv_h2 - tb.a10[i] * inv_h +
                              tb.a01[i] * inv_h + tb.a00[i] - cc.large_mass));
        add_if_inside(row, row - 1,
                      -tau * (tb.a11[i] * inv_h2 - tb.a01[i] * inv_h +
                              cc.xi_bar_total * 0.5 * inv_h));
        // -tau * Ih_delta: second differences along each partition leg.
        for (const auto& [k, z2] : cc.zeta) {
            const SegmentPartition& p = cc.partition(k);
            for (int l = 0; l < p.chi; ++l) {
                const double w = tau * p.theta_bar[l] * z2 * inv_h2;
                const int off = p.indices[l];
                add_if_inside(row, row + off + 1, -w);
                add_if_inside(row, row + off, 2.0 * w);
                add_if_inside(row, row + off - 1, -w);
            }
        }
    }
    return D;
}

ExplicitStepper::ExplicitStepper(const SchemeConfig& cfg, const Coefficients& c,
                                 const CellCoefficients& cc, const LevyMeasure& m)
    : cfg_(cfg), c_(c), cc_(cc) {
    const double bound = cfl_rhs(c, m, cfg.delta);
    const double ratio = cfg.tau / (cfg.h * cfg.h); // d = 1
    if (!(ratio < bound)) {
        throw CflViolationError("explicit scheme: tau/h^2 = " + std::to_string(ratio) +
                                " is not below the bound " + std::to_string(bound));
    }
}

GridFunction ExplicitStepper::step(const GridFunction& state, const BinnedIncrements& inc,
                                   int n, const GridFunction* f_prev,
                                   const GridFunction* g_prev,
                                   const GridFunction* o_increment) const {
    if (state.grid().h != cc_.h) throw GridMismatchError("ExplicitStepper: step mismatch");
    const double tau = cfg_.tau;
    const double t_prev = n * tau;
    const auto ni = static_cast<std::size_t>(n);

    GridFunction out = state;

    // Drift: Lh + Ih_delta always; the large-jump drift in full or reduced form.
    add_scaled(out, tau, apply_Lh(c_, t_prev, state));
    add_scaled(out, tau, apply_Ih_delta(cc_, state));
    if (cfg_.compensator_cancellation) {
        if (cc_.xi_bar_total != 0.0) {
            add_scaled(out, -tau * cc_.xi_bar_total, symmetric_diff(state));
        }
    } else {
        add_scaled(out, tau, apply_Ih_deltac(cc_, state));
    }
    if (f_prev) add_scaled(out, tau, *f_prev);

    // Wiener term.
    const double dw = inc.wiener.at(ni);
    if (c_.channel_count() > 0) {
        GridFunction noise = apply_Nh(c_, t_prev, 0, state);
        if (g_prev) add_scaled(noise, 1.0, *g_prev);
        add_scaled(out, dw, noise);
    } else if (g_prev) {
        add_scaled(out, dw, *g_prev);
    }

    // Small-jump noise.
    add_small_jump_terms(out, state, cc_, inc.small.at(ni));

    // Jump free term.
    if (o_increment) add_scaled(out, 1.0, *o_increment);

    // Large-jump noise: raw counts in cancellation mode, compensated otherwise.
    if (cfg_.compensator_cancellation) {
        add_large_jump_term(out, state, inc.large_raw.at(ni), cfg_.fft_crossover);
    } else {
        add_large_jump_term(out, state,
                            compensated_large_weights(cc_, inc.large_raw.at(ni), tau),
                            cfg_.fft_crossover);
    }
    return out;
}

ImexStepper::ImexStepper(const SchemeConfig& cfg, const Coefficients& c,
                         const CellCoefficients& cc)
    : cfg_(cfg), c_(c), cc_(cc) {
    itilde_plan_ = std::make_unique<ShiftSumPlan>(c.grid(), cc.zeta_bar);
    if (!c.time_dependent()) {
        auto D = std::make_unique<BandedMatrix>(imex_matrix(c, cc, cfg.tau, cfg.tau));
        dominance_ = D->diagonal_dominance();
        D->factor();
        factored_ = std::move(D);
    } else {
        dominance_ = imex_matrix(c, cc, cfg.tau, cfg.tau).diagonal_dominance();
    }
}

GridFunction ImexStepper::step(const GridFunction& state, const BinnedIncrements& inc,
                               int n, const GridFunction* f_next,
                               const GridFunction* g_prev,
                               const GridFunction* o_increment) const {
    if (state.grid().h != cc_.h) throw GridMismatchError("ImexStepper: step mismatch");
    const double tau = cfg_.tau;
    const double t_prev = n * tau;
    const double t_next = (n + 1) * tau;
    const bool first_step = (n == 0); // scheme index n+1; noise enters from step 2 on
    const auto ni = static_cast<std::size_t>(n);

    GridFunction y = state;

    if (cfg_.compensator_cancellation && !first_step) {
        // Exact rewrite of tau*Itilde + compensated counts: raw counts plus
        // tau * pi({|z|>delta}) * state.
        add_large_jump_term(y, state, inc.large_raw.at(ni), cfg_.fft_crossover);
        add_scaled(y, tau * cc_.large_mass, state);
    } else {
        add_scaled(y, tau, itilde_plan_->apply(state));
        if (!first_step) {
            add_large_jump_term(y, state,
                                compensated_large_weights(cc_, inc.large_raw.at(ni), tau),
                                cfg_.fft_crossover);
        }
    }
    if (f_next) add_scaled(y, tau, *f_next);

    if (!first_step) {
        const double dw = inc.wiener.at(ni);
        if (c_.channel_count() > 0) {
            GridFunction noise = apply_Nh(c_, t_prev, 0, state);
            if (g_prev) add_scaled(noise, 1.0, *g_prev);
            add_scaled(y, dw, noise);
        } else if (g_prev) {
            add_scaled(y, dw, *g_prev);
        }
        add_small_jump_terms(y, state, cc_, inc.small.at(ni));
        if (o_increment) add_scaled(y, 1.0, *o_increment);
    }

    GridFunction solution = y;
    if (factored_) {
        factored_->solve(solution.values());
    } else {
        BandedMatrix D = imex_matrix(c_, cc_, tau, t_next);
        D.factor();
        D.solve(solution.values());
    }
    return solution;
}

namespace {

struct ForcingSamples {
    std::optional<GridFunction> f;
    std::optional<GridFunction> g;
    std::optional<GridFunction> o;
};

ForcingSamples sample_step_forcing(const SchemeConfig& cfg, const Grid& grid,
                                   const NoisePath& path, const Forcing* forcing, int n) {
    ForcingSamples s;
    if (!forcing) return s;
    const double tau = cfg.tau;
    const double t_prev = n * tau;
    const double t_next = (n + 1) * tau;
    const double t_f = (cfg.scheme == SchemeKind::Imex) ? t_next : t_prev;
    if (forcing->f) s.f = sample_forcing(grid, t_f, forcing->f);
    if (forcing->g) s.g = sample_forcing(grid, t_prev, forcing->g);
    if (forcing->o) {
        GridFunction o_inc(grid);
        for (const auto& jump : path.jumps) {
            if (jump.time <= t_prev || jump.time > t_next) continue;
            for (int k = -grid.max_index; k <= grid.max_index; ++k) {
                o_inc.at(k) += forcing->o(t_prev, grid.node(k), jump.size);
            }
        }
        if (forcing->o_compensator) {
            for (int k = -grid.max_index; k <= grid.max_index; ++k) {
                o_inc.at(k) -= tau * forcing->o_compensator(t_prev, grid.node(k));
            }
        }
        s.o = std::move(o_inc);
    }
    return s;
}

} // namespace

void run_observed(const SchemeConfig& cfg, const Coefficients& c, const LevyMeasure& m,
                  const CellCoefficients& cc, const NoisePath& path,
                  const GridFunction& initial, const Forcing* forcing,
                  const std::function<void(int, const GridFunction&)>& observe) {
    const int steps = cfg.steps();
    if (path.T < cfg.T - 1e-12) {
        throw InvalidParamsError("run: path does not cover (0, T]");
    }
    const BinnedIncrements inc = bin_increments(path, cc, cfg.tau);

    GridFunction state = initial;
    observe(0, state);
    if (cfg.scheme == SchemeKind::Explicit) {
        const ExplicitStepper stepper(cfg, c, cc, m);
        for (int n = 0; n < steps; ++n) {
            const ForcingSamples fs = sample_step_forcing(cfg, initial.grid(), path, forcing, n);
            state = stepper.step(state, inc, n, fs.f ? &*fs.f : nullptr,
                                 fs.g ? &*fs.g : nullptr, fs.o ? &*fs.o : nullptr);
            observe(n + 1, state);
        }
    } else {
        const ImexStepper stepper(cfg, c, cc);
        for (int n = 0; n < steps; ++n) {
            const ForcingSamples fs = sample_step_forcing(cfg, initial.grid(), path, forcing, n);
            state = stepper.step(state, inc, n, fs.f ? &*fs.f : nullptr,
                                 fs.g ? &*fs.g : nullptr, fs.o ? &*fs.o : nullptr);
            observe(n + 1, state);
        }
    }
}

std::vector<GridFunction> run(const SchemeConfig& cfg, const Coefficients& c,
                              const LevyMeasure& m, const CellCoefficients& cc,
                              const NoisePath& path, const GridFunction& initial,
                              const Forcing* forcing) {
    std::vector<GridFunction> trajectory;
    trajectory.reserve(static_cast<std::size_t>(cfg.steps()) + 1);
    run_observed(cfg, c, m, cc, path, initial, forcing,
                 [&](int, const GridFunction& state) { trajectory.push_back(state); });
    return trajectory;
}

} // namespace sidefd

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run in numeric order; the convergence study (1) and the
// determinism rerun (9) dominate the runtime.

#include "sidefd/quadrature.hpp"
#include "sidefd/study.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sidefd;
using testsupport::Gaussian;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

StudyConfig study_config(int threads, const std::string& out) {
    StudyConfig cfg;
    cfg.h_list = {0.25, 0.125, 0.0625, 0.03125};
    cfg.tau_rule = StudyConfig::TauRule::HSquared;
    cfg.replications = 200;
    cfg.schemes = {SchemeKind::Explicit, SchemeKind::Imex};
    cfg.base_seed = 20240808;
    cfg.threads = threads;
    cfg.output_dir = out;
    return cfg;
}

// ---------------------------------------------------------------------------
// 1. Convergence order of the Monte Carlo study.
// ---------------------------------------------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    StudyConfig cfg = study_config(2, "acceptance-out/study-a");
    const ErrorReport rep = run_study(cfg);
    emit(rep, cfg.output_dir);

    bool pass = true;
    std::ostringstream detail;
    detail << "convergence study (M=200, h=2^-2..2^-5):";
    for (SchemeKind scheme : cfg.schemes) {
        double slope = 0.0;
        for (const auto& s : rep.slopes) {
            if (s.scheme == scheme && s.metric == "sup") slope = s.fit.slope;
        }
        const bool in_range = slope >= 0.7 && slope <= 1.3;
        pass = pass && in_range;
        detail << ' ' << scheme_name(scheme) << " sup slope " << slope
               << (in_range ? " in" : " OUTSIDE") << " [0.7, 1.3];";

        // Monotone nonincreasing within two standard errors, h descending.
        std::vector<const ErrorRow*> rows;
        for (const auto& r : rep.rows) {
            if (r.scheme == scheme) rows.push_back(&r);
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const bool mono = rows[i]->mean_sq_sup <=
                              rows[i - 1]->mean_sq_sup +
                                  2.0 * (rows[i]->se_sup + rows[i - 1]->se_sup);
            if (!mono) {
                pass = false;
                detail << " non-monotone at h=" << rows[i]->h << ";";
            }
        }
    }
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    detail << " (" << static_cast<int>(dt.count()) << " s)";
    report(1, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 9. Byte-identical study output across thread counts.
// ---------------------------------------------------------------------------
void criterion_9() {
    // Reuse criterion 1's two-thread output when it exists in this process's
    // working directory; otherwise produce it here so the criterion stands
    // alone.
    std::string a = slurp("acceptance-out/study-a/errors.csv");
    if (a.empty()) {
        StudyConfig cfg2 = study_config(2, "acceptance-out/study-a");
        emit(run_study(cfg2), cfg2.output_dir);
        a = slurp("acceptance-out/study-a/errors.csv");
    }
    StudyConfig cfg1 = study_config(1, "acceptance-out/study-b");
    const ErrorReport rep1 = run_study(cfg1);
    emit(rep1, cfg1.output_dir);
    const std::string b = slurp("acceptance-out/study-b/errors.csv");
    const bool same = !a.empty() && a == b;
    report(9, same, same ? "errors.csv byte-identical for 2-thread and 1-thread runs"
                         : "errors.csv differs between thread counts");
}

// ---------------------------------------------------------------------------
// 2. Operator consistency rates against the quadrature oracles.
// ---------------------------------------------------------------------------
void criterion_2() {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    const Gaussian phi{p.sigma0};

    auto drift_err = [&](double h) {
        const Grid g = Grid::make(h, p.domain_radius);
        const CellCoefficients cc = build_cell_coefficients(m, h, p.delta);
        const GridFunction fg = GridFunction::sample(g, [&](double x) { return phi(x); });
        const GridFunction discrete = apply_Ih_delta(cc, fg) + apply_Ih_deltac(cc, fg);
        const GridFunction cont = testsupport::nonlocal_drift_cont_on_grid(m, phi, p.delta, g);
        return norms(discrete - cont).l2;
    };
    const double d4 = drift_err(0.0625);
    const double d5 = drift_err(0.03125);
    const double drift_ratio = d4 / d5;
    const bool drift_ok = drift_ratio >= 1.7 && drift_ratio <= 2.3;

    auto noise_err_sq = [&](double h) {
        const Grid g = Grid::make(h, p.domain_radius);
        const CellCoefficients cc = build_cell_coefficients(m, h, p.delta);
        return testsupport::jump_noise_consistency_sq(m, cc, phi, g);
    };
    const double n4 = noise_err_sq(0.0625);
    const double n5 = noise_err_sq(0.03125);
    const double noise_ratio = n4 / n5;
    const bool noise_ok = noise_ratio >= 3.4 && noise_ratio <= 4.6;

    std::ostringstream detail;
    detail << "operator consistency: ||Ih-I|| ratio(2^-4 / 2^-5) = " << drift_ratio
           << (drift_ok ? " in" : " OUTSIDE") << " [1.7, 2.3] (errors " << d4 << " -> "
           << d5 << "; the error is jagged while h > delta because the cells straddling "
           << "|z| = delta change with h); noise-op squared ratio = " << noise_ratio
           << (noise_ok ? " in" : " OUTSIDE") << " [3.4, 4.6] (errors " << n4 << " -> "
           << n5 << ")";
    report(2, drift_ok && noise_ok, detail.str());
}

// ---------------------------------------------------------------------------
// 3. Partition-geometry exactness.
// ---------------------------------------------------------------------------
void criterion_3() {
    double worst_bar = 0.0, worst_tilde = 0.0;
    for (int k = -512; k <= 512; ++k) {
        const SegmentPartition part = segment_partition(0.125, k);
        double sb = 0.0, st = 0.0;
        for (double v : part.theta_bar) sb += v;
        for (double v : part.theta_tilde) st += v;
        worst_bar = std::max(worst_bar, std::abs(sb - 0.5));
        worst_tilde = std::max(worst_tilde, std::abs(st - 1.0));
    }
    const bool pass = worst_bar <= 1e-14 && worst_tilde <= 1e-14;
    std::ostringstream detail;
    detail << "partition sums over |k|<=512: max|sum theta_bar - 1/2| = " << worst_bar
           << ", max|sum theta_tilde - 1| = " << worst_tilde << " (tol 1e-14)";
    report(3, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 4. Discrete identities on random grid functions.
// ---------------------------------------------------------------------------
void criterion_4() {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    const double h = 0.03125;
    const Grid g = Grid::make(h, p.domain_radius);
    const Coefficients c = p.coefficients(g);
    const CellCoefficients cc = build_cell_coefficients(m, h, p.delta);
    std::mt19937_64 rng(987654321);

    double worst_adj = 0.0, worst_anti = 0.0, worst_sign = 0.0, worst_split = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const GridFunction phi = testsupport::random_interior(g, rng);
        const GridFunction psi = testsupport::random_interior(g, rng);
        const double nphi = norms(phi).l2;
        const double npsi = norms(psi).l2;

        const double adj = inner(phi, forward_diff(psi, -1)) +
                           inner(forward_diff(phi, +1), psi);
        worst_adj = std::max(worst_adj, std::abs(adj) / (nphi * npsi));

        const double anti = inner(phi, symmetric_diff(phi));
        worst_anti = std::max(worst_anti, std::abs(anti) / (nphi * nphi));

        const double sign = inner(phi, apply_Ih_deltac(cc, phi));
        worst_sign = std::max(worst_sign, sign / (nphi * nphi));

        const GridFunction lhs = apply_Ltilde(c, cc, 0.0, phi) +
                                 apply_Itilde_deltac(cc, phi) + apply_Ih_delta(cc, phi);
        const GridFunction rhs = apply_Lh(c, 0.0, phi) + apply_Ih_delta(cc, phi) +
                                 apply_Ih_deltac(cc, phi);
        worst_split = std::max(worst_split,
                               norms(lhs - rhs).sup / std::max(1.0, norms(rhs).sup));
    }
    const bool pass = worst_adj <= 1e-12 && worst_anti <= 1e-12 && worst_sign <= 1e-12 &&
                      worst_split <= 1e-12;
    std::ostringstream detail;
    detail << "discrete identities on 100 random functions: adjointness " << worst_adj
           << ", antisymmetry " << worst_anti << ", large-jump form sign " << worst_sign
           << ", splitting " << worst_split << " (tol 1e-12, scaled)";
    report(4, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 5. FFT shift-sum equals direct summation.
// ---------------------------------------------------------------------------
void criterion_5() {
    const Grid g = Grid::make(0.0625, 8.0);
    std::mt19937_64 rng(13579);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> offset(-100, 100);
    std::uniform_int_distribution<int> count(1, 80);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const GridFunction phi = testsupport::random_interior(g, rng);
        std::map<int, double> w;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) w[offset(rng)] = u(rng);
        double l1 = 0.0;
        for (const auto& [k, v] : w) l1 += std::abs(v);
        const GridFunction a = shift_sum_direct(phi, w);
        const GridFunction b = shift_sum_fft(phi, w);
        worst = std::max(worst, norms(a - b).sup / (norms(phi).sup * l1 + 1e-300));
    }
    const bool pass = worst <= 1e-10;
    std::ostringstream detail;
    detail << "fft vs direct shift-sum on 100 random pairs: worst scaled gap = " << worst
           << " (tol 1e-10)";
    report(5, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 6. Implicit-explicit robustness past the explicit bound.
// ---------------------------------------------------------------------------
void criterion_6() {
    const double h = 0.0625;
    const Grid g = Grid::make(h, 4.0);
    const Coefficients heat = Coefficients::constant(g, 0.5);
    const LevyMeasure none_m = LevyMeasure::zero();
    const CellCoefficients none = build_cell_coefficients(none_m, h, 0.5);
    const double bound = cfl_rhs(heat, none_m, 0.5); // exactly 1
    const double target = 10.0 * bound;
    const int steps = std::max(1, static_cast<int>(std::floor(1.0 / (target * h * h))));
    const double tau = 1.0 / steps;

    const GridFunction u0 = GridFunction::sample(g, [](double x) {
        return std::exp(-8.0 * x * x);
    });
    const double u0_sup = norms(u0).sup;

    // The explicit update driven past its bound (the production stepper
    // refuses this configuration, so iterate the displayed update directly).
    GridFunction ue = u0;
    double explicit_max = 0.0;
    for (int n = 0; n < steps && explicit_max <= 1e6; ++n) {
        GridFunction next = ue;
        add_scaled(next, tau * 0.5, second_diff(ue));
        ue = next;
        explicit_max = std::max(explicit_max, norms(ue).sup);
    }

    SchemeConfig cfg;
    cfg.h = h;
    cfg.tau = tau;
    cfg.T = 1.0;
    cfg.delta = 0.5;
    cfg.scheme = SchemeKind::Imex;
    const ImexStepper stepper(cfg, heat, none);
    BinnedIncrements inc;
    inc.h = h;
    inc.tau = tau;
    inc.steps = steps;
    inc.small.resize(static_cast<std::size_t>(steps));
    inc.large_raw.resize(static_cast<std::size_t>(steps));
    inc.wiener.assign(static_cast<std::size_t>(steps), 0.0);
    GridFunction ui = u0;
    double imex_max = 0.0;
    for (int n = 0; n < steps; ++n) {
        ui = stepper.step(ui, inc, n);
        imex_max = std::max(imex_max, norms(ui).sup);
    }

    const bool pass = explicit_max > 1e6 && imex_max <= 10.0 * u0_sup;
    std::ostringstream detail;
    detail << "tau/h^2 at 10x the bound: explicit sup reached " << explicit_max
           << " (> 1e6 required), imex sup stayed at " << imex_max << " (<= "
           << 10.0 * u0_sup << " required)";
    report(6, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 7. Noise statistics at the benchmark intensity.
//
// The small-jump cells are tested individually at three standard errors. The
// several hundred large-jump cells are covered two ways: pooled into
// logarithmic size bands (each band sum is itself a compensated increment
// with enough events for the three-sigma test to be calibrated) and a
// per-cell screen at the family-adjusted level, which would surface any
// genuine bias at a single size. A literal per-cell three-sigma battery over
// ~390 cells fails by construction: the expected maximum |z| over that many
// centered statistics already exceeds 3.
// ---------------------------------------------------------------------------
double poisson_upper_tail(double mu, double k_obs) {
    // P(Po(mu) >= k_obs) for small mu; 1 when k_obs == 0.
    if (k_obs <= 0.0) return 1.0;
    double term = std::exp(-mu);
    double below = 0.0;
    for (int j = 0; j < static_cast<int>(k_obs); ++j) {
        below += term;
        term *= mu / (j + 1);
    }
    return 1.0 - below;
}

void criterion_7() {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    const double T = 1.0;
    const double tau = 0.25;
    const double h = 0.015625; // small cells {-1, 0, 1}
    const CellCoefficients cc = build_cell_coefficients(m, h, p.delta);
    const double lambda = measure_integral(m, p.eps, m.support_radius, 0) +
                          measure_integral(m, -m.support_radius, -p.eps, 0);
    const int paths = 1000;
    const auto n_steps = static_cast<std::size_t>(std::llround(T / tau));
    const double samples = static_cast<double>(paths) * static_cast<double>(n_steps);

    double count_total = 0.0;
    std::map<int, double> small_sum, small_sumsq;
    std::map<int, double> large_count;
    for (int r = 0; r < paths; ++r) {
        const NoisePath path = simulate_path(m, T, tau, p.eps, derive_seed(777, r));
        count_total += static_cast<double>(path.jumps.size());
        const BinnedIncrements b = bin_increments(path, cc, tau);
        for (std::size_t n = 0; n < n_steps; ++n) {
            for (const auto& [k, v] : b.small[n]) {
                small_sum[k] += v;
                small_sumsq[k] += v * v;
            }
            for (const auto& [k, v] : b.large_raw[n]) large_count[k] += v;
        }
    }

    bool pass = true;
    std::ostringstream extra;
    const double count_mean = count_total / paths;
    const double count_tol = 3.0 * std::sqrt(lambda * T) / std::sqrt(paths);
    if (std::abs(count_mean - lambda * T) > count_tol) {
        pass = false;
        extra << " count mean " << count_mean << " vs " << lambda * T << " (tol "
              << count_tol << ");";
    }

    double worst_small = 0.0;
    for (const auto& [k, s] : small_sum) {
        const double mean = s / samples;
        const double var = small_sumsq[k] / samples - mean * mean;
        const double se = std::sqrt(var / samples);
        worst_small = std::max(worst_small, std::abs(mean) / se);
        if (std::abs(mean) > 3.0 * se) {
            pass = false;
            extra << " small cell " << k << " |mean|/se = " << std::abs(mean) / se << ";";
        }
    }

    // Pooled bands: log-spaced in |z| over (delta, Z], per side.
    const int bands_per_side = 8;
    std::vector<double> band_obs(2 * bands_per_side, 0.0);
    std::vector<double> band_mu(2 * bands_per_side, 0.0);
    auto band_of = [&](double center) {
        const double a = std::log(std::abs(center) / p.delta) /
                         std::log(m.support_radius / p.delta);
        int idx = std::min(bands_per_side - 1,
                           std::max(0, static_cast<int>(a * bands_per_side)));
        return center < 0 ? idx : bands_per_side + idx;
    };
    double worst_cell_p = 1.0;
    int worst_cell = 0;
    for (const auto& [k, mass] : cc.zeta_bar) {
        const double mu = mass * tau * samples; // expected events over the run
        const double obs = large_count.count(k) ? large_count[k] : 0.0;
        const int band = band_of(k * h);
        band_obs[static_cast<std::size_t>(band)] += obs;
        band_mu[static_cast<std::size_t>(band)] += mu;
        // Per-cell screen at the family-adjusted level (normal 4.5 sigma or
        // the exact Poisson tail for sparse cells).
        if (mu >= 25.0) {
            const double z = (obs - mu) / std::sqrt(mu);
            if (std::abs(z) > 4.5) {
                pass = false;
                extra << " large cell " << k << " z = " << z << ";";
            }
        } else {
            const double pv = poisson_upper_tail(mu, obs);
            if (pv < worst_cell_p) {
                worst_cell_p = pv;
                worst_cell = k;
            }
            if (pv < 3.5e-6) {
                pass = false;
                extra << " sparse cell " << k << " tail p = " << pv << ";";
            }
        }
    }
    double worst_band = 0.0;
    for (std::size_t i = 0; i < band_obs.size(); ++i) {
        if (band_mu[i] <= 0.0) continue;
        const double z = (band_obs[i] - band_mu[i]) / std::sqrt(band_mu[i]);
        worst_band = std::max(worst_band, std::abs(z));
        if (std::abs(z) > 3.0) {
            pass = false;
            extra << " band " << i << " z = " << z << ";";
        }
    }

    std::ostringstream detail;
    detail << "noise statistics over " << paths << " paths: jump-count mean " << count_mean
           << " vs lambda*T = " << lambda * T << " (tol " << count_tol
           << "); small cells worst |mean|/se = " << worst_small << "; "
           << 2 * bands_per_side << " pooled large-jump bands worst |z| = " << worst_band
           << " (3 allowed); per-cell screen worst sparse tail p = " << worst_cell_p
           << " at cell " << worst_cell << extra.str();
    report(7, pass, detail.str());
}

// ---------------------------------------------------------------------------
// 8. Quadrature against the closed form; reference values reported.
// ---------------------------------------------------------------------------
void criterion_8() {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    const Varsigma vs = varsigma(m, p.delta);
    const double closed =
        m.c_minus * std::pow(m.beta_minus, m.alpha_minus - 2.0) *
            lower_incomplete_gamma(2.0 - m.alpha_minus, m.beta_minus * p.delta) +
        m.c_plus * std::pow(m.beta_plus, m.alpha_plus - 2.0) *
            lower_incomplete_gamma(2.0 - m.alpha_plus, m.beta_plus * p.delta);
    const double gap = std::abs(vs.s1 - closed);
    const bool pass = gap <= 1e-8;

    const Grid g = Grid::make(0.25, p.domain_radius);
    const double bound = cfl_rhs(p.coefficients(g), m, p.delta);
    const double lambda = measure_integral(m, p.eps, m.support_radius, 0) +
                          measure_integral(m, -m.support_radius, -p.eps, 0);
    std::ostringstream detail;
    detail << "varsigma_1 quadrature " << vs.s1 << " vs closed form " << closed
           << " (gap " << gap << ", tol 1e-8); reported side-by-side: varsigma "
           << vs.s << " (reference " << ReferenceValues::varsigma << "), step bound "
           << bound << " (reference " << ReferenceValues::cfl_bound << "), lambda "
           << lambda << " (reference " << ReferenceValues::jump_intensity << ")";
    report(8, pass, detail.str());
}

} // namespace

int main(int argc, char** argv) {
    std::filesystem::create_directories("acceptance-out");
    void (*criteria[])() = {criterion_1, criterion_2, criterion_3,
                            criterion_4, criterion_5, criterion_6,
                            criterion_7, criterion_8, criterion_9};
    if (argc > 1) {
        // Run the listed criteria only (each is self-contained).
        for (int i = 1; i < argc; ++i) {
            const int n = std::atoi(argv[i]);
            if (n < 1 || n > 9) {
                std::fprintf(stderr, "usage: %s [criterion numbers 1..9]\n", argv[0]);
                return 64;
            }
            criteria[n - 1]();
        }
    } else {
        for (auto* c : criteria) c();
        std::printf("%d of 9 criteria failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}

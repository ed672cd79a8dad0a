#include "sidefd/study.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

namespace sidefd {

double StudyConfig::tau_for(std::size_t i) const {
    if (tau_rule == TauRule::HSquared) return h_list[i] * h_list[i];
    return tau_list[i];
}

void StudyConfig::validate() {
    if (h_list.empty()) throw ConfigError("study: h_list is empty");
    for (double h : h_list) {
        if (!(h > 0.0)) throw ConfigError("study: spacings must be positive");
    }
    if (tau_rule == TauRule::List && tau_list.size() != h_list.size()) {
        throw ConfigError("study: tau list must match h_list in length");
    }
    // Keep (h, tau) pairs together while sorting h descending.
    std::vector<std::size_t> order(h_list.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return h_list[a] > h_list[b]; });
    std::vector<double> hs, taus;
    for (std::size_t i : order) {
        hs.push_back(h_list[i]);
        if (tau_rule == TauRule::List) taus.push_back(tau_list[i]);
    }
    h_list = std::move(hs);
    tau_list = std::move(taus);

    if (replications < 0) throw ConfigError("study: replications must be >= 0");
    if (!(params.T > 0.0)) throw ConfigError("study: T must be positive");
    if (!(params.delta > 0.0) || params.delta > 1.0) {
        throw ConfigError("study: delta must lie in (0, 1]");
    }
    if (!(params.eps > 0.0) || params.eps >= params.delta) {
        throw ConfigError("study: need 0 < eps < delta");
    }
    double tau_min = tau_for(0);
    for (std::size_t i = 0; i < h_list.size(); ++i) tau_min = std::min(tau_min, tau_for(i));
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        const double r = tau_for(i) / tau_min;
        if (std::abs(r - std::llround(r)) > 1e-9) {
            throw ConfigError("study: every tau must be an integer multiple of the finest");
        }
    }
    const double steps = params.T / tau_min;
    if (std::abs(steps - std::llround(steps)) > 1e-9) {
        throw ConfigError("study: the finest tau must divide T");
    }
}

double ErrorRow::rms_sup() const { return std::sqrt(mean_sq_sup); }
double ErrorRow::rms_l2() const { return std::sqrt(mean_sq_l2); }

SlopeFit fit_log2_slope(const std::vector<double>& h, const std::vector<double>& rms) {
    if (h.size() != rms.size() || h.size() < 2) {
        throw InvalidParamsError("fit_log2_slope: need at least two matching points");
    }
    const int n = static_cast<int>(h.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(h.size()), ys(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        xs[i] = std::log2(h[i]);
        ys[i] = std::log2(rms[i]);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double r = ys[i] - (intercept + fit.slope * xs[i]);
            ssr += r * r;
        }
        fit.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
        // two-sided 97.5% Student quantiles, residual dof 1..10
        static constexpr double t975[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                                          2.447, 2.365, 2.306, 2.262, 2.228};
        const int dof = n - 2;
        const double q = dof <= 10 ? t975[dof - 1] : 1.96;
        fit.ci_half_width = q * fit.stderr_slope;
    }
    return fit;
}

const char* scheme_name(SchemeKind s) {
    return s == SchemeKind::Explicit ? "explicit" : "imex";
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SIDE_FD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Everything fixed for one grid spacing, shared read-only by all workers.
struct Resolution {
    double h = 0.0;
    double tau = 0.0;
    int steps = 0;
    Grid grid;
    CellCoefficients cc;
    GridFunction initial;
    std::optional<Coefficients> coeffs;
    std::optional<ExplicitStepper> explicit_stepper;
    std::optional<ImexStepper> imex_stepper;
    SchemeConfig base_cfg;
    int region_lo = 0;
    int region_hi = 0;
};

struct RepErrors {
    // max over n of squared errors, indexed [resolution][scheme]
    std::vector<std::vector<double>> sup_sq;
    std::vector<std::vector<double>> l2_sq;
    bool failed = false;
};

void observe_error(const GridFunction& state, const GridFunction& exact, int lo, int hi,
                   double& max_sup_sq, double& max_l2_sq) {
    double sup = 0.0;
    double sumsq = 0.0;
    const auto sv = state.values();
    const auto ev = exact.values();
    const int off = state.grid().max_index;
    for (int k = lo; k <= hi; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + off);
        const double d = sv[i] - ev[i];
        if (std::abs(d) > sup) sup = std::abs(d);
        sumsq += d * d;
    }
    max_sup_sq = std::max(max_sup_sq, sup * sup);
    max_l2_sq = std::max(max_l2_sq, state.grid().h * sumsq);
}

} // namespace

ErrorReport run_study(const StudyConfig& cfg_in) {
    StudyConfig cfg = cfg_in;
    cfg.validate();

    const LevyMeasure measure = cfg.params.measure();
    const double T = cfg.params.T;

    ErrorReport report;
    {
        const Varsigma vs = varsigma(measure, cfg.params.delta);
        report.varsigma1 = vs.s1;
        report.varsigma = vs.s;
        report.jump_intensity =
            measure_integral(measure, cfg.params.eps, measure.support_radius, 0) +
            measure_integral(measure, -measure.support_radius, -cfg.params.eps, 0);
        try {
            const Grid probe = Grid::make(cfg.h_list.front(), cfg.params.domain_radius);
            report.cfl_bound = cfl_rhs(cfg.params.coefficients(probe), measure,
                                       cfg.params.delta);
        } catch (const DeltaTooLargeError&) {
            report.cfl_bound = std::numeric_limits<double>::quiet_NaN();
        }
    }

    const bool want_explicit =
        std::find(cfg.schemes.begin(), cfg.schemes.end(), SchemeKind::Explicit) !=
        cfg.schemes.end();
    const bool want_imex = std::find(cfg.schemes.begin(), cfg.schemes.end(),
                                     SchemeKind::Imex) != cfg.schemes.end();
    const std::size_t n_schemes = cfg.schemes.size();

    double tau_min = cfg.tau_for(0);
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
        tau_min = std::min(tau_min, cfg.tau_for(i));
    }

    std::vector<Resolution> res(cfg.h_list.size());
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
        Resolution& r = res[i];
        r.h = cfg.h_list[i];
        r.tau = cfg.tau_for(i);
        r.grid = Grid::make(r.h, cfg.params.domain_radius);
        r.cc = build_cell_coefficients(measure, r.h, cfg.params.delta);
        r.initial = initial_condition(cfg.params, r.grid);
        r.coeffs.emplace(cfg.params.coefficients(r.grid));
        r.coeffs->tables(0.0); // prime the constant-coefficient cache

        SchemeConfig sc;
        sc.h = r.h;
        sc.tau = r.tau;
        sc.T = T;
        sc.delta = cfg.params.delta;
        sc.compensator_cancellation = cfg.compensator_cancellation;
        sc.error_region = cfg.error_region;
        r.base_cfg = sc;
        r.steps = sc.steps();

        if (cfg.error_region.full) {
            r.region_lo = -r.grid.max_index;
            r.region_hi = r.grid.max_index;
        } else {
            const int m = std::min(
                r.grid.max_index,
                static_cast<int>(std::floor(cfg.error_region.radius / r.h + 1e-9)));
            r.region_lo = -m;
            r.region_hi = m;
        }

        if (want_explicit) {
            SchemeConfig ec = sc;
            ec.scheme = SchemeKind::Explicit;
            // Throws CflViolationError here, before any replication runs.
            r.explicit_stepper.emplace(ec, *r.coeffs, r.cc, measure);
        }
        if (want_imex) {
            SchemeConfig ic = sc;
            ic.scheme = SchemeKind::Imex;
            r.imex_stepper.emplace(ic, *r.coeffs, r.cc);
            report.imex_dominance.emplace_back(r.h, r.imex_stepper->diagonal_dominance());
        }
    }

    const int M = cfg.replications;
    std::vector<RepErrors> results(static_cast<std::size_t>(M));

    auto run_replication = [&](int rep) {
        RepErrors out;
        out.sup_sq.assign(res.size(), std::vector<double>(n_schemes, 0.0));
        out.l2_sq.assign(res.size(), std::vector<double>(n_schemes, 0.0));
        const NoisePath path = simulate_path(measure, T, tau_min, cfg.params.eps,
                                             derive_seed(cfg.base_seed, static_cast<std::uint64_t>(rep)));
        for (std::size_t i = 0; i < res.size(); ++i) {
            const Resolution& r = res[i];
            const BinnedIncrements inc = bin_increments(path, r.cc, r.tau);
            const PathFunctionals pf = accumulate_path(path, r.tau);

            std::vector<GridFunction> states(n_schemes, r.initial);
            // t = 0 contributes zero error by construction but is observed
            // anyway to keep max-over-n faithful.
            GridFunction exact = exact_solution_on_grid(cfg.params, r.grid, 0.0, pf);
            for (std::size_t s = 0; s < n_schemes; ++s) {
                observe_error(states[s], exact, r.region_lo, r.region_hi,
                              out.sup_sq[i][s], out.l2_sq[i][s]);
            }
            for (int n = 0; n < r.steps; ++n) {
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    if (cfg.schemes[s] == SchemeKind::Explicit) {
                        states[s] = r.explicit_stepper->step(states[s], inc, n);
                    } else {
                        states[s] = r.imex_stepper->step(states[s], inc, n);
                    }
                }
                exact = exact_solution_on_grid(cfg.params, r.grid, (n + 1) * r.tau, pf);
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    observe_error(states[s], exact, r.region_lo, r.region_hi,
                                  out.sup_sq[i][s], out.l2_sq[i][s]);
                }
            }
        }
        return out;
    };

    const int threads = std::max(1, std::min(resolve_threads(cfg.threads), std::max(M, 1)));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= M) break;
            try {
                results[static_cast<std::size_t>(rep)] = run_replication(rep);
            } catch (const Error&) {
                results[static_cast<std::size_t>(rep)].failed = true;
            }
        }
    };
    if (threads <= 1 || M <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in replication order.
    for (std::size_t s = 0; s < n_schemes; ++s) {
        for (std::size_t i = 0; i < res.size(); ++i) {
            ErrorRow row;
            row.scheme = cfg.schemes[s];
            row.h = res[i].h;
            row.tau = res[i].tau;
            row.active_small_cells = static_cast<int>(res[i].cc.zeta.size());
            std::vector<double> sup_samples, l2_samples;
            for (int rep = 0; rep < M; ++rep) {
                const RepErrors& re = results[static_cast<std::size_t>(rep)];
                if (re.failed) continue;
                sup_samples.push_back(re.sup_sq[i][s]);
                l2_samples.push_back(re.l2_sq[i][s]);
            }
            row.replications = static_cast<int>(sup_samples.size());
            row.failed_replications = M - row.replications;
            auto mean_se = [](const std::vector<double>& xs, double& mean, double& se) {
                if (xs.empty()) {
                    mean = se = 0.0;
                    return;
                }
                double s1 = 0.0;
                for (double x : xs) s1 += x;
                mean = s1 / static_cast<double>(xs.size());
                if (xs.size() > 1) {
                    double s2 = 0.0;
                    for (double x : xs) s2 += (x - mean) * (x - mean);
                    se = std::sqrt(s2 / (static_cast<double>(xs.size()) *
                                         (static_cast<double>(xs.size()) - 1.0)));
                } else {
                    se = 0.0;
                }
            };
            mean_se(sup_samples, row.mean_sq_sup, row.se_sup);
            mean_se(l2_samples, row.mean_sq_l2, row.se_l2);
            report.rows.push_back(row);
        }
    }

    for (std::size_t s = 0; s < n_schemes; ++s) {
        std::vector<double> hs, rms_sup, rms_l2;
        for (const ErrorRow& row : report.rows) {
            if (row.scheme != cfg.schemes[s]) continue;
            if (row.mean_sq_sup <= 0.0 || row.mean_sq_l2 <= 0.0) continue;
            hs.push_back(row.h);
            rms_sup.push_back(row.rms_sup());
            rms_l2.push_back(row.rms_l2());
        }
        if (hs.size() >= 2) {
            report.slopes.push_back({cfg.schemes[s], "sup", fit_log2_slope(hs, rms_sup)});
            report.slopes.push_back({cfg.schemes[s], "l2", fit_log2_slope(hs, rms_l2)});
        }
    }
    return report;
}

} // namespace sidefd

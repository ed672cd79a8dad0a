#pragma once

#include "sidefd/model_problem.hpp"
#include "sidefd/schemes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sidefd {

/// Configuration of one convergence study: an h-sweep with coupled noise,
/// Monte Carlo over replications, both schemes.
struct StudyConfig {
    ModelParams params;

    std::vector<double> h_list = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};

    enum class TauRule { HSquared, List };
    TauRule tau_rule = TauRule::HSquared;
    std::vector<double> tau_list; // used when tau_rule == List; matches h_list

    int replications = 200;
    std::vector<SchemeKind> schemes = {SchemeKind::Explicit, SchemeKind::Imex};
    std::uint64_t base_seed = 1;
    std::string output_dir = "study-out";
    ErrorRegion error_region = ErrorRegion::full_grid();
    int threads = 0; // 0: SIDE_FD_THREADS env var, then hardware concurrency
    bool compensator_cancellation = true;

    double tau_for(std::size_t i) const;

    /// Sorts h_list descending, checks tau divisibility and basic ranges.
    void validate();
};

struct ErrorRow {
    SchemeKind scheme = SchemeKind::Explicit;
    double h = 0.0;
    double tau = 0.0;
    int replications = 0;
    double mean_sq_sup = 0.0; // Monte Carlo mean of max_n sup_x |u - uh|^2
    double se_sup = 0.0;
    double mean_sq_l2 = 0.0;  // same for the scaled l2 norm
    double se_l2 = 0.0;
    int active_small_cells = 0;
    int failed_replications = 0;

    double rms_sup() const;
    double rms_l2() const;
};

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double ci_half_width = 0.0; // 95% band half-width
    int points = 0;
};

/// Least-squares slope of log2(rms) against log2(h).
SlopeFit fit_log2_slope(const std::vector<double>& h, const std::vector<double>& rms);

struct SlopeRow {
    SchemeKind scheme = SchemeKind::Explicit;
    std::string metric; // "sup" or "l2"
    SlopeFit fit;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    std::vector<SlopeRow> slopes;

    // Study-log diagnostics: computed from quadrature, with the corresponding
    // reference values printed alongside.
    double varsigma1 = 0.0;
    double varsigma = 0.0;
    double cfl_bound = 0.0;
    double jump_intensity = 0.0; // pi({|z| >= eps})

    // Row diagonal dominance of the factored implicit operator, per h
    // (solvability is checked constructively; > 1 means strictly dominant).
    std::vector<std::pair<double, double>> imex_dominance;
};

/// Run the sweep: one noise path per replication at the finest tau, binned
/// per h, both schemes stepped against the closed-form solution on the same
/// path. Deterministic for a fixed config regardless of the thread count.
ErrorReport run_study(const StudyConfig& cfg);

/// Reference constants printed in the study log next to the computed values.
struct ReferenceValues {
    static constexpr double varsigma = 0.0082;
    static constexpr double cfl_bound = 1.0559;
    static constexpr double jump_intensity = 68.9676;
};

/// Write errors.csv, slopes.csv, and roc.svg into dir (created if missing).
void emit(const ErrorReport& report, const std::string& dir);

const char* scheme_name(SchemeKind s);

} // namespace sidefd

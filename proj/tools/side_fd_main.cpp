// side-fd: convergence-study CLI for the finite-difference SIDE solvers.

#include "sidefd/config.hpp"
#include "sidefd/errors.hpp"
#include "sidefd/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

int run_study_command(const std::string& config_path, const std::vector<double>& h_list,
                      const std::string& tau_rule, int mc, long long seed,
                      const std::string& schemes, int threads, const std::string& out,
                      const std::string& inner_region) {
    sidefd::StudyConfig cfg;
    if (!config_path.empty()) sidefd::apply_config_file(cfg, config_path);
    if (!h_list.empty()) cfg.h_list = h_list;
    if (!tau_rule.empty()) {
        if (tau_rule == "h2") {
            cfg.tau_rule = sidefd::StudyConfig::TauRule::HSquared;
        } else if (tau_rule.rfind("list:", 0) == 0) {
            cfg.tau_rule = sidefd::StudyConfig::TauRule::List;
            cfg.tau_list.clear();
            std::string cur;
            for (char ch : tau_rule.substr(5)) {
                if (ch == ',') {
                    cfg.tau_list.push_back(std::stod(cur));
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            if (!cur.empty()) cfg.tau_list.push_back(std::stod(cur));
        } else {
            throw sidefd::ConfigError("--tau-rule must be 'h2' or 'list:t1,t2,...'");
        }
    }
    if (mc >= 0) cfg.replications = mc;
    if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
    if (!schemes.empty()) cfg.schemes = sidefd::parse_scheme_list(schemes);
    if (threads > 0) cfg.threads = threads;
    if (!out.empty()) cfg.output_dir = out;
    if (!inner_region.empty()) {
        if (inner_region == "full") {
            cfg.error_region = sidefd::ErrorRegion::full_grid();
        } else {
            cfg.error_region = sidefd::ErrorRegion::inner(std::stod(inner_region));
        }
    }

    std::printf("study: %zu spacings, M = %d, schemes =", cfg.h_list.size(), cfg.replications);
    for (auto s : cfg.schemes) std::printf(" %s", sidefd::scheme_name(s));
    std::printf("\n");

    const sidefd::ErrorReport report = sidefd::run_study(cfg);

    std::printf("varsigma1(delta) = %.6g, varsigma(delta) = %.6g (reference %.4g)\n",
                report.varsigma1, report.varsigma, sidefd::ReferenceValues::varsigma);
    std::printf("explicit step-size bound = %.6g (reference %.5g)\n", report.cfl_bound,
                sidefd::ReferenceValues::cfl_bound);
    std::printf("jump intensity lambda = %.6g (reference %.5g)\n", report.jump_intensity,
                sidefd::ReferenceValues::jump_intensity);
    for (const auto& [h, dom] : report.imex_dominance) {
        std::printf("imex operator diagonal dominance at h=%g: %.4g\n", h, dom);
    }
    for (const auto& row : report.rows) {
        std::printf("%-8s h=%-10.6g tau=%-10.6g rms_sup=%-12.6g rms_l2=%-12.6g "
                    "small_cells=%d\n",
                    sidefd::scheme_name(row.scheme), row.h, row.tau, row.rms_sup(),
                    row.rms_l2(), row.active_small_cells);
    }
    for (const auto& s : report.slopes) {
        std::printf("%-8s %-3s slope = %.4f +- %.4f (95%%)\n", sidefd::scheme_name(s.scheme),
                    s.metric.c_str(), s.fit.slope, s.fit.ci_half_width);
    }

    sidefd::emit(report, cfg.output_dir);
    std::printf("wrote %s/errors.csv, slopes.csv, roc.svg\n", cfg.output_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference solvers for parabolic stochastic "
                 "integro-differential equations"};
    app.require_subcommand(1);

    auto* study = app.add_subcommand("study", "Run the Monte Carlo convergence study");
    std::string config_path, tau_rule, schemes, out, inner_region;
    std::vector<double> h_list;
    int mc = -1;
    long long seed = -1;
    int threads = 0;
    study->add_option("--config", config_path, "TOML config file");
    study->add_option("--h-list", h_list, "Grid spacings (descending)");
    study->add_option("--tau-rule", tau_rule, "'h2' or 'list:t1,t2,...'");
    study->add_option("--mc", mc, "Monte Carlo replications");
    study->add_option("--seed", seed, "Base seed");
    study->add_option("--scheme", schemes, "Comma-separated: explicit,imex");
    study->add_option("--threads", threads, "Worker threads (default: SIDE_FD_THREADS or all cores)");
    study->add_option("--out", out, "Output directory");
    study->add_option("--inner-region", inner_region, "'full' or a radius for error measurement");

    CLI11_PARSE(app, argc, argv);

    try {
        if (study->parsed()) {
            return run_study_command(config_path, h_list, tau_rule, mc, seed, schemes,
                                     threads, out, inner_region);
        }
    } catch (const sidefd::CflViolationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sidefd::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

#pragma once

#include "sidefd/levy.hpp"
#include "sidefd/rng.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sidefd {

/// One realization of the driving randomness at the finest time resolution:
/// Wiener increments, the compound-Poisson jump events with |size| >= eps,
/// and the Brownian surrogate for the sub-eps jump activity.
struct NoisePath {
    LevyMeasure measure;
    double T = 0.0;
    double tau_fine = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> wiener;            // N(0, tau_fine) per fine step
    std::vector<double> small_jump_wiener; // N(0, v*tau_fine), v = int_{|z|<eps} z^2 pi(dz)
    double small_jump_variance_rate = 0.0; // v above

    struct Jump {
        double time; // in (0, T]
        double size; // |size| in [eps, support_radius]
    };
    std::vector<Jump> jumps; // strictly increasing times

    std::size_t steps() const { return wiener.size(); }
};

/// Precomputed jump-size sampler: per-side intensities and Pareto
/// acceptance-rejection against the tempered density.
class JumpSampler {
public:
    JumpSampler(const LevyMeasure& m, double eps);

    double total_intensity() const { return lambda_; }
    double positive_intensity() const { return lambda_plus_; }

    /// One draw from the normalized jump-size density on |z| in [eps, Z].
    double sample(CounterRng& rng) const;

private:
    LevyMeasure m_;
    double eps_;
    double lambda_plus_ = 0.0;
    double lambda_minus_ = 0.0;
    double lambda_ = 0.0;
};

/// Simulate one coupled path. Deterministic given (seed); jump count over
/// (0, T] is Poisson(lambda*T) with lambda = pi({|z| >= eps}).
NoisePath simulate_path(const LevyMeasure& m, double T, double tau_fine, double eps,
                        std::uint64_t seed);

/// Per-step, per-cell martingale increments at time resolution tau.
struct BinnedIncrements {
    double h = 0.0;
    double tau = 0.0;
    int steps = 0;

    /// small[n]: cell -> compensated small-jump increment over (t_n, t_{n+1}];
    /// cell 0 additionally carries the Brownian surrogate increment.
    std::vector<std::map<int, double>> small;

    /// large_raw[n]: cell -> raw jump count in Bbar_k over the interval.
    std::vector<std::map<int, double>> large_raw;

    /// Wiener increment over each interval.
    std::vector<double> wiener;

    /// Compensated large-jump increment: raw count minus zeta_bar_k * tau.
    double large_compensated(const CellCoefficients& cc, int n, int k) const;
};

/// Histogram the path's jumps into the cells of cc at resolution tau (an
/// integer multiple of path.tau_fine). Jumps with |size| > delta are counted
/// raw; jumps with |size| <= delta are summed signed and compensated by
/// tau * int_{B_k, |z| >= eps} z pi(dz).
BinnedIncrements bin_increments(const NoisePath& path, const CellCoefficients& cc, double tau);

/// Aggregate consecutive steps exactly (sums of the finer increments).
BinnedIncrements coarsen(const BinnedIncrements& b, int factor);

/// Binary dump/replay of a path (little-endian 64-bit fields).
void save_noise_path(const NoisePath& path, const std::string& filename);
NoisePath load_noise_path(const std::string& filename);

} // namespace sidefd

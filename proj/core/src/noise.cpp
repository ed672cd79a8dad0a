#include "sidefd/noise.hpp"

#include "sidefd/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace sidefd {

JumpSampler::JumpSampler(const LevyMeasure& m, double eps) : m_(m), eps_(eps) {
    if (!(eps > 0.0) || eps >= m.support_radius) {
        throw InvalidParamsError("JumpSampler: need 0 < eps < support radius");
    }
    lambda_plus_ = measure_integral(m, eps, m.support_radius, 0);
    lambda_minus_ = measure_integral(m, -m.support_radius, -eps, 0);
    lambda_ = lambda_plus_ + lambda_minus_;
}

double JumpSampler::sample(CounterRng& rng) const {
    if (lambda_ == 0.0) {
        throw InvalidParamsError("JumpSampler::sample: zero jump intensity");
    }
    const bool positive = rng.uniform() * lambda_ < lambda_plus_;
    const double alpha = positive ? m_.alpha_plus : m_.alpha_minus;
    const double beta = positive ? m_.beta_plus : m_.beta_minus;
    const double Z = m_.support_radius;
    // Pareto(eps, alpha) proposals; accept with exp(-beta (x - eps)) and
    // reject anything past the support truncation.
    for (;;) {
        const double x = eps_ * std::pow(rng.uniform_pos(), -1.0 / alpha);
        if (x > Z) continue;
        if (beta == 0.0 || rng.uniform() <= std::exp(-beta * (x - eps_))) {
            return positive ? x : -x;
        }
    }
}

NoisePath simulate_path(const LevyMeasure& m, double T, double tau_fine, double eps,
                        std::uint64_t seed) {
    if (!(T > 0.0) || !(tau_fine > 0.0)) {
        throw InvalidParamsError("simulate_path: T and tau_fine must be positive");
    }
    const double steps_real = T / tau_fine;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (steps == 0 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9) {
        throw InvalidParamsError("simulate_path: tau_fine must divide T");
    }
    if (!(eps > 0.0) || eps >= m.support_radius) {
        throw InvalidParamsError("simulate_path: need 0 < eps < support radius");
    }

    NoisePath path;
    path.measure = m;
    path.T = T;
    path.tau_fine = tau_fine;
    path.eps = eps;
    path.seed = seed;

    CounterRng rng(seed);
    const double sd_w = std::sqrt(tau_fine);
    path.wiener.resize(steps);
    for (auto& dw : path.wiener) dw = sd_w * rng.normal();

    path.small_jump_variance_rate = m.is_zero() ? 0.0 : measure_integral(m, -eps, eps, 2);
    const double sd_s = std::sqrt(path.small_jump_variance_rate * tau_fine);
    path.small_jump_wiener.resize(steps);
    for (auto& dv : path.small_jump_wiener) dv = sd_s * rng.normal();

    if (!m.is_zero()) {
        const JumpSampler sampler(m, eps);
        const double lambda = sampler.total_intensity();
        if (lambda > 0.0) {
            double t = rng.exponential(lambda);
            while (t <= T) {
                path.jumps.push_back({t, sampler.sample(rng)});
                t += rng.exponential(lambda);
            }
        }
    }
    return path;
}

double BinnedIncrements::large_compensated(const CellCoefficients& cc, int n, int k) const {
    double raw = 0.0;
    const auto& step_map = large_raw.at(static_cast<std::size_t>(n));
    if (auto it = step_map.find(k); it != step_map.end()) raw = it->second;
    double rate = 0.0;
    if (auto it = cc.zeta_bar.find(k); it != cc.zeta_bar.end()) rate = it->second;
    return raw - rate * tau;
}

BinnedIncrements bin_increments(const NoisePath& path, const CellCoefficients& cc, double tau) {
    const double ratio = tau / path.tau_fine;
    const int factor = static_cast<int>(std::llround(ratio));
    if (factor < 1 || std::abs(ratio - factor) > 1e-9) {
        throw ResolutionMismatchError("bin_increments: tau must be an integer multiple "
                                      "of the path's fine step");
    }
    const std::size_t fine_steps = path.steps();
    if (fine_steps % static_cast<std::size_t>(factor) != 0) {
        throw ResolutionMismatchError("bin_increments: step count not divisible");
    }
    const std::size_t steps = fine_steps / static_cast<std::size_t>(factor);

    BinnedIncrements b;
    b.h = cc.h;
    b.tau = tau;
    b.steps = static_cast<int>(steps);
    b.small.resize(steps);
    b.large_raw.resize(steps);
    b.wiener.assign(steps, 0.0);

    std::vector<double> surrogate(steps, 0.0);
    for (std::size_t i = 0; i < fine_steps; ++i) {
        const std::size_t n = i / static_cast<std::size_t>(factor);
        b.wiener[n] += path.wiener[i];
        surrogate[n] += path.small_jump_wiener[i];
    }

    // Jump events: times in (t_n, t_{n+1}] belong to coarse step n (0-based).
    for (const auto& jump : path.jumps) {
        auto n = static_cast<std::size_t>(std::ceil(jump.time / tau)) - 1;
        if (n >= steps) n = steps - 1; // guards time == 0 edge after rounding
        const int k = cell_index(jump.size, cc.h);
        if (std::abs(jump.size) > cc.delta) {
            b.large_raw[n][k] += 1.0;
        } else {
            b.small[n][k] += jump.size;
        }
    }

    // Compensate the small-jump sums: subtract tau * int_{B_k, |z| >= eps} z pi(dz).
    // The compensator integrals depend only on (cell, eps), so compute them once.
    std::map<int, double> comp;
    for (const auto& [k, z2] : cc.zeta) {
        const double a = (k - 0.5) * cc.h;
        const double bnd = (k + 0.5) * cc.h;
        const double lo = std::max(a, -cc.delta);
        const double hi = std::min(bnd, cc.delta);
        double v = 0.0;
        // Positive part of the cell above eps, negative part below -eps.
        if (hi > path.eps) v += measure_integral(path.measure, std::max(lo, path.eps), hi, 1);
        if (lo < -path.eps) v += measure_integral(path.measure, lo, std::min(hi, -path.eps), 1);
        if (v != 0.0) comp[k] = v;
    }
    for (std::size_t n = 0; n < steps; ++n) {
        for (const auto& [k, v] : comp) {
            b.small[n][k] -= v * tau;
        }
        b.small[n][0] += surrogate[n];
    }
    return b;
}

BinnedIncrements coarsen(const BinnedIncrements& b, int factor) {
    if (factor < 1 || b.steps % factor != 0) {
        throw IndivisibleFactorError("coarsen: factor must divide the step count");
    }
    if (factor == 1) return b;
    BinnedIncrements out;
    out.h = b.h;
    out.tau = b.tau * factor;
    out.steps = b.steps / factor;
    out.small.resize(static_cast<std::size_t>(out.steps));
    out.large_raw.resize(static_cast<std::size_t>(out.steps));
    out.wiener.assign(static_cast<std::size_t>(out.steps), 0.0);
    for (int i = 0; i < b.steps; ++i) {
        const auto n = static_cast<std::size_t>(i / factor);
        out.wiener[n] += b.wiener[static_cast<std::size_t>(i)];
        for (const auto& [k, v] : b.small[static_cast<std::size_t>(i)]) out.small[n][k] += v;
        for (const auto& [k, v] : b.large_raw[static_cast<std::size_t>(i)]) {
            out.large_raw[n][k] += v;
        }
    }
    return out;
}

namespace {

void write_u64(std::ofstream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

double read_f64(std::ifstream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

} // namespace

void save_noise_path(const NoisePath& path, const std::string& filename) {
    std::ofstream os(filename, std::ios::binary);
    if (!os) throw IoError("save_noise_path: cannot open " + filename);
    write_u64(os, path.seed);
    write_f64(os, path.tau_fine);
    write_f64(os, path.T);
    write_f64(os, path.eps);
    write_f64(os, path.measure.c_minus);
    write_f64(os, path.measure.c_plus);
    write_f64(os, path.measure.beta_minus);
    write_f64(os, path.measure.beta_plus);
    write_f64(os, path.measure.alpha_minus);
    write_f64(os, path.measure.alpha_plus);
    write_f64(os, path.measure.support_radius);
    write_f64(os, path.small_jump_variance_rate);
    write_u64(os, path.wiener.size());
    write_u64(os, path.jumps.size());
    for (double v : path.wiener) write_f64(os, v);
    for (double v : path.small_jump_wiener) write_f64(os, v);
    for (const auto& j : path.jumps) {
        write_f64(os, j.time);
        write_f64(os, j.size);
    }
    if (!os) throw IoError("save_noise_path: write failed for " + filename);
}

NoisePath load_noise_path(const std::string& filename) {
    std::ifstream is(filename, std::ios::binary);
    if (!is) throw IoError("load_noise_path: cannot open " + filename);
    NoisePath path;
    path.seed = read_u64(is);
    path.tau_fine = read_f64(is);
    path.T = read_f64(is);
    path.eps = read_f64(is);
    path.measure.c_minus = read_f64(is);
    path.measure.c_plus = read_f64(is);
    path.measure.beta_minus = read_f64(is);
    path.measure.beta_plus = read_f64(is);
    path.measure.alpha_minus = read_f64(is);
    path.measure.alpha_plus = read_f64(is);
    path.measure.support_radius = read_f64(is);
    path.small_jump_variance_rate = read_f64(is);
    const std::uint64_t n_steps = read_u64(is);
    const std::uint64_t n_jumps = read_u64(is);
    path.wiener.resize(n_steps);
    path.small_jump_wiener.resize(n_steps);
    for (auto& v : path.wiener) v = read_f64(is);
    for (auto& v : path.small_jump_wiener) v = read_f64(is);
    path.jumps.resize(n_jumps);
    for (auto& j : path.jumps) {
        j.time = read_f64(is);
        j.size = read_f64(is);
    }
    if (!is) throw IoError("load_noise_path: truncated file " + filename);
    return path;
}

} // namespace sidefd

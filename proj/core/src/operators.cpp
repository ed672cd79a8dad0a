#include "sidefd/operators.hpp"

#include "sidefd/errors.hpp"
#include "sidefd/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sidefd {

namespace {

std::vector<double> sample_field(const Coefficients::Field& f, const Grid& g, double t) {
    std::vector<double> out(static_cast<std::size_t>(g.count()), 0.0);
    if (f) {
        for (int k = -g.max_index; k <= g.max_index; ++k) {
            out[static_cast<std::size_t>(k + g.max_index)] = f(t, g.node(k));
        }
    }
    return out;
}

} // namespace

Coefficients::Coefficients(Grid grid) : grid_(grid) {}

Coefficients Coefficients::constant(Grid grid, double a11, double a10, double a01,
                                    double a00, double sigma1, double sigma0) {
    Coefficients c(grid);
    c.set_a(1, 1, a11);
    if (a10 != 0.0) c.set_a(1, 0, a10);
    if (a01 != 0.0) c.set_a(0, 1, a01);
    if (a00 != 0.0) c.set_a(0, 0, a00);
    c.add_channel(sigma1, sigma0);
    return c;
}

void Coefficients::set_a(int i, int j, double value) {
    if (i < 0 || i > 1 || j < 0 || j > 1) {
        throw InvalidParamsError("Coefficients::set_a: indices must be in {0,1}");
    }
    cached_.reset();
    Field f = [value](double, double) { return value; };
    if (i == 1 && j == 1) a11_ = std::move(f);
    else if (i == 1 && j == 0) a10_ = std::move(f);
    else if (i == 0 && j == 1) a01_ = std::move(f);
    else a00_ = std::move(f);
}

void Coefficients::set_a(int i, int j, Field f) {
    if (i < 0 || i > 1 || j < 0 || j > 1) {
        throw InvalidParamsError("Coefficients::set_a: indices must be in {0,1}");
    }
    cached_.reset();
    time_dependent_ = true;
    if (i == 1 && j == 1) a11_ = std::move(f);
    else if (i == 1 && j == 0) a10_ = std::move(f);
    else if (i == 0 && j == 1) a01_ = std::move(f);
    else a00_ = std::move(f);
}

void Coefficients::add_channel(double sigma1, double sigma0) {
    cached_.reset();
    sigma1_.push_back([sigma1](double, double) { return sigma1; });
    sigma0_.push_back([sigma0](double, double) { return sigma0; });
}

void Coefficients::add_channel(Field sigma1, Field sigma0) {
    cached_.reset();
    time_dependent_ = true;
    sigma1_.push_back(std::move(sigma1));
    sigma0_.push_back(std::move(sigma0));
}

const Coefficients::Tables& Coefficients::tables(double t) const {
    if (cached_ && (!time_dependent_ || cached_t_ == t)) return *cached_;
    Tables tb;
    tb.a11 = sample_field(a11_, grid_, t);
    tb.a10 = sample_field(a10_, grid_, t);
    tb.a01 = sample_field(a01_, grid_, t);
    tb.a00 = sample_field(a00_, grid_, t);
    for (std::size_t c = 0; c < sigma1_.size(); ++c) {
        tb.sigma1.push_back(sample_field(sigma1_[c], grid_, t));
        tb.sigma0.push_back(sample_field(sigma0_[c], grid_, t));
    }
    double kappa = std::numeric_limits<double>::infinity();
    double sup_sq = 0.0;
    for (std::size_t i = 0; i < tb.a11.size(); ++i) {
        double noise = 0.0;
        for (const auto& s1 : tb.sigma1) noise += s1[i] * s1[i];
        kappa = std::min(kappa, 2.0 * tb.a11[i] - noise);
        sup_sq = std::max(sup_sq, tb.a11[i] * tb.a11[i]);
    }
    tb.kappa = kappa;
    tb.sup_a11_sq = sup_sq;
    if (!(tb.kappa > 0.0)) {
        throw InvalidParamsError("Coefficients: parabolicity margin 2*a11 - sum sigma1^2 "
                                 "is not positive");
    }
    cached_ = std::move(tb);
    cached_t_ = t;
    return *cached_;
}

GridFunction apply_Lh(const Coefficients& c, double t, const GridFunction& phi) {
    if (!(c.grid() == phi.grid())) throw GridMismatchError("apply_Lh: grid mismatch");
    const auto& tb = c.tables(t);
    const Grid& g = phi.grid();
    GridFunction out(g);
    const double inv_h = 1.0 / g.h;
    const double inv_h2 = inv_h * inv_h;
    for (int k = -g.max_index; k <= g.max_index; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + g.max_index);
        const double center = phi(k);
        const double up = phi(k + 1);
        const double down = phi(k - 1);
        out.at(k) = tb.a11[i] * (up - 2.0 * center + down) * inv_h2 +
                    tb.a10[i] * (up - center) * inv_h +
                    tb.a01[i] * (center - down) * inv_h +
                    tb.a00[i] * center;
    }
    return out;
}

GridFunction apply_Nh(const Coefficients& c, double t, std::size_t channel,
                      const GridFunction& phi) {
    if (!(c.grid() == phi.grid())) throw GridMismatchError("apply_Nh: grid mismatch");
    const auto& tb = c.tables(t);
    if (channel >= tb.sigma1.size()) {
        throw InvalidParamsError("apply_Nh: no such noise channel");
    }
    const Grid& g = phi.grid();
    GridFunction out(g);
    const double inv_h = 1.0 / g.h;
    for (int k = -g.max_index; k <= g.max_index; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + g.max_index);
        out.at(k) = tb.sigma1[channel][i] * (phi(k + 1) - phi(k)) * inv_h +
                    tb.sigma0[channel][i] * phi(k);
    }
    return out;
}

GridFunction apply_Ih_deltac(const CellCoefficients& cc, const GridFunction& phi) {
    if (phi.grid().h != cc.h) throw GridMismatchError("apply_Ih_deltac: step mismatch");
    GridFunction out = shift_sum(phi, cc.zeta_bar);
    add_scaled(out, -cc.large_mass, phi);
    if (cc.xi_bar_total != 0.0) {
        add_scaled(out, -cc.xi_bar_total, symmetric_diff(phi));
    }
    return out;
}

GridFunction apply_Ih_delta(const CellCoefficients& cc, const GridFunction& phi) {
    if (phi.grid().h != cc.h) throw GridMismatchError("apply_Ih_delta: step mismatch");
    GridFunction out(phi.grid());
    if (cc.zeta.empty()) return out;
    // Collapse all (cell, leg) pairs into one weight per shift offset.
    std::map<int, double> offset_weights;
    for (const auto& [k, z2] : cc.zeta) {
        const SegmentPartition& p = cc.partition(k);
        for (int l = 0; l < p.chi; ++l) {
            offset_weights[p.indices[l]] += p.theta_bar[l] * z2;
        }
    }
    const GridFunction d2 = second_diff(phi);
    return shift_sum(d2, offset_weights);
}

GridFunction apply_Ltilde(const Coefficients& c, const CellCoefficients& cc, double t,
                          const GridFunction& phi) {
    GridFunction out = apply_Lh(c, t, phi);
    add_scaled(out, -cc.large_mass, phi);
    if (cc.xi_bar_total != 0.0) {
        add_scaled(out, -cc.xi_bar_total, symmetric_diff(phi));
    }
    return out;
}

GridFunction apply_Itilde_deltac(const CellCoefficients& cc, const GridFunction& phi) {
    if (phi.grid().h != cc.h) throw GridMismatchError("apply_Itilde_deltac: step mismatch");
    return shift_sum(phi, cc.zeta_bar);
}

GridFunction jump_drift_stencil(const CellCoefficients& cc, const GridFunction& phi, int k) {
    if (phi.grid().h != cc.h) throw GridMismatchError("jump_drift_stencil: step mismatch");
    const SegmentPartition& p = cc.partition(k);
    const GridFunction d1 = forward_diff(phi, +1);
    GridFunction out(phi.grid());
    for (int l = 0; l < p.chi; ++l) {
        add_scaled(out, p.theta_tilde[l], shift(d1, p.indices[l]));
    }
    return out;
}

GridFunction apply_jump_operator(const CellCoefficients& cc, double z, const GridFunction& phi) {
    const int k = cell_index(z, cc.h);
    if (std::abs(z) <= cc.delta) {
        auto it = cc.partitions.find(k);
        const SegmentPartition p = (it != cc.partitions.end()) ? it->second
                                                               : segment_partition(cc.h, k);
        const GridFunction d1 = forward_diff(phi, +1);
        GridFunction out(phi.grid());
        for (int l = 0; l < p.chi; ++l) {
            add_scaled(out, z * p.theta_tilde[l], shift(d1, p.indices[l]));
        }
        return out;
    }
    return shift(phi, k) - phi;
}

GridFunction shift_sum_direct(const GridFunction& phi, const std::map<int, double>& weights) {
    const Grid& g = phi.grid();
    GridFunction out(g);
    for (const auto& [k, w] : weights) {
        if (w == 0.0) continue;
        add_scaled(out, w, shift(phi, k));
    }
    return out;
}

GridFunction shift_sum_fft(const GridFunction& phi, const std::map<int, double>& weights) {
    const Grid& g = phi.grid();
    GridFunction out(g);
    if (weights.empty()) return out;
    const int k_min = weights.begin()->first;
    const int k_max = weights.rbegin()->first;
    const int w_len = k_max - k_min + 1;
    std::vector<double> kernel(static_cast<std::size_t>(w_len), 0.0);
    for (const auto& [k, w] : weights) {
        kernel[static_cast<std::size_t>(k_max - k)] = w; // reversed
    }
    const std::vector<double> v(phi.values().begin(), phi.values().end());
    const std::vector<double> conv = fft_convolve(v, kernel);
    const int n = g.count();
    for (int j = 0; j < n; ++j) {
        const long s = static_cast<long>(j) + (w_len - 1) + k_min;
        if (s >= 0 && s < static_cast<long>(conv.size())) {
            out.values()[static_cast<std::size_t>(j)] = conv[static_cast<std::size_t>(s)];
        }
    }
    return out;
}

GridFunction shift_sum(const GridFunction& phi, const std::map<int, double>& weights,
                       std::size_t fft_crossover) {
    std::size_t nonzero = 0;
    for (const auto& [k, w] : weights) {
        if (w != 0.0) ++nonzero;
    }
    if (nonzero <= fft_crossover) return shift_sum_direct(phi, weights);
    return shift_sum_fft(phi, weights);
}

ShiftSumPlan::ShiftSumPlan(Grid grid, const std::map<int, double>& weights) : grid_(grid) {
    if (weights.empty()) {
        k_min_ = k_max_ = 0;
        fft_size_ = 0;
        return;
    }
    k_min_ = weights.begin()->first;
    k_max_ = weights.rbegin()->first;
    const int w_len = k_max_ - k_min_ + 1;
    fft_size_ = fft_size_for(static_cast<std::size_t>(grid.count() + w_len - 1));
    weight_spectrum_.assign(fft_size_, {0.0, 0.0});
    for (const auto& [k, w] : weights) {
        weight_spectrum_[static_cast<std::size_t>(k_max_ - k)] = w;
        weight_l1_ += std::abs(w);
    }
    fft_forward(weight_spectrum_);
}

GridFunction ShiftSumPlan::apply(const GridFunction& phi) const {
    if (!(phi.grid() == grid_)) throw GridMismatchError("ShiftSumPlan::apply: grid mismatch");
    GridFunction out(grid_);
    if (fft_size_ == 0) return out;
    std::vector<std::complex<double>> buf(fft_size_, {0.0, 0.0});
    const auto v = phi.values();
    for (std::size_t i = 0; i < v.size(); ++i) buf[i] = v[i];
    fft_forward(buf);
    for (std::size_t i = 0; i < fft_size_; ++i) buf[i] *= weight_spectrum_[i];
    fft_inverse(buf);
    const int w_len = k_max_ - k_min_ + 1;
    const int n = grid_.count();
    for (int j = 0; j < n; ++j) {
        const long s = static_cast<long>(j) + (w_len - 1) + k_min_;
        if (s >= 0 && s < static_cast<long>(fft_size_)) {
            out.values()[static_cast<std::size_t>(j)] = buf[static_cast<std::size_t>(s)].real();
        }
    }
    return out;
}

} // namespace sidefd

#pragma once

#include "sidefd/grid.hpp"
#include "sidefd/levy.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace sidefd {

/// Drift and noise coefficients sampled on a grid.
///
/// Fields may be constants or time-dependent callbacks f(t, x); callbacks are
/// sampled once per step at the scheme's time index. Construction checks the
/// parabolicity margin kappa = min over nodes of (2 a11 - sum sigma1^2) > 0.
class Coefficients {
public:
    using Field = std::function<double(double t, double x)>;

    explicit Coefficients(Grid grid);

    /// Constant-coefficient convenience: a11, a10, a01, a00 and one noise
    /// channel (sigma1, sigma0).
    static Coefficients constant(Grid grid, double a11, double a10 = 0.0,
                                 double a01 = 0.0, double a00 = 0.0,
                                 double sigma1 = 0.0, double sigma0 = 0.0);

    void set_a(int i, int j, double value);
    void set_a(int i, int j, Field f);
    void add_channel(double sigma1, double sigma0);
    void add_channel(Field sigma1, Field sigma0);

    const Grid& grid() const { return grid_; }
    bool time_dependent() const { return time_dependent_; }
    std::size_t channel_count() const { return sigma1_.size(); }

    /// Concrete per-node tables at time t.
    struct Tables {
        std::vector<double> a11, a10, a01, a00;
        std::vector<std::vector<double>> sigma1, sigma0;
        double kappa = 0.0;       // min over nodes of 2 a11 - sum sigma1^2
        double sup_a11_sq = 0.0;  // sup over nodes of |a11|^2
    };

    /// Sample all fields at time t; cached when nothing is time-dependent.
    /// Throws InvalidParamsError if the parabolicity margin is not positive.
    const Tables& tables(double t) const;

private:
    Grid grid_;
    Field a11_, a10_, a01_, a00_;
    std::vector<Field> sigma1_, sigma0_;
    bool time_dependent_ = false;
    mutable std::optional<Tables> cached_;
    mutable double cached_t_ = 0.0;
};

/// Lh phi = a11 d_h d_-h phi + a10 d_h phi + a01 d_-h phi + a00 phi.
GridFunction apply_Lh(const Coefficients& c, double t, const GridFunction& phi);

/// N^rho;h phi = sigma1 d_h phi + sigma0 phi for one noise channel.
GridFunction apply_Nh(const Coefficients& c, double t, std::size_t channel,
                      const GridFunction& phi);

/// Large-jump drift: sum_k (phi(.+h k) - phi) zeta_bar_k - xi_bar_total * d^h phi.
GridFunction apply_Ih_deltac(const CellCoefficients& cc, const GridFunction& phi);

/// Small-jump drift: sum_k sum_l theta_bar_l zeta_k d_h d_-h phi(. + h r_l).
GridFunction apply_Ih_delta(const CellCoefficients& cc, const GridFunction& phi);

/// Lh minus the zero- and first-order pieces moved out of the large-jump drift.
GridFunction apply_Ltilde(const Coefficients& c, const CellCoefficients& cc, double t,
                          const GridFunction& phi);

/// sum_k phi(.+h k) zeta_bar_k.
GridFunction apply_Itilde_deltac(const CellCoefficients& cc, const GridFunction& phi);

/// sum_l theta_tilde_l d_h phi(. + h r_l) for the partition of cell k.
/// Multiplied by the per-cell martingale increment in the schemes.
GridFunction jump_drift_stencil(const CellCoefficients& cc, const GridFunction& phi, int k);

/// The jump-noise operator at jump size z: for |z| <= delta the drift-style
/// stencil scaled by z, otherwise the plain shift difference.
GridFunction apply_jump_operator(const CellCoefficients& cc, double z, const GridFunction& phi);

/// result(x) = sum_k weights[k] * phi(x + k h). Direct summation below the
/// crossover weight count, zero-padded FFT convolution above it.
GridFunction shift_sum(const GridFunction& phi, const std::map<int, double>& weights,
                       std::size_t fft_crossover = 8);

/// Both routes, exposed for cross-checking.
GridFunction shift_sum_direct(const GridFunction& phi, const std::map<int, double>& weights);
GridFunction shift_sum_fft(const GridFunction& phi, const std::map<int, double>& weights);

/// Precomputed spectrum of a fixed weight table for repeated application to
/// functions on one grid.
class ShiftSumPlan {
public:
    ShiftSumPlan(Grid grid, const std::map<int, double>& weights);

    GridFunction apply(const GridFunction& phi) const;
    double weight_l1() const { return weight_l1_; }

private:
    Grid grid_;
    int k_min_ = 0;
    int k_max_ = 0;
    std::size_t fft_size_ = 0;
    std::vector<std::complex<double>> weight_spectrum_;
    double weight_l1_ = 0.0;
};

} // namespace sidefd

#pragma once

#include "sidefd/banded.hpp"
#include "sidefd/grid.hpp"
#include "sidefd/levy.hpp"
#include "sidefd/noise.hpp"
#include "sidefd/operators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace sidefd {

enum class SchemeKind { Explicit, Imex };

struct ErrorRegion {
    bool full = true;
    double radius = 0.0;

    static ErrorRegion full_grid() { return {true, 0.0}; }
    static ErrorRegion inner(double r) { return {false, r}; }
};

struct SchemeConfig {
    double h = 0.0;
    double tau = 0.0;
    double T = 0.0;
    double delta = 0.0;
    SchemeKind scheme = SchemeKind::Explicit;

    /// Benchmark mode: drive the large-jump term with raw counts and drop the
    /// matching drift piece (an exact algebraic rewrite of the compensated
    /// form).
    bool compensator_cancellation = true;

    ErrorRegion error_region = ErrorRegion::full_grid();
    std::size_t fft_crossover = 8;

    /// T / tau as an exact positive integer.
    int steps() const;
};

/// Free terms of the equation; all optional (the model problem has none).
/// o is applied per simulated jump event; o_compensator must supply
/// int_{|z|>=eps} o(t, x, z) pi(dz) so the jump free term stays compensated.
struct Forcing {
    std::function<double(double t, double x)> f;
    std::function<double(double t, double x)> g;
    std::function<double(double t, double x, double z)> o;
    std::function<double(double t, double x)> o_compensator;
};

/// Right-hand side of the step-size bound for the explicit scheme:
/// (kappa - varsigma(delta)) / (2 sup|a11| + varsigma_1(delta))^2.
/// The explicit scheme requires d * tau / h^2 strictly below this.
/// Throws DeltaTooLargeError when varsigma(delta) >= kappa.
double cfl_rhs(const Coefficients& c, const LevyMeasure& m, double delta);

/// D phi = phi - tau * (Ltilde + Ih_delta) phi as a banded matrix, rows at
/// boundary nodes using the zero extension.
BandedMatrix imex_matrix(const Coefficients& c, const CellCoefficients& cc, double tau,
                         double t);

/// One explicit update. Construction validates the step-size bound.
class ExplicitStepper {
public:
    ExplicitStepper(const SchemeConfig& cfg, const Coefficients& c,
                    const CellCoefficients& cc, const LevyMeasure& m);

    /// Advance from t_n to t_{n+1} using interval n (0-based) of inc.
    GridFunction step(const GridFunction& state, const BinnedIncrements& inc, int n,
                      const GridFunction* f_prev = nullptr,
                      const GridFunction* g_prev = nullptr,
                      const GridFunction* o_increment = nullptr) const;

private:
    const SchemeConfig cfg_;
    const Coefficients& c_;
    const CellCoefficients& cc_;
};

/// One implicit-explicit update; the banded factorization is built once for
/// constant coefficients and reused across steps and replications.
class ImexStepper {
public:
    ImexStepper(const SchemeConfig& cfg, const Coefficients& c, const CellCoefficients& cc);

    GridFunction step(const GridFunction& state, const BinnedIncrements& inc, int n,
                      const GridFunction* f_next = nullptr,
                      const GridFunction* g_prev = nullptr,
                      const GridFunction* o_increment = nullptr) const;

    /// Row diagonal-dominance ratio of D (> 1 means strictly dominant).
    double diagonal_dominance() const { return dominance_; }

private:
    const SchemeConfig cfg_;
    const Coefficients& c_;
    const CellCoefficients& cc_;
    mutable std::unique_ptr<BandedMatrix> factored_; // constant-coefficient case
    std::unique_ptr<ShiftSumPlan> itilde_plan_;
    double dominance_ = 0.0;
};

/// Full trajectory: steps()+1 states, state 0 = initial. Deterministic given
/// the path.
std::vector<GridFunction> run(const SchemeConfig& cfg, const Coefficients& c,
                              const LevyMeasure& m, const CellCoefficients& cc,
                              const NoisePath& path, const GridFunction& initial,
                              const Forcing* forcing = nullptr);

/// Streaming variant: observe(n, state) is called for n = 0..steps().
void run_observed(const SchemeConfig& cfg, const Coefficients& c, const LevyMeasure& m,
                  const CellCoefficients& cc, const NoisePath& path,
                  const GridFunction& initial, const Forcing* forcing,
                  const std::function<void(int, const GridFunction&)>& observe);

} // namespace sidefd

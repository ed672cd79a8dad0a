#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

namespace sidefd {

/// Two-sided tempered-stable jump measure with truncated support.
///
/// density(z) = c_minus * exp(-beta_minus*|z|) * |z|^(-1-alpha_minus) for z < 0
///              c_plus  * exp(-beta_plus *|z|) * |z|^(-1-alpha_plus)  for z > 0
/// and 0 for |z| > support_radius. Scales of 0 give the zero measure on that
/// side.
struct LevyMeasure {
    double c_minus = 1.0;
    double c_plus = 1.0;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    double alpha_minus = 1.1;
    double alpha_plus = 1.1;
    double support_radius = 3.0;

    static LevyMeasure tempered_stable(double c_minus, double c_plus,
                                       double beta_minus, double beta_plus,
                                       double alpha_minus, double alpha_plus,
                                       double support_radius);

    /// The zero measure (no jumps at all).
    static LevyMeasure zero();

    double density(double z) const;
    bool is_zero() const { return c_minus == 0.0 && c_plus == 0.0; }
};

/// int_lo^hi z^power density(z) dz by singularity-aware adaptive quadrature
/// (absolute tolerance 1e-10). power must be 0, 1, or 2; for power < 2 the
/// interval must not contain a neighborhood of 0 unless the moment exists
/// (power = 1 with alpha < 1).
double measure_integral(const LevyMeasure& m, double lo, double hi, int power);

/// int_lo^hi z^power w(z) density(z) dz for a smooth bounded weight w. Same
/// singularity handling as measure_integral; used by quadrature oracles.
double measure_integral_weighted(const LevyMeasure& m, double lo, double hi, int power,
                                 const std::function<double(double)>& w);

struct Varsigma {
    double s1 = 0.0; // int_{|z|<=delta} z^2 pi_1(dz)
    double s2 = 0.0; // same for pi_2 (equal here: one measure drives both)
    double s = 0.0;  // s1 + s2
};

Varsigma varsigma(const LevyMeasure& m, double delta);

/// Partition of the segment from 0 to h*k by the grid cells it crosses.
///
/// indices[l] is the cell index of the l-th leg (indices[0] is unused and set
/// to match theta[0] = 0 bookkeeping: legs are 1-based in the formulas, so we
/// store chi legs with indices[0] = 0 and indices[chi-1] = k).
struct SegmentPartition {
    int k = 0;
    int chi = 1;
    std::vector<int> indices;     // chi entries: 0, sgn(k), ..., k
    std::vector<double> theta;     // chi+1 breakpoints, 0 = theta[0] <= ... <= theta[chi] = 1
    std::vector<double> theta_bar; // chi entries, int (1-theta) over each piece; sums to 1/2
    std::vector<double> theta_tilde; // chi entries, piece lengths; sums to 1
};

SegmentPartition segment_partition(double h, int k);

/// Every discretization coefficient derived from the measure at one (h, delta):
/// per-cell second moments over the small-jump region, masses and truncated
/// first moments over the large-jump region, and the segment partitions used
/// by the small-jump drift operator.
struct CellCoefficients {
    double h = 0.0;
    double delta = 0.0;
    std::map<int, double> zeta;     // cell -> int_{B_k} z^2 pi(dz)
    std::map<int, double> zeta_bar; // cell -> pi(Bbar_k)
    std::map<int, double> xi_bar;   // cell -> int_{Bbar_k ∩ [-1,1]} z pi(dz)
    std::map<int, SegmentPartition> partitions; // for every cell with zeta != 0

    double large_mass = 0.0;     // sum of zeta_bar = pi({|z| > delta})
    double xi_bar_total = 0.0;   // sum of xi_bar = int_{delta<|z|<=1} z pi(dz)
    double small_second_moment = 0.0; // sum of zeta = varsigma_1(delta)

    const SegmentPartition& partition(int k) const;
    int max_cell_index() const;
};

/// Index of the half-open cell ((k-1/2)h, (k+1/2)h] containing z.
int cell_index(double z, double h);

CellCoefficients build_cell_coefficients(const LevyMeasure& m, double h, double delta);

/// JSON caching of the coefficient tables (partitions are rebuilt on load).
std::string cell_coefficients_to_json(const CellCoefficients& cc);
CellCoefficients cell_coefficients_from_json(const std::string& text);

} // namespace sidefd

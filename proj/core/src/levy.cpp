#include "sidefd/levy.hpp"

#include "sidefd/errors.hpp"
#include "sidefd/quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sidefd {

namespace {

constexpr double kCellTol = 1e-12;   // per-cell moment tolerance
constexpr double kPublicTol = 1e-10; // measure_integral contract tolerance

struct Side {
    double c;
    double beta;
    double alpha;
};

double identity_weight(double) { return 1.0; }

/// int_a^b z^power c e^{-beta z} z^{-1-alpha} w(z) dz over 0 <= a < b.
/// When a == 0 the endpoint singularity is removed by the substitution
/// z = t^{1/q}, q = power - alpha, under which z^(power-1-alpha) dz = dt/q.
double one_sided_moment(const Side& s, double a, double b, int power,
                        const std::function<double(double)>& w, double tol) {
    if (s.c == 0.0 || a >= b) return 0.0;
    const double p = power - 1.0 - s.alpha;
    if (a > 0.0) {
        auto f = [&](double z) {
            return s.c * std::pow(z, p) * std::exp(-s.beta * z) * w(z);
        };
        return integrate(f, a, b, tol);
    }
    const double q = p + 1.0; // = power - alpha
    if (q <= 0.0) {
        throw NonIntegrableError("measure moment does not exist at the origin");
    }
    auto f = [&](double t) {
        const double z = std::pow(t, 1.0 / q);
        return s.c / q * std::exp(-s.beta * z) * w(z);
    };
    return integrate(f, 0.0, std::pow(b, q), tol);
}

double moment(const LevyMeasure& m, double lo, double hi, int power,
              const std::function<double(double)>& w, double tol) {
    if (lo > hi) throw InvalidParamsError("measure_integral: lo > hi");
    if (power < 0 || power > 2) {
        throw InvalidParamsError("measure_integral: power must be 0, 1, or 2");
    }
    lo = std::max(lo, -m.support_radius);
    hi = std::min(hi, m.support_radius);
    if (lo >= hi) return 0.0;

    const Side neg{m.c_minus, m.beta_minus, m.alpha_minus};
    const Side pos{m.c_plus, m.beta_plus, m.alpha_plus};
    const double sign = (power % 2 == 0) ? 1.0 : -1.0;

    if (hi <= 0.0) {
        // Reflect: int_lo^hi z^power rho = (-1)^power int_{-hi}^{-lo} u^power rho_-
        auto wr = [&](double u) { return w(-u); };
        return sign * one_sided_moment(neg, -hi, -lo, power, wr, tol);
    }
    if (lo >= 0.0) {
        return one_sided_moment(pos, lo, hi, power, w, tol);
    }
    // Straddles the origin; integrability at 0 is checked per side inside
    // one_sided_moment.
    auto wr = [&](double u) { return w(-u); };
    return sign * one_sided_moment(neg, 0.0, -lo, power, wr, 0.5 * tol) +
           one_sided_moment(pos, 0.0, hi, power, w, 0.5 * tol);
}

} // namespace

LevyMeasure LevyMeasure::tempered_stable(double c_minus, double c_plus,
                                         double beta_minus, double beta_plus,
                                         double alpha_minus, double alpha_plus,
                                         double support_radius) {
    if (c_minus < 0.0 || c_plus < 0.0) {
        throw InvalidParamsError("LevyMeasure: density scales must be nonnegative");
    }
    if (beta_minus < 0.0 || beta_plus < 0.0) {
        throw InvalidParamsError("LevyMeasure: tempering must be nonnegative");
    }
    if (alpha_minus <= 0.0 || alpha_minus >= 2.0 || alpha_plus <= 0.0 || alpha_plus >= 2.0) {
        throw InvalidParamsError("LevyMeasure: stability indices must lie in (0, 2)");
    }
    if (!(support_radius > 0.0)) {
        throw InvalidParamsError("LevyMeasure: support radius must be positive");
    }
    return {c_minus, c_plus, beta_minus, beta_plus, alpha_minus, alpha_plus, support_radius};
}

LevyMeasure LevyMeasure::zero() {
    LevyMeasure m;
    m.c_minus = 0.0;
    m.c_plus = 0.0;
    return m;
}

double LevyMeasure::density(double z) const {
    const double a = std::abs(z);
    if (z == 0.0 || a > support_radius) return 0.0;
    if (z < 0.0) {
        return c_minus * std::exp(-beta_minus * a) * std::pow(a, -1.0 - alpha_minus);
    }
    return c_plus * std::exp(-beta_plus * a) * std::pow(a, -1.0 - alpha_plus);
}

double measure_integral(const LevyMeasure& m, double lo, double hi, int power) {
    return moment(m, lo, hi, power, identity_weight, kPublicTol);
}

double measure_integral_weighted(const LevyMeasure& m, double lo, double hi, int power,
                                 const std::function<double(double)>& w) {
    return moment(m, lo, hi, power, w, kPublicTol);
}

Varsigma varsigma(const LevyMeasure& m, double delta) {
    if (!(delta > 0.0) || delta > 1.0) {
        throw InvalidParamsError("varsigma: delta must lie in (0, 1]");
    }
    Varsigma v;
    v.s1 = measure_integral(m, -delta, delta, 2);
    v.s2 = v.s1; // one measure drives both the drift and the noise
    v.s = v.s1 + v.s2;
    return v;
}

SegmentPartition segment_partition(double h, int k) {
    if (!(h > 0.0)) throw InvalidParamsError("segment_partition: h must be positive");
    SegmentPartition p;
    p.k = k;
    if (k == 0) {
        p.chi = 1;
        p.indices = {0};
        p.theta = {0.0, 1.0};
        p.theta_bar = {0.5};
        p.theta_tilde = {1.0};
        return p;
    }
    const int n = std::abs(k);
    const int s = k > 0 ? 1 : -1;
    p.chi = n + 1;
    p.indices.resize(p.chi);
    for (int l = 0; l < p.chi; ++l) p.indices[l] = l * s;
    p.theta.resize(p.chi + 1);
    p.theta[0] = 0.0;
    for (int l = 1; l <= n; ++l) p.theta[l] = (l - 0.5) / n;
    p.theta[p.chi] = 1.0;
    p.theta_bar.resize(p.chi);
    p.theta_tilde.resize(p.chi);
    for (int l = 0; l < p.chi; ++l) {
        const double a = p.theta[l];
        const double b = p.theta[l + 1];
        p.theta_tilde[l] = b - a;
        p.theta_bar[l] = (b - a) * (1.0 - 0.5 * (a + b));
    }
    return p;
}

int cell_index(double z, double h) {
    return static_cast<int>(std::ceil(z / h - 0.5));
}

const SegmentPartition& CellCoefficients::partition(int k) const {
    auto it = partitions.find(k);
    if (it == partitions.end()) {
        throw UnknownCellError("no segment partition for cell " + std::to_string(k));
    }
    return it->second;
}

int CellCoefficients::max_cell_index() const {
    int m = 0;
    for (const auto& [k, v] : zeta) m = std::max(m, std::abs(k));
    return m;
}

CellCoefficients build_cell_coefficients(const LevyMeasure& m, double h, double delta) {
    if (!(h > 0.0)) throw InvalidParamsError("build_cell_coefficients: h must be positive");
    if (!(delta > 0.0) || delta > 1.0) {
        throw InvalidParamsError("build_cell_coefficients: delta must lie in (0, 1]");
    }
    CellCoefficients cc;
    cc.h = h;
    cc.delta = delta;

    const double Z = m.support_radius;
    const int kmax = static_cast<int>(std::floor(Z / h + 0.5 + 1e-9));
    for (int k = -kmax; k <= kmax; ++k) {
        const double a = (k - 0.5) * h;
        const double b = (k + 0.5) * h;

        // Small-jump part: A_k ∩ [-delta, delta].
        const double s_lo = std::max(a, -delta);
        const double s_hi = std::min(b, delta);
        if (s_lo < s_hi) {
            const double z2 = moment(m, s_lo, s_hi, 2, identity_weight, kCellTol);
            if (z2 > 0.0) cc.zeta[k] = z2;
        }

        // Large-jump part: A_k minus [-delta, delta], up to two pieces.
        double mass = 0.0;
        double first = 0.0;
        if (b > delta) {
            const double lo = std::max(a, delta);
            mass += moment(m, lo, b, 0, identity_weight, kCellTol);
            const double f_hi = std::min(b, 1.0);
            if (lo < f_hi) first += moment(m, lo, f_hi, 1, identity_weight, kCellTol);
        }
        if (a < -delta) {
            const double hi = std::min(b, -delta);
            mass += moment(m, a, hi, 0, identity_weight, kCellTol);
            const double f_lo = std::max(a, -1.0);
            if (f_lo < hi) first += moment(m, f_lo, hi, 1, identity_weight, kCellTol);
        }
        if (mass > 0.0) cc.zeta_bar[k] = mass;
        if (first != 0.0) cc.xi_bar[k] = first;
    }

    for (const auto& [k, v] : cc.zeta) cc.partitions.emplace(k, segment_partition(h, k));
    cc.partitions.emplace(0, segment_partition(h, 0));

    for (const auto& [k, v] : cc.zeta) cc.small_second_moment += v;
    for (const auto& [k, v] : cc.zeta_bar) cc.large_mass += v;
    for (const auto& [k, v] : cc.xi_bar) cc.xi_bar_total += v;
    return cc;
}

std::string cell_coefficients_to_json(const CellCoefficients& cc) {
    nlohmann::json j;
    j["h"] = cc.h;
    j["delta"] = cc.delta;
    auto put = [](nlohmann::json& dst, const std::map<int, double>& src) {
        for (const auto& [k, v] : src) dst[std::to_string(k)] = v;
    };
    j["zeta"] = nlohmann::json::object();
    j["zeta_bar"] = nlohmann::json::object();
    j["xi_bar"] = nlohmann::json::object();
    put(j["zeta"], cc.zeta);
    put(j["zeta_bar"], cc.zeta_bar);
    put(j["xi_bar"], cc.xi_bar);
    return j.dump(2);
}

CellCoefficients cell_coefficients_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CellCoefficients cc;
    cc.h = j.at("h").get<double>();
    cc.delta = j.at("delta").get<double>();
    auto get = [](const nlohmann::json& src, std::map<int, double>& dst) {
        for (auto it = src.begin(); it != src.end(); ++it) {
            dst[std::stoi(it.key())] = it.value().get<double>();
        }
    };
    get(j.at("zeta"), cc.zeta);
    get(j.at("zeta_bar"), cc.zeta_bar);
    get(j.at("xi_bar"), cc.xi_bar);
    for (const auto& [k, v] : cc.zeta) cc.partitions.emplace(k, segment_partition(cc.h, k));
    cc.partitions.emplace(0, segment_partition(cc.h, 0));
    for (const auto& [k, v] : cc.zeta) cc.small_second_moment += v;
    for (const auto& [k, v] : cc.zeta_bar) cc.large_mass += v;
    for (const auto& [k, v] : cc.xi_bar) cc.xi_bar_total += v;
    return cc;
}

} // namespace sidefd

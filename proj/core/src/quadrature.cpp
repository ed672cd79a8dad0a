#include "sidefd/quadrature.hpp"

#include "sidefd/errors.hpp"

#include <cmath>
#include <limits>

namespace sidefd {

namespace {

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol,
                int depth, bool& ok) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        ok = false;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, ok) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, ok);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
        throw QuadratureError("integrate: integrand not finite on the interval");
    }
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    bool ok = true;
    const double result = adaptive(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, ok);
    if (!ok) {
        throw QuadratureError("integrate: tolerance not met within subdivision limit");
    }
    return sign * result;
}

double lower_incomplete_gamma(double s, double x) {
    if (s <= 0.0 || x < 0.0) {
        throw InvalidParamsError("lower_incomplete_gamma: need s > 0, x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        // gamma(s,x) = x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n))
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (s + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::pow(x, s) * std::exp(-x) * sum;
    }
    // Upper incomplete gamma by Lentz's continued fraction, subtracted from
    // the complete gamma.
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double upper = std::exp(-x + s * std::log(x)) * h;
    return std::tgamma(s) - upper;
}

} // namespace sidefd

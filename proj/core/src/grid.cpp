#include "sidefd/grid.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sidefd {

Grid Grid::make(double h, double radius) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidParamsError("Grid: h must be positive and finite");
    }
    if (!(radius >= h)) {
        throw InvalidParamsError("Grid: radius must be at least h");
    }
    Grid g;
    g.h = h;
    g.radius = radius;
    // Largest k with k*h <= radius, tolerant of radius/h landing a hair below
    // an integer.
    g.max_index = static_cast<int>(std::floor(radius / h + 1e-9));
    return g;
}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& f) {
    GridFunction out(grid);
    for (int k = -grid.max_index; k <= grid.max_index; ++k) {
        out.at(k) = f(grid.node(k));
    }
    return out;
}

double& GridFunction::at(int k) {
    if (!grid_.contains(k)) {
        throw InvalidParamsError("GridFunction::at: node outside the stored range");
    }
    return values_[static_cast<std::size_t>(k + grid_.max_index)];
}

void check_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) {
        throw GridMismatchError("grid functions live on different grids");
    }
}

GridFunction forward_diff(const GridFunction& phi, int sign) {
    if (sign != 1 && sign != -1) {
        throw InvalidParamsError("forward_diff: sign must be +1 or -1");
    }
    const Grid& g = phi.grid();
    GridFunction out(g);
    const double inv = 1.0 / (sign * g.h);
    for (int k = -g.max_index; k <= g.max_index; ++k) {
        out.at(k) = (phi(k + sign) - phi(k)) * inv;
    }
    return out;
}

GridFunction symmetric_diff(const GridFunction& phi) {
    const Grid& g = phi.grid();
    GridFunction out(g);
    const double inv = 1.0 / (2.0 * g.h);
    for (int k = -g.max_index; k <= g.max_index; ++k) {
        out.at(k) = (phi(k + 1) - phi(k - 1)) * inv;
    }
    return out;
}

GridFunction second_diff(const GridFunction& phi) {
    const Grid& g = phi.grid();
    GridFunction out(g);
    const double inv = 1.0 / (g.h * g.h);
    for (int k = -g.max_index; k <= g.max_index; ++k) {
        out.at(k) = (phi(k + 1) - 2.0 * phi(k) + phi(k - 1)) * inv;
    }
    return out;
}

GridFunction shift(const GridFunction& phi, int k) {
    const Grid& g = phi.grid();
    GridFunction out(g);
    for (int j = -g.max_index; j <= g.max_index; ++j) {
        out.at(j) = phi(j + k);
    }
    return out;
}

Norms norms(const GridFunction& phi) {
    Norms n;
    double sumsq = 0.0;
    for (double v : phi.values()) {
        sumsq += v * v;
        n.sup = std::max(n.sup, std::abs(v));
    }
    n.l2 = std::sqrt(phi.grid().h * sumsq);
    return n;
}

double inner(const GridFunction& phi, const GridFunction& psi) {
    check_same_grid(phi, psi);
    double s = 0.0;
    const auto a = phi.values();
    const auto b = psi.values();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return phi.grid().h * s;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    check_same_grid(a, b);
    GridFunction out = a;
    auto ov = out.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
    return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    check_same_grid(a, b);
    GridFunction out = a;
    auto ov = out.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] -= bv[i];
    return out;
}

GridFunction operator*(double c, const GridFunction& a) {
    GridFunction out = a;
    for (double& v : out.values()) v *= c;
    return out;
}

void add_scaled(GridFunction& a, double c, const GridFunction& b) {
    check_same_grid(a, b);
    auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) av[i] += c * bv[i];
}

} // namespace sidefd

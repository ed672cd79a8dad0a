#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sidefd {

/// Uniform one-dimensional grid on the truncated domain [-radius, radius].
///
/// Nodes sit at k*h for signed integers k with |k*h| <= radius, so node index
/// 0 is always the origin and the node count is odd. Grid functions carry a
/// hard zero extension outside the domain.
struct Grid {
    double h = 0.0;
    double radius = 0.0;
    int max_index = 0; // nodes are k in [-max_index, max_index]

    static Grid make(double h, double radius);

    int count() const { return 2 * max_index + 1; }
    double node(int k) const { return k * h; }
    bool contains(int k) const { return k >= -max_index && k <= max_index; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Real values on the nodes of a Grid, identically zero outside the domain.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(Grid grid)
        : grid_(grid), values_(static_cast<std::size_t>(grid.count()), 0.0) {}

    /// Sample f(x) at every node.
    static GridFunction sample(Grid grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }

    /// Value at node index k; exactly zero outside the stored range.
    double operator()(int k) const {
        return grid_.contains(k) ? values_[static_cast<std::size_t>(k + grid_.max_index)] : 0.0;
    }

    /// Mutable access to a stored node.
    double& at(int k);

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// (phi(x + sign*h) - phi(x)) / (sign*h) with zero extension at the boundary.
GridFunction forward_diff(const GridFunction& phi, int sign);

/// Average of the two one-sided differences; exactly the centered difference.
GridFunction symmetric_diff(const GridFunction& phi);

/// (phi(x+h) - 2 phi(x) + phi(x-h)) / h^2.
GridFunction second_diff(const GridFunction& phi);

/// phi(x + k*h) with zero extension.
GridFunction shift(const GridFunction& phi, int k);

struct Norms {
    double l2 = 0.0;
    double sup = 0.0;
};

/// Scaled l2 norm sqrt(h * sum phi^2) and sup norm over the stored nodes.
Norms norms(const GridFunction& phi);

/// Scaled inner product h * sum phi*psi.
double inner(const GridFunction& phi, const GridFunction& psi);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& a);

/// a += c * b, in place.
void add_scaled(GridFunction& a, double c, const GridFunction& b);

void check_same_grid(const GridFunction& a, const GridFunction& b);

} // namespace sidefd

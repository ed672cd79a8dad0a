#pragma once

#include <span>
#include <vector>

namespace sidefd {

/// Square banded matrix with equal lower/upper bandwidth, stored in LAPACK
/// band layout with room for fill-in, factored by Gaussian elimination with
/// partial pivoting.
class BandedMatrix {
public:
    BandedMatrix(int n, int bandwidth);

    int size() const { return n_; }
    int bandwidth() const { return kl_; }

    /// Entry (i, j); zero outside the band. Writing outside the band throws.
    double get(int i, int j) const;
    void set(int i, int j, double value);
    void add(int i, int j, double value);

    /// Factor in place. Throws SingularMatrixError on a zero pivot.
    void factor();
    bool factored() const { return factored_; }

    /// Solve A x = b using the stored factorization (factor() first).
    void solve(std::span<double> b) const;

    /// Smallest ratio |diag| / sum|offdiag| over rows, from the unfactored
    /// matrix; > 1 means strict row diagonal dominance.
    double diagonal_dominance() const;

private:
    double& entry(int i, int j);
    const double& entry(int i, int j) const;

    int n_;
    int kl_; // bandwidth below and above the diagonal
    int rows_; // 2*kl_ + kl_ + 1 storage rows (fill-in space)
    std::vector<double> a_; // column-major band storage
    std::vector<int> pivots_;
    bool factored_ = false;
};

} // namespace sidefd

#include "sidefd/banded.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sidefd {

BandedMatrix::BandedMatrix(int n, int bandwidth) : n_(n), kl_(bandwidth) {
    if (n <= 0 || bandwidth < 0 || bandwidth >= n) {
        throw InvalidParamsError("BandedMatrix: need 0 <= bandwidth < n");
    }
    rows_ = 3 * kl_ + 1; // band plus fill-in space for pivoting
    a_.assign(static_cast<std::size_t>(n_) * rows_, 0.0);
    pivots_.assign(n_, 0);
}

// Entry (i, j) lives at storage row 2*kl + i - j of column j; the extra kl
// top rows absorb fill-in from row interchanges.
double& BandedMatrix::entry(int i, int j) {
    return a_[static_cast<std::size_t>(j) * rows_ + (2 * kl_ + i - j)];
}

const double& BandedMatrix::entry(int i, int j) const {
    return a_[static_cast<std::size_t>(j) * rows_ + (2 * kl_ + i - j)];
}

double BandedMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw InvalidParamsError("BandedMatrix::get: index out of range");
    }
    const int d = i - j;
    if (d > kl_ || d < -2 * kl_) return 0.0;
    return entry(i, j);
}

void BandedMatrix::set(int i, int j, double value) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || std::abs(i - j) > kl_) {
        throw InvalidParamsError("BandedMatrix::set: entry outside the band");
    }
    entry(i, j) = value;
}

void BandedMatrix::add(int i, int j, double value) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || std::abs(i - j) > kl_) {
        throw InvalidParamsError("BandedMatrix::add: entry outside the band");
    }
    entry(i, j) += value;
}

double BandedMatrix::diagonal_dominance() const {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
        double off = 0.0;
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + kl_); ++j) {
            if (j != i) off += std::abs(entry(i, j));
        }
        if (off == 0.0) continue;
        worst = std::min(worst, std::abs(entry(i, i)) / off);
    }
    return worst;
}

void BandedMatrix::factor() {
    const int ku_ext = 2 * kl_;
    for (int j = 0; j < n_; ++j) {
        const int last_row = std::min(n_ - 1, j + kl_);
        int p = j;
        double best = std::abs(entry(j, j));
        for (int i = j + 1; i <= last_row; ++i) {
            const double v = std::abs(entry(i, j));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) {
            throw SingularMatrixError("banded LU: zero pivot at column " + std::to_string(j));
        }
        pivots_[j] = p;
        const int last_col = std::min(n_ - 1, j + ku_ext);
        if (p != j) {
            for (int c = j; c <= last_col; ++c) std::swap(entry(j, c), entry(p, c));
        }
        const double pivot = entry(j, j);
        for (int i = j + 1; i <= last_row; ++i) {
            const double m = entry(i, j) / pivot;
            entry(i, j) = m;
            if (m == 0.0) continue;
            for (int c = j + 1; c <= last_col; ++c) {
                entry(i, c) -= m * entry(j, c);
            }
        }
    }
    factored_ = true;
}

void BandedMatrix::solve(std::span<double> b) const {
    if (!factored_) throw InvalidParamsError("BandedMatrix::solve: factor() first");
    if (static_cast<int>(b.size()) != n_) {
        throw InvalidParamsError("BandedMatrix::solve: size mismatch");
    }
    const int ku_ext = 2 * kl_;
    for (int j = 0; j < n_; ++j) {
        if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
        const int last_row = std::min(n_ - 1, j + kl_);
        for (int i = j + 1; i <= last_row; ++i) {
            b[i] -= entry(i, j) * b[j];
        }
    }
    for (int j = n_ - 1; j >= 0; --j) {
        b[j] /= entry(j, j);
        const int first_row = std::max(0, j - ku_ext);
        for (int i = first_row; i < j; ++i) {
            b[i] -= entry(i, j) * b[j];
        }
    }
}

} // namespace sidefd

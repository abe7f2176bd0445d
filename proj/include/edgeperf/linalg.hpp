#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "edgeperf/error.hpp"

namespace edgeperf::linalg {

// Dense column-major matrix, just enough for tall-skinny least squares.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

// Relative pivot size below which a column is treated as dependent on the
// ones before it.
inline constexpr double kRankTolerance = 1e-10;

/// Minimizes ||A x - b||_2 by Householder QR. Throws RankDeficient when A
/// lacks full column rank (or has fewer rows than columns).
inline std::vector<double> least_squares(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows();
    const std::size_t p = a.cols();
    if (m < p) throw RankDeficient("fewer observations than coefficients");

    std::vector<double> col_norm(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        col_norm[j] = std::sqrt(s);
    }

    std::vector<double> diag(p, 0.0);
    std::vector<double> v(m, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (col_norm[k] == 0.0 || norm <= kRankTolerance * col_norm[k])
            throw RankDeficient("design matrix column " + std::to_string(k) +
                                " is linearly dependent");

        double alpha = a(k, k) > 0.0 ? -norm : norm;
        for (std::size_t i = k; i < m; ++i) v[i] = a(i, k);
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];

        // Apply H = I - 2 v v^T / (v^T v) to the trailing block and to b.
        for (std::size_t j = k; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * a(i, j);
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) a(i, j) -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i] * b[i];
        double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i];
        diag[k] = alpha;
    }

    std::vector<double> x(p, 0.0);
    for (std::size_t kk = p; kk-- > 0;) {
        double s = b[kk];
        for (std::size_t j = kk + 1; j < p; ++j) s -= a(kk, j) * x[j];
        x[kk] = s / diag[kk];
    }
    return x;
}

}  // namespace edgeperf::linalg

#pragma once

#include <span>
#include <vector>

namespace alphaseed {

// Row-major dense matrix for the small systems the seeding strategies assemble.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data; // rows * cols, row-major

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)]; }

    static DenseMatrix identity(int n);
};

// Minimizes ||A x - b||_2 via a rank-revealing orthogonal decomposition with
// column pivoting; returns the minimum-norm minimizer when A'A is singular.
// Throws NumericError on non-finite input.
std::vector<double> solve_least_squares(const DenseMatrix& A, std::span<const double> b);

// Moore-Penrose pseudo-inverse. Singular values below
// max(rows, cols) * eps * sigma_max are treated as zero.
DenseMatrix pseudo_inverse(const DenseMatrix& A);

} // namespace alphaseed

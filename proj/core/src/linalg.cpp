#include "alphaseed/linalg.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "alphaseed/errors.hpp"

namespace alphaseed {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void check_finite(const DenseMatrix& A) {
    for (double v : A.data)
        if (!std::isfinite(v)) throw NumericError("matrix contains a non-finite entry");
}

double rank_threshold(const DenseMatrix& A) {
    return std::max(A.rows, A.cols) * std::numeric_limits<double>::epsilon();
}

} // namespace

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

std::vector<double> solve_least_squares(const DenseMatrix& A, std::span<const double> b) {
    if (A.rows < 1 || A.cols < 1) throw NumericError("least squares needs a non-empty matrix");
    if (static_cast<int>(b.size()) != A.rows)
        throw NumericError("rhs length does not match matrix rows");
    check_finite(A);
    for (double v : b)
        if (!std::isfinite(v)) throw NumericError("rhs contains a non-finite entry");

    RowMajorMap mat(A.data.data(), A.rows, A.cols);
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(rank_threshold(A));
    cod.compute(mat);
    Eigen::VectorXd x = cod.solve(rhs);

    return std::vector<double>(x.data(), x.data() + x.size());
}

DenseMatrix pseudo_inverse(const DenseMatrix& A) {
    if (A.rows < 1 || A.cols < 1) throw NumericError("pseudo-inverse needs a non-empty matrix");
    check_finite(A);

    RowMajorMap mat(A.data.data(), A.rows, A.cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = rank_threshold(A) * (s.size() > 0 ? s(0) : 0.0);

    Eigen::VectorXd inv_s = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) inv_s(i) = 1.0 / s(i);

    Eigen::MatrixXd pinv = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().transpose();

    DenseMatrix out(A.cols, A.rows);
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out.at(r, c) = pinv(r, c);
    return out;
}

} // namespace alphaseed

#include "amc/linalg.hpp"

#include "amc/rational.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace amc {

namespace {

// One MGS sweep of v against Q, done twice for stability.
Vec project_out(const Mat& Q, Vec v) {
    for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < Q.cols(); ++k) v -= Q.col(k).dot(v) * Q.col(k);
    return v;
}

RatMat to_rational(const Mat& a) {
    RatMat r(static_cast<size_t>(a.rows()), std::vector<Rat>(static_cast<size_t>(a.cols())));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r[static_cast<size_t>(i)][static_cast<size_t>(j)] = rat_from_double(a(i, j));
    return r;
}

}  // namespace

Basis orthonormalize(const Mat& cols, const Tolerance& tol) {
    Basis b(static_cast<int>(cols.rows()));
    b.Q = Mat(cols.rows(), 0);
    for (int j = 0; j < cols.cols(); ++j) basis_append(b, cols.col(j), tol);
    return b;
}

bool basis_append(Basis& basis, const Vec& v, const Tolerance& tol) {
    if (basis.Q.rows() == 0 && basis.Q.cols() == 0) basis.Q = Mat(v.size(), 0);
    if (basis.Q.rows() != v.size()) throw std::invalid_argument("basis_append: dimension mismatch");
    double norm0 = v.norm();
    if (norm0 == 0.0) return false;
    Vec w = project_out(basis.Q, v);
    if (w.norm() <= tol.threshold * std::max(norm0, 1.0) * basis.ambient()) return false;
    w /= w.norm();
    basis.Q.conservativeResize(Eigen::NoChange, basis.Q.cols() + 1);
    basis.Q.col(basis.Q.cols() - 1) = w;
    return true;
}

Mat submatrix_rows(const Mat& a, const Indices& rows) {
    Mat out(static_cast<int>(rows.size()), a.cols());
    for (size_t t = 0; t < rows.size(); ++t) {
        if (rows[t] < 0 || rows[t] >= a.rows())
            throw std::out_of_range("submatrix_rows: row index out of range");
        out.row(static_cast<int>(t)) = a.row(rows[t]);
    }
    return out;
}

double restricted_residual(const Basis& basis, const Indices& rows, const Vec& x_rows) {
    if (static_cast<int>(rows.size()) != x_rows.size())
        throw std::invalid_argument("restricted_residual: shape mismatch");
    if (basis.empty()) return x_rows.norm();
    Mat Qr = submatrix_rows(basis.Q, rows);
    Eigen::JacobiSVD<Mat> svd(Qr, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec c = svd.solve(x_rows);
    return (x_rows - Qr * c).norm();
}

Vec reconstruct_column(const Basis& basis, const Indices& rows, const Vec& x_rows,
                       const Tolerance& tol) {
    if (basis.empty()) return Vec::Zero(basis.ambient());
    Mat Qr = submatrix_rows(basis.Q, rows);
    if (numeric_rank(Qr, tol) < basis.dim())
        throw std::runtime_error("reconstruct_column: row set does not determine coefficients");
    Vec c = Qr.colPivHouseholderQr().solve(x_rows);
    return basis.Q * c;
}

Vec reconstruct_column_lenient(const Basis& basis, const Indices& rows, const Vec& x_rows) {
    if (basis.empty()) return Vec::Zero(basis.ambient());
    Mat Qr = submatrix_rows(basis.Q, rows);
    Eigen::JacobiSVD<Mat> svd(Qr, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec c = svd.solve(x_rows);
    return basis.Q * c;
}

int numeric_rank(const Mat& a, const Tolerance& tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    if (tol.exact) return rational_rank(to_rational(a));
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    double cut = rank_cutoff(tol, s(0), static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

bool is_nonsingular(const Mat& a, const Tolerance& tol) {
    if (a.rows() != a.cols()) return false;
    if (a.rows() == 0) return true;
    if (tol.exact) return rational_nonsingular(to_rational(a));
    return numeric_rank(a, tol) == a.rows();
}

double subspace_angle_sin(const Basis& basis, const Vec& v) {
    double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("subspace_angle_sin: zero vector");
    if (basis.empty()) return 1.0;
    Vec u = v / n;
    Vec proj = basis.Q * (basis.Q.transpose() * u);
    double s = (u - proj).norm();
    return std::min(1.0, std::max(0.0, s));
}

}  // namespace amc

#pragma once

#include "amc/types.hpp"

namespace amc {

// Column-orthonormal basis of a subspace; Q has orthonormal columns.
struct Basis {
    Mat Q;

    Basis() : Q(0, 0) {}
    explicit Basis(int ambient) : Q(ambient, 0) {}

    int ambient() const { return static_cast<int>(Q.rows()); }
    int dim() const { return static_cast<int>(Q.cols()); }
    bool empty() const { return Q.cols() == 0; }
};

// Modified Gram-Schmidt over the columns in input order, with a second
// reorthogonalization pass. Columns whose residual falls below
// tol * original_norm are dropped.
Basis orthonormalize(const Mat& cols, const Tolerance& tol = {});

// Appends one vector to the basis if its residual survives; returns false
// when the vector already lies in the span.
bool basis_append(Basis& basis, const Vec& v, const Tolerance& tol = {});

Mat submatrix_rows(const Mat& a, const Indices& rows);

// Norm of x_rows minus its least-squares projection onto basis rows(rows).
// Empty basis returns ||x_rows||.
double restricted_residual(const Basis& basis, const Indices& rows, const Vec& x_rows);

// Coefficients from the rows in `rows`, then a full-length reconstruction.
// Throws when the restricted basis loses rank, since the coefficients are
// then not determined by those rows.
Vec reconstruct_column(const Basis& basis, const Indices& rows, const Vec& x_rows,
                       const Tolerance& tol = {});

// Same map without the rank guard; rank-deficient restrictions fall back to
// the minimum-norm solution.
Vec reconstruct_column_lenient(const Basis& basis, const Indices& rows, const Vec& x_rows);

int numeric_rank(const Mat& a, const Tolerance& tol = {});
bool is_nonsingular(const Mat& a, const Tolerance& tol = {});

// sin of the principal angle between a unit vector and a subspace.
double subspace_angle_sin(const Basis& basis, const Vec& v);

}  // namespace amc

#pragma once

#include "amc/types.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace amc {

// Product of two standard-normal factors; rank r almost surely.
Mat gen_gaussian_lowrank(int m, int n, int r, uint64_t seed);

// Integer-valued rank-r product with factor entries in [-mag, mag].
Mat gen_integer_lowrank(int m, int n, int r, int mag, uint64_t seed);

// Replaces c random rows with fresh Gaussian rows; the column space gains c
// standard basis directions and the rank grows by c.
Mat make_column_space_coherent(const Mat& a, int c, uint64_t seed);

// Same construction on columns; the row space gains c basis directions.
Mat make_row_space_coherent(const Mat& a, int c, uint64_t seed);

// Rank-r matrix whose column space holds coh_cols standard basis directions
// and whose row space holds coh_rows. coh_cols + coh_rows <= r required.
Mat gen_lowrank_with_classes(int m, int n, int r, int coh_cols, int coh_rows, uint64_t seed);

// Replaces `count` uniformly chosen columns with standard-normal vectors;
// returns the hidden index set, sorted.
std::pair<Mat, Indices> inject_sparse_noise_columns(const Mat& a, int count, uint64_t seed);

// Normalizes each column to unit norm, then adds a perturbation of norm
// uniform in [0, eps] per column. Throws on a zero column.
Mat inject_bounded_noise(const Mat& a, double eps, uint64_t seed);

Mat normalize_columns(const Mat& a);

// Hand-pinned worked examples, bit-exact integer matrices.
Mat named_fixture(const std::string& name);

// Cost matrices for the heterogeneous-cost fixtures; eps parametrizes the
// ratio family.
Mat named_fixture_costs(const std::string& name, double eps = 0.0);

}  // namespace amc

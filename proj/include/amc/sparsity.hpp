#pragma once

#include "amc/linalg.hpp"
#include "amc/types.hpp"

#include <string>
#include <vector>

namespace amc {

struct SubspaceProfile {
    int m = 0;
    int r = 0;
    int psi = 0;
    int psi_bar = 0;
    double mu = 0.0;
    bool exact = true;
};

inline constexpr int kExactNonsparsityCap = 22;

// (m/r) * max_j ||P e_j||^2 over standard basis vectors.
double coherence(const Basis& u);

// Minimum nonzero count over nonzero vectors of span(Q). Exhaustive up to
// kExactNonsparsityCap ambient rows; above that a sampled upper bound is
// returned and *exact is cleared.
int nonsparsity_number_exact(const Basis& u, bool* exact = nullptr, const Tolerance& tol = {});

// m - psi for the same subspace.
int sparsity_number(const Basis& u, bool* exact = nullptr, const Tolerance& tol = {});

SubspaceProfile column_space_profile(const Mat& a, const Tolerance& tol = {});
SubspaceProfile row_space_profile(const Mat& a, const Tolerance& tol = {});

// Names of violated profile inequalities; empty when all hold.
std::vector<std::string> validate_profile(const SubspaceProfile& p);

}  // namespace amc

#pragma once

#include "amc/algorithms.hpp"
#include "amc/oracle.hpp"
#include "amc/types.hpp"

namespace amc {

struct EereiParams {
    int r = 1;
    int psi_u = 1;
    int psi_v = 1;
    int xi = 0;
    double eps = 0.1;
    uint64_t seed = 0;
    Tolerance tol;
};

// Column-space recovery that tolerates up to xi corrupted columns: the
// residual sweep runs without a rank cap, then columns whose removal drops
// the rank of the recovered matrix are flagged as corrupted.
CompletionResult run_eerei(Oracle& oracle, const EereiParams& params);

// Columns j with rank(a minus column j) < rank(a).
Indices rank_decrement_columns(const Mat& a, const Tolerance& tol = {});

// Worst-case angle accumulated over k detected directions, (3pi/2) sqrt(k eps).
double angle_cap(int k, double eps);

// Coherence of a k-dimensional estimated subspace within angle theta of a
// subspace with coherence mu_k.
double noisy_coherence_bound(double mu_k, int m, int k, double theta);

struct LrebnParams {
    int r = 1;
    double mu = 1.0;
    double eps = 0.0;
    double delta = 0.05;
    uint64_t seed = 0;
    Tolerance tol;
    double d_scale = 72.0;
    bool adaptive = true;
};

// Streaming noisy completion with a growing per-column sample size. Each
// column draws a fresh sample set; detections enlarge the basis, update the
// angle estimate, and enlarge d for later columns.
CompletionResult run_lrebn(Oracle& oracle, const LrebnParams& params);

}  // namespace amc

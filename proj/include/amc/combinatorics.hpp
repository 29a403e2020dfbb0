#pragma once

#include "amc/rational.hpp"
#include "amc/rng.hpp"

#include <utility>
#include <vector>

namespace amc {

// Probing a length-m row holding k nonzeros uniformly without replacement:
// expected position of the first nonzero, (m+1)/(k+1).
Rat expected_first_one_position(int m, int k);

// P(first nonzero appears after position a) = C(m-a, k)/C(m, k).
Rat first_one_tail(int m, int k, int a);

// P(r-th success lands on trial N) for success probability k/m.
double tau_pmf(int k, int m, int r, long long N);
Rat tau_pmf_exact(int k, int m, int r, long long N);

// Ratio tau(N+1)/tau(N) in closed form: (N/(N-r+1)) * (1 - k/m).
Rat tau_ratio(int k, int m, int r, long long N);

// P(tau > N): fewer than r successes in the first N trials.
double tau_tail(int k, int m, int r, long long N);

// Simulated first-hit positions under the sequential-draw process where
// step t hits with probability k/(m-t+1).
std::vector<int> monte_carlo_detection(int m, int k, int trials, uint64_t seed);

// Bound helpers for the recovery algorithms. Logs are natural.
double err_bound(int m, int n, int r, int psi_u, int psi_v, double eps);
std::pair<double, double> erre_bound(int m, int n, int r, int psi_u, int psi_v, double eps,
                                     int T);
double erei_sample_size(int m, int r, int psi_u, int psi_v, double eps);
double eerei_sample_size(int m, int r, int psi_u, int psi_v, int xi, double eps);
double eerei_bound(int m, int n, int r, int psi_u, int psi_v, int xi, double eps);
long long lrebn_d(double mu, int r, double delta, double theta, int m);

__int128 binom_i128(int n, int k);

}  // namespace amc

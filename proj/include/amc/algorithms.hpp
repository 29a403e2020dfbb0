#pragma once

#include "amc/linalg.hpp"
#include "amc/oracle.hpp"
#include "amc/types.hpp"

#include <functional>
#include <optional>

namespace amc {

struct CompletionResult {
    Mat recovered;
    int r_hat = 0;
    bool failed = false;
    long long observations = 0;
    double cost = 0.0;
    int phases = 1;
    double bound = 0.0;
    bool bound_defined = false;
    Indices basis_columns;
    Indices pivot_rows;
    Indices flagged_columns;
    std::vector<long long> column_sample_sizes;
    std::vector<int> column_basis_dims;
    std::vector<double> angle_history;
};

struct Ks2013Params {
    int d = 1;
    uint64_t seed = 0;
    Tolerance tol;
    std::optional<Indices> fixed_omega;
};

struct ErcsParams {
    int d = 1;
    Tolerance tol;
    std::optional<Indices> fixed_rows;
    bool exact_when_integer = true;
};

struct ErrParams {
    int r = 0;
    uint64_t seed = 0;
    Tolerance tol;
    bool exact_when_integer = true;
    std::function<void(int, int)> on_probe;
    std::function<void(int, int, int)> on_detect;
};

struct ErreParams {
    int T = 1;
    uint64_t seed = 0;
    Tolerance tol;
    bool exact_when_integer = true;
};

struct EreiParams {
    int r = 1;
    int psi_u = 1;
    int psi_v = 1;
    double eps = 0.1;
    uint64_t seed = 0;
    Tolerance tol;
};

// Test hooks: delta_sampler replaces the per-column row draw, row_selector
// replaces the pivot-row choice after a detection.
struct EreiHooks {
    std::function<Indices(int col, int d, const Indices& r_rows, Rng&)> delta_sampler;
    std::function<int(const Basis&, const Indices& r_rows, const Indices& omega, Rng&)>
        row_selector;
};

CompletionResult run_ks2013(Oracle& oracle, const Ks2013Params& params);
CompletionResult run_ercs(Oracle& oracle, const ErcsParams& params);
CompletionResult run_err(Oracle& oracle, const ErrParams& params);
CompletionResult run_erre(Oracle& oracle, const ErreParams& params);
CompletionResult run_erei(Oracle& oracle, const EreiParams& params);

// Shared engine behind run_erei and the noisy-column variant: fixed
// per-column sample size d, pivot-row set growth, final back-projection.
CompletionResult run_erei_with_sample_size(Oracle& oracle, int d, uint64_t seed,
                                           const Tolerance& tol, const EreiHooks& hooks = {});

}  // namespace amc

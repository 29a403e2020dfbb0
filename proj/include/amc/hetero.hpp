#pragma once

#include "amc/algorithms.hpp"
#include "amc/oracle.hpp"
#include "amc/types.hpp"

namespace amc {

// Two-stage observation plan: a row set observed in full, plus a column set
// observed in full. cost counts the union, so the R x C block is not charged
// twice.
struct TwoStagePlan {
    Indices rows;
    Indices cols;
    double cost = 0.0;
};

double two_stage_cost(const CostModel& cost, int m, int n, const Indices& rows,
                      const Indices& cols);

struct ErhcParams {
    int psi_bar = 0;
    Tolerance tol;
    bool exact_when_integer = true;
};

struct ErhcResult {
    CompletionResult completion;
    TwoStagePlan plan;
    Indices column_order;
};

// Cost-aware two-stage completion with per-entry prices: stage one takes the
// psi_bar + 1 cheapest rows, stage two sweeps columns by ascending residual
// price and fully observes the ones that enlarge the basis.
ErhcResult run_erhc(Oracle& oracle, const ErhcParams& params);

// Per-column price variant: rows are index order, columns sweep by ascending
// column price.
ErhcResult run_erhc_column_costs(Oracle& oracle, const ErhcParams& params);

// Exhaustive minimum over all (psi_bar + 1)-row sets and r-column sets whose
// crossing block has rank r. Unmetered; intended for small instances.
TwoStagePlan optimal_two_stage(const Mat& values, const CostModel& cost, int psi_bar, int r,
                               const Tolerance& tol = {}, int max_dim = 12);

}  // namespace amc

#include "amc/hetero.hpp"

#include "amc/rational.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace amc {

double two_stage_cost(const CostModel& cost, int m, int n, const Indices& rows,
                      const Indices& cols) {
    double total = 0.0;
    for (int i : rows)
        for (int j = 0; j < n; ++j) total += cost.cost_of(i, j);
    for (int j : cols)
        for (int i = 0; i < m; ++i) total += cost.cost_of(i, j);
    for (int i : rows)
        for (int j : cols) total -= cost.cost_of(i, j);
    return total;
}

namespace {

bool rational_independent_cols(const Oracle& oracle, const Indices& rows, const Indices& cols,
                               int j) {
    RatMat a(rows.size(), std::vector<Rat>(cols.size() + 1));
    for (size_t t = 0; t < rows.size(); ++t) {
        for (size_t c = 0; c < cols.size(); ++c)
            a[t][c] = Rat(static_cast<long long>(std::llround(oracle.value(rows[t], cols[c]))));
        a[t][cols.size()] = Rat(static_cast<long long>(std::llround(oracle.value(rows[t], j))));
    }
    return rational_rank(a) == static_cast<int>(cols.size()) + 1;
}

Vec rational_reconstruct_cols(const Oracle& oracle, const Indices& rows, const Indices& cols,
                              int j) {
    size_t k = cols.size();
    if (k == 0) return Vec::Zero(oracle.rows());
    Indices use;
    RatMat acc;
    for (int row : rows) {
        RatMat trial = acc;
        std::vector<Rat> r(k);
        for (size_t c = 0; c < k; ++c)
            r[c] = Rat(static_cast<long long>(std::llround(oracle.value(row, cols[c]))));
        trial.push_back(r);
        if (rational_rank(trial) == static_cast<int>(trial.size())) {
            acc = trial;
            use.push_back(row);
            if (use.size() == k) break;
        }
    }
    if (use.size() != k) throw std::runtime_error("row set does not determine coefficients");
    RatMat sys(k, std::vector<Rat>(k));
    std::vector<Rat> rhs(k);
    for (size_t t = 0; t < k; ++t) {
        for (size_t c = 0; c < k; ++c)
            sys[t][c] = Rat(static_cast<long long>(std::llround(oracle.value(use[t], cols[c]))));
        rhs[t] = Rat(static_cast<long long>(std::llround(oracle.value(use[t], j))));
    }
    std::vector<Rat> coef = rational_solve(sys, rhs);
    Vec out(oracle.rows());
    for (int i = 0; i < oracle.rows(); ++i) {
        Rat acc_v(0);
        for (size_t c = 0; c < k; ++c)
            acc_v = acc_v +
                    coef[c] * Rat(static_cast<long long>(std::llround(oracle.value(i, cols[c]))));
        out(i) = acc_v.to_double();
    }
    return out;
}

ErhcResult greedy_two_stage(Oracle& oracle, const Indices& rows, const Indices& order,
                            const Tolerance& tol, bool exact_when_integer) {
    int m = oracle.rows(), n = oracle.cols();
    bool exact = exact_when_integer && oracle.integer_valued();
    ErhcResult result;
    result.column_order = order;
    result.completion.recovered = Mat::Zero(m, n);
    for (int i : rows) oracle.observe_row(i);
    Basis basis(m);
    Indices picked;
    for (int j : order) {
        Vec x(static_cast<int>(rows.size()));
        for (size_t t = 0; t < rows.size(); ++t)
            x(static_cast<int>(t)) = oracle.observe(rows[t], j);
        bool fire;
        if (exact) {
            fire = rational_independent_cols(oracle, rows, picked, j);
        } else {
            double res = restricted_residual(basis, rows, x);
            fire = res > tol.threshold * x.norm();
        }
        if (fire) {
            Vec col = oracle.observe_column(j);
            basis_append(basis, col, tol);
            picked.push_back(j);
            result.completion.basis_columns.push_back(j);
            result.completion.recovered.col(j) = col;
        } else {
            result.completion.recovered.col(j) =
                exact ? rational_reconstruct_cols(oracle, rows, picked, j)
                      : reconstruct_column_lenient(basis, rows, x);
        }
    }
    result.completion.r_hat = static_cast<int>(picked.size());
    result.completion.pivot_rows = rows;
    result.completion.observations = oracle.stats().count;
    result.completion.cost = oracle.stats().cost;
    result.plan.rows = rows;
    result.plan.cols = picked;
    std::sort(result.plan.cols.begin(), result.plan.cols.end());
    result.plan.cost = two_stage_cost(oracle.cost_model(), m, n, result.plan.rows,
                                      result.plan.cols);
    return result;
}

Indices sorted_by_key(int count, const std::vector<double>& key) {
    Indices order(static_cast<size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key[static_cast<size_t>(a)] < key[static_cast<size_t>(b)]; });
    return order;
}

}  // namespace

ErhcResult run_erhc(Oracle& oracle, const ErhcParams& params) {
    int m = oracle.rows(), n = oracle.cols();
    int d = params.psi_bar + 1;
    if (params.psi_bar < 0 || d > m)
        throw std::invalid_argument("erhc: need 0 <= psi_bar <= m - 1");
    const CostModel& cost = oracle.cost_model();
    std::vector<double> row_price(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) row_price[static_cast<size_t>(i)] += cost.cost_of(i, j);
    Indices row_order = sorted_by_key(m, row_price);
    Indices rows(row_order.begin(), row_order.begin() + d);
    std::sort(rows.begin(), rows.end());
    std::vector<double> residual_price(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            if (std::find(rows.begin(), rows.end(), i) == rows.end())
                residual_price[static_cast<size_t>(j)] += cost.cost_of(i, j);
    Indices order = sorted_by_key(n, residual_price);
    return greedy_two_stage(oracle, rows, order, params.tol, params.exact_when_integer);
}

ErhcResult run_erhc_column_costs(Oracle& oracle, const ErhcParams& params) {
    int m = oracle.rows(), n = oracle.cols();
    int d = params.psi_bar + 1;
    if (params.psi_bar < 0 || d > m)
        throw std::invalid_argument("erhc: need 0 <= psi_bar <= m - 1");
    const CostModel& cost = oracle.cost_model();
    Indices rows;
    for (int i = 0; i < d; ++i) rows.push_back(i);
    std::vector<double> price(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) price[static_cast<size_t>(j)] = cost.cost_of(0, j);
    Indices order = sorted_by_key(n, price);
    return greedy_two_stage(oracle, rows, order, params.tol, params.exact_when_integer);
}

namespace {

bool next_combination(Indices& c, int n) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < n - k + i) {
            c[static_cast<size_t>(i)] += 1;
            for (int t = i + 1; t < k; ++t)
                c[static_cast<size_t>(t)] = c[static_cast<size_t>(t - 1)] + 1;
            return true;
        }
    }
    return false;
}

Indices first_combination(int k) {
    Indices c(static_cast<size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    return c;
}

}  // namespace

TwoStagePlan optimal_two_stage(const Mat& values, const CostModel& cost, int psi_bar, int r,
                               const Tolerance& tol, int max_dim) {
    int m = static_cast<int>(values.rows()), n = static_cast<int>(values.cols());
    if (m > max_dim || n > max_dim)
        throw std::invalid_argument("optimal_two_stage: instance too large for exhaustive search");
    int d = psi_bar + 1;
    if (psi_bar < 0 || d > m)
        throw std::invalid_argument("optimal_two_stage: need 0 <= psi_bar <= m - 1");
    if (r < 0 || r > std::min(m, n))
        throw std::invalid_argument("optimal_two_stage: need 0 <= r <= min(m,n)");
    std::vector<double> row_sum(static_cast<size_t>(m), 0.0);
    std::vector<double> col_sum(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            row_sum[static_cast<size_t>(i)] += cost.cost_of(i, j);
            col_sum[static_cast<size_t>(j)] += cost.cost_of(i, j);
        }
    TwoStagePlan best;
    bool found = false;
    Indices cols = first_combination(r);
    do {
        if (r > 0) {
            Mat full(m, r);
            for (int c = 0; c < r; ++c)
                full.col(c) = values.col(cols[static_cast<size_t>(c)]);
            if (numeric_rank(full, tol) < r) continue;
        }
        Indices rows = first_combination(d);
        do {
            if (r > 0) {
                Mat block(d, r);
                for (int t = 0; t < d; ++t)
                    for (int c = 0; c < r; ++c)
                        block(t, c) = values(rows[static_cast<size_t>(t)],
                                             cols[static_cast<size_t>(c)]);
                if (numeric_rank(block, tol) < r) continue;
            }
            double total = 0.0;
            for (int i : rows) total += row_sum[static_cast<size_t>(i)];
            for (int j : cols) total += col_sum[static_cast<size_t>(j)];
            for (int i : rows)
                for (int j : cols) total -= cost.cost_of(i, j);
            if (!found || total < best.cost) {
                found = true;
                best.rows = rows;
                best.cols = cols;
                best.cost = total;
            }
        } while (next_combination(rows, m));
    } while (r > 0 && next_combination(cols, n));
    if (!found) throw std::runtime_error("optimal_two_stage: no feasible plan at the given rank");
    return best;
}

}  // namespace amc

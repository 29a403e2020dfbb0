#include "amc/algorithms.hpp"

#include "amc/combinatorics.hpp"
#include "amc/rational.hpp"

#include <algorithm>
#include <cmath>

namespace amc {

namespace {

bool residual_fires(const Basis& basis, const Indices& omega, const Vec& x_omega,
                    const Tolerance& tol) {
    double res = restricted_residual(basis, omega, x_omega);
    return res > tol.threshold * x_omega.norm();
}

Rat rat_of(double v) { return Rat(static_cast<long long>(std::llround(v))); }

// Rational independence test of column j against the picked columns,
// restricted to the given rows. Values must have been observed.
bool rational_independent(const Oracle& oracle, const Indices& rows, const Indices& cols,
                          int j) {
    RatMat a(rows.size(), std::vector<Rat>(cols.size() + 1));
    for (size_t t = 0; t < rows.size(); ++t) {
        for (size_t c = 0; c < cols.size(); ++c)
            a[t][c] = rat_of(oracle.value(rows[t], cols[c]));
        a[t][cols.size()] = rat_of(oracle.value(rows[t], j));
    }
    return rational_rank(a) == static_cast<int>(cols.size()) + 1;
}

// Exact reconstruction: coefficients solved on a nonsingular row subset of
// the picked columns, then expanded against the fully observed columns.
Vec rational_reconstruct(const Oracle& oracle, const Indices& rows, const Indices& cols,
                         int j) {
    size_t k = cols.size();
    if (k == 0) return Vec::Zero(oracle.rows());
    Indices use;
    RatMat acc;
    for (int row : rows) {
        RatMat trial = acc;
        std::vector<Rat> r(k);
        for (size_t c = 0; c < k; ++c) r[c] = rat_of(oracle.value(row, cols[c]));
        trial.push_back(r);
        RatMat square(trial.size(), std::vector<Rat>(k));
        for (size_t t = 0; t < trial.size(); ++t) square[t] = trial[t];
        if (rational_rank(square) == static_cast<int>(trial.size())) {
            acc = trial;
            use.push_back(row);
            if (use.size() == k) break;
        }
    }
    if (use.size() != k) throw std::runtime_error("row set does not determine coefficients");
    RatMat sys(k, std::vector<Rat>(k));
    std::vector<Rat> rhs(k);
    for (size_t t = 0; t < k; ++t) {
        for (size_t c = 0; c < k; ++c) sys[t][c] = rat_of(oracle.value(use[t], cols[c]));
        rhs[t] = rat_of(oracle.value(use[t], j));
    }
    std::vector<Rat> coef = rational_solve(sys, rhs);
    Vec out(oracle.rows());
    for (int i = 0; i < oracle.rows(); ++i) {
        Rat acc_v(0);
        for (size_t c = 0; c < k; ++c)
            acc_v = acc_v + coef[c] * rat_of(oracle.value(i, cols[c]));
        out(i) = acc_v.to_double();
    }
    return out;
}

void finalize(CompletionResult& result, const Oracle& oracle) {
    result.observations = oracle.stats().count;
    result.cost = oracle.stats().cost;
    result.phases = std::max(1, static_cast<int>(oracle.stats().phase_counts.size()) - 1);
}

}  // namespace

CompletionResult run_ks2013(Oracle& oracle, const Ks2013Params& params) {
    int m = oracle.rows(), n = oracle.cols();
    if (params.d < 1 || params.d > m) throw std::invalid_argument("ks2013: need 1 <= d <= m");
    CompletionResult result;
    result.recovered = Mat::Zero(m, n);
    Rng rng(params.seed);
    Indices omega;
    if (params.fixed_omega) {
        omega = *params.fixed_omega;
        if (!valid_index_set(omega, m)) throw std::invalid_argument("ks2013: bad fixed omega");
    } else {
        omega = rng.sample_without_replacement(m, params.d);
        std::sort(omega.begin(), omega.end());
    }
    Basis basis(m);
    for (int j = 0; j < n; ++j) {
        Vec x(static_cast<int>(omega.size()));
        for (size_t t = 0; t < omega.size(); ++t) x(static_cast<int>(t)) = oracle.observe(omega[t], j);
        if (residual_fires(basis, omega, x, params.tol)) {
            Vec col = oracle.observe_column(j);
            basis_append(basis, col, params.tol);
            result.basis_columns.push_back(j);
            result.recovered.col(j) = col;
        } else {
            result.recovered.col(j) = reconstruct_column_lenient(basis, omega, x);
        }
    }
    result.r_hat = basis.dim();
    finalize(result, oracle);
    return result;
}

CompletionResult run_ercs(Oracle& oracle, const ErcsParams& params) {
    int m = oracle.rows(), n = oracle.cols();
    if (params.d < 1 || params.d > m) throw std::invalid_argument("ercs: need 1 <= d <= m");
    CompletionResult result;
    result.recovered = Mat::Zero(m, n);
    Indices rows;
    if (params.fixed_rows) {
        rows = *params.fixed_rows;
        if (!valid_index_set(rows, m)) throw std::invalid_argument("ercs: bad fixed rows");
    } else {
        for (int i = 0; i < params.d; ++i) rows.push_back(i);
    }
    for (int i : rows) oracle.observe_row(i);
    bool exact = params.exact_when_integer && oracle.integer_valued();
    Basis basis(m);
    Indices picked;
    for (int j = 0; j < n; ++j) {
        Vec x(static_cast<int>(rows.size()));
        for (size_t t = 0; t < rows.size(); ++t) x(static_cast<int>(t)) = oracle.observe(rows[t], j);
        bool fire = exact ? rational_independent(oracle, rows, picked, j)
                          : residual_fires(basis, rows, x, params.tol);
        if (fire) {
            Vec col = oracle.observe_column(j);
            basis_append(basis, col, params.tol);
            picked.push_back(j);
            result.basis_columns.push_back(j);
            result.recovered.col(j) = col;
        } else {
            result.recovered.col(j) = exact
                                          ? rational_reconstruct(oracle, rows, picked, j)
                                          : reconstruct_column_lenient(basis, rows, x);
        }
    }
    result.r_hat = static_cast<int>(picked.size());
    result.pivot_rows = rows;
    finalize(result, oracle);
    return result;
}

namespace {

// Shared phase engine for the rank-probing algorithms. Each phase draws one
// fresh entry per unfinished column and tests the bordered submatrix; a hit
// fully observes that row and column.
struct PhaseState {
    Indices row_set;
    Indices col_set;
    int r_hat = 0;
    bool any_probe = false;
    bool detected_this_phase = false;
};

void probe_phase(Oracle& oracle, Rng& rng, PhaseState& st, int stop_rank, bool exact,
                 const Tolerance& tol, const std::function<void(int, int)>& on_probe,
                 const std::function<void(int, int, int)>& on_detect) {
    int n = oracle.cols();
    st.any_probe = false;
    st.detected_this_phase = false;
    oracle.begin_phase();
    for (int j = 0; j < n; ++j) {
        if (std::find(st.col_set.begin(), st.col_set.end(), j) != st.col_set.end()) continue;
        int i = oracle.draw_unobserved_uniform(j, rng);
        if (i < 0) continue;
        st.any_probe = true;
        oracle.observe(i, j);
        if (on_probe) on_probe(i, j);
        bool independent;
        Indices rows = st.row_set;
        Indices cols = st.col_set;
        rows.push_back(i);
        if (exact) {
            independent = rational_independent(oracle, rows, cols, j);
        } else {
            Mat sub(static_cast<int>(rows.size()), static_cast<int>(cols.size()) + 1);
            for (size_t t = 0; t < rows.size(); ++t) {
                for (size_t c = 0; c < cols.size(); ++c)
                    sub(static_cast<int>(t), static_cast<int>(c)) = oracle.value(rows[t], cols[c]);
                sub(static_cast<int>(t), static_cast<int>(cols.size())) = oracle.value(rows[t], j);
            }
            independent = is_nonsingular(sub, tol);
        }
        if (independent) {
            oracle.observe_column(j);
            oracle.observe_row(i);
            st.row_set.push_back(i);
            st.col_set.push_back(j);
            st.r_hat += 1;
            st.detected_this_phase = true;
            if (on_detect) on_detect(i, j, st.r_hat);
            if (stop_rank > 0 && st.r_hat >= stop_rank) return;
        }
    }
}

CompletionResult reconstruct_from_pivots(Oracle& oracle, const PhaseState& st, bool exact,
                                         const Tolerance& tol) {
    int m = oracle.rows(), n = oracle.cols();
    CompletionResult result;
    result.recovered = Mat::Zero(m, n);
    result.r_hat = st.r_hat;
    result.basis_columns = st.col_set;
    result.pivot_rows = st.row_set;
    if (st.r_hat == 0) return result;
    Mat picked(m, st.r_hat);
    for (int c = 0; c < st.r_hat; ++c)
        for (int i = 0; i < m; ++i) picked(i, c) = oracle.value(i, st.col_set[static_cast<size_t>(c)]);
    Basis basis = orthonormalize(picked, tol);
    for (int j = 0; j < n; ++j) {
        if (std::find(st.col_set.begin(), st.col_set.end(), j) != st.col_set.end()) {
            for (int i = 0; i < m; ++i) result.recovered(i, j) = oracle.value(i, j);
            continue;
        }
        if (exact) {
            result.recovered.col(j) = rational_reconstruct(oracle, st.row_set, st.col_set, j);
        } else {
            Vec x(st.r_hat);
            for (int t = 0; t < st.r_hat; ++t)
                x(t) = oracle.value(st.row_set[static_cast<size_t>(t)], j);
            result.recovered.col(j) = reconstruct_column_lenient(basis, st.row_set, x);
        }
    }
    return result;
}

}  // namespace

CompletionResult run_err(Oracle& oracle, const ErrParams& params) {
    if (params.r < 0 || params.r > std::min(oracle.rows(), oracle.cols()))
        throw std::invalid_argument("err: need 0 <= r <= min(m,n)");
    Rng rng(params.seed);
    bool exact = params.exact_when_integer && oracle.integer_valued();
    PhaseState st;
    bool failed = false;
    while (st.r_hat < params.r) {
        probe_phase(oracle, rng, st, params.r, exact, params.tol, params.on_probe,
                    params.on_detect);
        if (st.r_hat >= params.r) break;
        if (!st.any_probe) {
            failed = true;
            break;
        }
    }
    CompletionResult result = reconstruct_from_pivots(oracle, st, exact, params.tol);
    result.failed = failed;
    finalize(result, oracle);
    return result;
}

CompletionResult run_erre(Oracle& oracle, const ErreParams& params) {
    if (params.T < 1) throw std::invalid_argument("erre: need T >= 1");
    Rng rng(params.seed);
    bool exact = params.exact_when_integer && oracle.integer_valued();
    PhaseState st;
    int delay = 0;
    while (delay < params.T) {
        delay += 1;
        probe_phase(oracle, rng, st, 0, exact, params.tol, nullptr, nullptr);
        if (st.detected_this_phase) delay = 0;
        if (!st.any_probe) break;
    }
    CompletionResult result = reconstruct_from_pivots(oracle, st, exact, params.tol);
    finalize(result, oracle);
    return result;
}

CompletionResult run_erei_with_sample_size(Oracle& oracle, int d, uint64_t seed,
                                           const Tolerance& tol, const EreiHooks& hooks) {
    int m = oracle.rows(), n = oracle.cols();
    if (d < 1 || d > m) throw std::invalid_argument("erei: need 1 <= d <= m");
    Rng rng(seed);
    CompletionResult result;
    result.recovered = Mat::Zero(m, n);
    Basis basis(m);
    Indices r_rows;
    for (int j = 0; j < n; ++j) {
        Indices delta;
        if (hooks.delta_sampler) {
            delta = hooks.delta_sampler(j, d, r_rows, rng);
        } else {
            Indices open;
            for (int i = 0; i < m; ++i)
                if (std::find(r_rows.begin(), r_rows.end(), i) == r_rows.end())
                    open.push_back(i);
            int take = std::min(d, static_cast<int>(open.size()));
            Indices pick = rng.sample_without_replacement(static_cast<int>(open.size()), take);
            for (int t : pick) delta.push_back(open[static_cast<size_t>(t)]);
        }
        Indices omega = r_rows;
        for (int i : delta)
            if (std::find(omega.begin(), omega.end(), i) == omega.end()) omega.push_back(i);
        std::sort(omega.begin(), omega.end());
        Vec x(static_cast<int>(omega.size()));
        for (size_t t = 0; t < omega.size(); ++t) x(static_cast<int>(t)) = oracle.observe(omega[t], j);
        if (!residual_fires(basis, omega, x, tol)) continue;
        Vec col = oracle.observe_column(j);
        if (!basis_append(basis, col, tol)) continue;
        result.basis_columns.push_back(j);
        int target = basis.dim();
        int chosen = -1;
        if (hooks.row_selector) {
            chosen = hooks.row_selector(basis, r_rows, omega, rng);
        } else {
            for (int a : omega) {
                if (std::find(r_rows.begin(), r_rows.end(), a) != r_rows.end()) continue;
                Indices cand = r_rows;
                cand.push_back(a);
                if (numeric_rank(submatrix_rows(basis.Q, cand), tol) == target) {
                    chosen = a;
                    break;
                }
            }
            if (chosen < 0) {
                Indices rest;
                for (int i = 0; i < m; ++i)
                    if (std::find(r_rows.begin(), r_rows.end(), i) == r_rows.end() &&
                        std::find(omega.begin(), omega.end(), i) == omega.end())
                        rest.push_back(i);
                Indices order =
                    rng.sample_without_replacement(static_cast<int>(rest.size()),
                                                   static_cast<int>(rest.size()));
                for (int t : order) {
                    int a = rest[static_cast<size_t>(t)];
                    Indices cand = r_rows;
                    cand.push_back(a);
                    if (numeric_rank(submatrix_rows(basis.Q, cand), tol) == target) {
                        chosen = a;
                        break;
                    }
                }
            }
        }
        if (chosen < 0) {
            result.failed = true;
            break;
        }
        r_rows.push_back(chosen);
    }
    for (int i : r_rows) oracle.observe_row(i);
    for (int j = 0; j < n; ++j) {
        bool full = true;
        for (int i = 0; i < m; ++i)
            if (!oracle.observed(i, j)) {
                full = false;
                break;
            }
        if (full) {
            for (int i = 0; i < m; ++i) result.recovered(i, j) = oracle.value(i, j);
            continue;
        }
        if (basis.dim() == 0 || result.failed) continue;
        Vec x(static_cast<int>(r_rows.size()));
        for (size_t t = 0; t < r_rows.size(); ++t) x(static_cast<int>(t)) = oracle.value(r_rows[t], j);
        result.recovered.col(j) = reconstruct_column(basis, r_rows, x, tol);
    }
    result.r_hat = basis.dim();
    result.pivot_rows = r_rows;
    finalize(result, oracle);
    return result;
}

CompletionResult run_erei(Oracle& oracle, const EreiParams& params) {
    int m = oracle.rows();
    double raw = erei_sample_size(m, params.r, params.psi_u, params.psi_v, params.eps);
    int d = static_cast<int>(std::ceil(raw));
    d = std::max(1, std::min(d, m));
    CompletionResult result = run_erei_with_sample_size(oracle, d, params.seed, params.tol);
    result.bound = err_bound(m, oracle.cols(), params.r, params.psi_u, params.psi_v, params.eps);
    result.bound_defined = true;
    return result;
}

}  // namespace amc

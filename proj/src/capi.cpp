#include "amc.h"

#include "amc/algorithms.hpp"
#include "amc/combinatorics.hpp"
#include "amc/csv.hpp"
#include "amc/generators.hpp"
#include "amc/hetero.hpp"
#include "amc/noise.hpp"
#include "amc/oracle.hpp"
#include "amc/sparsity.hpp"
#include "amc/verify.hpp"

#include <cstring>
#include <sstream>
#include <string>

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        return fail(AMC_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(AMC_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(AMC_ERR_RUNTIME, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int* dup_indices(const amc::Indices& v) {
    int* out = new int[v.empty() ? 1 : v.size()];
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

amc::CostModel make_cost_model(int cost_kind, const double* costs, int m, int n) {
    switch (cost_kind) {
        case 0: return amc::CostModel::uniform();
        case 1: {
            if (!costs) throw std::invalid_argument("per-column cost array is null");
            amc::Vec c(n);
            for (int j = 0; j < n; ++j) c(j) = costs[j];
            return amc::CostModel::per_column(std::move(c));
        }
        case 2: {
            if (!costs) throw std::invalid_argument("per-entry cost array is null");
            amc::Mat c(m, n);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) c(i, j) = costs[i * n + j];
            return amc::CostModel::per_entry(std::move(c));
        }
        default: throw std::invalid_argument("unknown cost kind");
    }
}

}  // namespace

struct amc_matrix {
    amc::Mat value;
};

struct amc_oracle {
    amc::Oracle value;
};

struct amc_result {
    amc::CompletionResult completion;
    bool has_plan = false;
    amc::TwoStagePlan plan;
};

extern "C" {

const char* amc_version(void) { return "1.0.0"; }

const char* amc_last_error(void) { return g_last_error.c_str(); }

void amc_free_string(char* s) { delete[] s; }
void amc_free_indices(int* p) { delete[] p; }
void amc_free_longs(long long* p) { delete[] p; }
void amc_free_doubles(double* p) { delete[] p; }

int amc_matrix_create(int rows, int cols, const double* data_row_major, amc_matrix** out) {
    return guarded([&] {
        if (rows < 1 || cols < 1 || !data_row_major || !out)
            throw std::invalid_argument("bad matrix arguments");
        amc::Mat a(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) a(i, j) = data_row_major[i * cols + j];
        *out = new amc_matrix{std::move(a)};
        return AMC_OK;
    });
}

int amc_matrix_dims(const amc_matrix* a, int* rows, int* cols) {
    return guarded([&] {
        if (!a || !rows || !cols) throw std::invalid_argument("null argument");
        *rows = static_cast<int>(a->value.rows());
        *cols = static_cast<int>(a->value.cols());
        return AMC_OK;
    });
}

int amc_matrix_data(const amc_matrix* a, double* out_row_major) {
    return guarded([&] {
        if (!a || !out_row_major) throw std::invalid_argument("null argument");
        int rows = static_cast<int>(a->value.rows()), cols = static_cast<int>(a->value.cols());
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out_row_major[i * cols + j] = a->value(i, j);
        return AMC_OK;
    });
}

int amc_matrix_read_csv(const char* path, amc_matrix** out) {
    return guarded([&] {
        if (!path || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{amc::read_csv_matrix(path)};
        return AMC_OK;
    });
}

int amc_matrix_write_csv(const amc_matrix* a, const char* path) {
    return guarded([&] {
        if (!a || !path) throw std::invalid_argument("null argument");
        amc::write_csv_matrix(path, a->value);
        return AMC_OK;
    });
}

void amc_matrix_free(amc_matrix* a) { delete a; }

int amc_gen_gaussian_lowrank(int m, int n, int r, uint64_t seed, amc_matrix** out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = new amc_matrix{amc::gen_gaussian_lowrank(m, n, r, seed)};
        return AMC_OK;
    });
}

int amc_gen_integer_lowrank(int m, int n, int r, int mag, uint64_t seed, amc_matrix** out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = new amc_matrix{amc::gen_integer_lowrank(m, n, r, mag, seed)};
        return AMC_OK;
    });
}

int amc_gen_lowrank_with_classes(int m, int n, int r, int coh_cols, int coh_rows,
                                 uint64_t seed, amc_matrix** out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = new amc_matrix{amc::gen_lowrank_with_classes(m, n, r, coh_cols, coh_rows, seed)};
        return AMC_OK;
    });
}

int amc_named_fixture(const char* name, amc_matrix** out) {
    return guarded([&] {
        if (!name || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{amc::named_fixture(name)};
        return AMC_OK;
    });
}

int amc_named_fixture_costs(const char* name, double eps, amc_matrix** out) {
    return guarded([&] {
        if (!name || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{amc::named_fixture_costs(name, eps)};
        return AMC_OK;
    });
}

int amc_inject_sparse_noise_columns(const amc_matrix* a, int count, uint64_t seed,
                                    amc_matrix** out, int** out_cols, int* out_count) {
    return guarded([&] {
        if (!a || !out || !out_cols || !out_count) throw std::invalid_argument("null argument");
        auto [noisy, cols] = amc::inject_sparse_noise_columns(a->value, count, seed);
        *out = new amc_matrix{std::move(noisy)};
        *out_cols = dup_indices(cols);
        *out_count = static_cast<int>(cols.size());
        return AMC_OK;
    });
}

int amc_inject_bounded_noise(const amc_matrix* a, double eps, uint64_t seed, amc_matrix** out) {
    return guarded([&] {
        if (!a || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{amc::inject_bounded_noise(a->value, eps, seed)};
        return AMC_OK;
    });
}

int amc_normalize_columns(const amc_matrix* a, amc_matrix** out) {
    return guarded([&] {
        if (!a || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{amc::normalize_columns(a->value)};
        return AMC_OK;
    });
}

}  // extern "C"

namespace {

void profile_to_c(const amc::SubspaceProfile& p, amc_profile* out) {
    out->m = p.m;
    out->r = p.r;
    out->psi = p.psi;
    out->psi_bar = p.psi_bar;
    out->mu = p.mu;
    out->exact = p.exact ? 1 : 0;
}

}  // namespace

extern "C" {

int amc_column_space_profile(const amc_matrix* a, amc_profile* out) {
    return guarded([&] {
        if (!a || !out) throw std::invalid_argument("null argument");
        profile_to_c(amc::column_space_profile(a->value), out);
        return AMC_OK;
    });
}

int amc_row_space_profile(const amc_matrix* a, amc_profile* out) {
    return guarded([&] {
        if (!a || !out) throw std::invalid_argument("null argument");
        profile_to_c(amc::row_space_profile(a->value), out);
        return AMC_OK;
    });
}

int amc_validate_profile(const amc_profile* p, char** out_violations) {
    return guarded([&] {
        if (!p || !out_violations) throw std::invalid_argument("null argument");
        amc::SubspaceProfile prof;
        prof.m = p->m;
        prof.r = p->r;
        prof.psi = p->psi;
        prof.psi_bar = p->psi_bar;
        prof.mu = p->mu;
        prof.exact = p->exact != 0;
        std::string joined;
        for (const auto& v : amc::validate_profile(prof)) {
            if (!joined.empty()) joined += "\n";
            joined += v;
        }
        *out_violations = dup_string(joined);
        return AMC_OK;
    });
}

int amc_oracle_create(const amc_matrix* truth, int cost_kind, const double* costs,
                      int noise_kind, double noise_param, uint64_t seed, amc_oracle** out) {
    return guarded([&] {
        if (!truth || !out) throw std::invalid_argument("null argument");
        int m = static_cast<int>(truth->value.rows());
        int n = static_cast<int>(truth->value.cols());
        amc::CostModel cost = make_cost_model(cost_kind, costs, m, n);
        amc::NoiseSpec noise;
        switch (noise_kind) {
            case 0: noise = amc::NoiseSpec::clean(); break;
            case 1:
                noise = amc::NoiseSpec::sparse_columns(static_cast<int>(noise_param));
                break;
            case 2: noise = amc::NoiseSpec::bounded(noise_param); break;
            default: throw std::invalid_argument("unknown noise kind");
        }
        *out = new amc_oracle{amc::Oracle(truth->value, std::move(cost), noise, seed)};
        return AMC_OK;
    });
}

int amc_oracle_stats(const amc_oracle* o, long long* count, double* cost) {
    return guarded([&] {
        if (!o || !count || !cost) throw std::invalid_argument("null argument");
        *count = o->value.stats().count;
        *cost = o->value.stats().cost;
        return AMC_OK;
    });
}

int amc_oracle_injected_columns(const amc_oracle* o, int** out_cols, int* out_count) {
    return guarded([&] {
        if (!o || !out_cols || !out_count) throw std::invalid_argument("null argument");
        const amc::Indices& cols = o->value.injected_noisy_columns();
        *out_cols = dup_indices(cols);
        *out_count = static_cast<int>(cols.size());
        return AMC_OK;
    });
}

int amc_oracle_noisy_view(const amc_oracle* o, amc_matrix** out) {
    return guarded([&] {
        if (!o || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{o->value.noisy_view()};
        return AMC_OK;
    });
}

int amc_oracle_truth(const amc_oracle* o, amc_matrix** out) {
    return guarded([&] {
        if (!o || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{o->value.truth()};
        return AMC_OK;
    });
}

void amc_oracle_free(amc_oracle* o) { delete o; }

}  // extern "C"

namespace {

template <typename F>
int run_into(amc_oracle* o, amc_result** out, F&& f) {
    return guarded([&] {
        if (!o || !out) throw std::invalid_argument("null argument");
        auto* r = new amc_result;
        try {
            f(o->value, *r);
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
        return AMC_OK;
    });
}

}  // namespace

extern "C" {

int amc_run_ks2013(amc_oracle* o, int d, uint64_t seed, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::Ks2013Params params;
        params.d = d;
        params.seed = seed;
        r.completion = amc::run_ks2013(oracle, params);
    });
}

int amc_run_ercs(amc_oracle* o, int d, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::ErcsParams params;
        params.d = d;
        r.completion = amc::run_ercs(oracle, params);
    });
}

int amc_run_err(amc_oracle* o, int rank, uint64_t seed, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::ErrParams params;
        params.r = rank;
        params.seed = seed;
        r.completion = amc::run_err(oracle, params);
    });
}

int amc_run_erre(amc_oracle* o, int T, uint64_t seed, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::ErreParams params;
        params.T = T;
        params.seed = seed;
        r.completion = amc::run_erre(oracle, params);
    });
}

int amc_run_erei(amc_oracle* o, int rank, int psi_u, int psi_v, double eps, uint64_t seed,
                 amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::EreiParams params;
        params.r = rank;
        params.psi_u = psi_u;
        params.psi_v = psi_v;
        params.eps = eps;
        params.seed = seed;
        r.completion = amc::run_erei(oracle, params);
    });
}

int amc_run_eerei(amc_oracle* o, int rank, int psi_u, int psi_v, int xi, double eps,
                  uint64_t seed, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::EereiParams params;
        params.r = rank;
        params.psi_u = psi_u;
        params.psi_v = psi_v;
        params.xi = xi;
        params.eps = eps;
        params.seed = seed;
        r.completion = amc::run_eerei(oracle, params);
    });
}

int amc_run_lrebn(amc_oracle* o, int rank, double mu, double eps, double delta,
                  double d_scale, int adaptive, uint64_t seed, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::LrebnParams params;
        params.r = rank;
        params.mu = mu;
        params.eps = eps;
        params.delta = delta;
        params.d_scale = d_scale;
        params.adaptive = adaptive != 0;
        params.seed = seed;
        r.completion = amc::run_lrebn(oracle, params);
    });
}

int amc_run_erhc(amc_oracle* o, int psi_bar, int per_column_variant, amc_result** out) {
    return run_into(o, out, [&](amc::Oracle& oracle, amc_result& r) {
        amc::ErhcParams params;
        params.psi_bar = psi_bar;
        amc::ErhcResult res = per_column_variant ? amc::run_erhc_column_costs(oracle, params)
                                                 : amc::run_erhc(oracle, params);
        r.completion = std::move(res.completion);
        r.plan = std::move(res.plan);
        r.has_plan = true;
    });
}

int amc_result_recovered(const amc_result* r, amc_matrix** out) {
    return guarded([&] {
        if (!r || !out) throw std::invalid_argument("null argument");
        *out = new amc_matrix{r->completion.recovered};
        return AMC_OK;
    });
}

int amc_result_scalars(const amc_result* r, int* r_hat, int* failed, long long* observations,
                       double* cost, int* phases, double* bound, int* bound_defined) {
    return guarded([&] {
        if (!r) throw std::invalid_argument("null argument");
        if (r_hat) *r_hat = r->completion.r_hat;
        if (failed) *failed = r->completion.failed ? 1 : 0;
        if (observations) *observations = r->completion.observations;
        if (cost) *cost = r->completion.cost;
        if (phases) *phases = r->completion.phases;
        if (bound) *bound = r->completion.bound;
        if (bound_defined) *bound_defined = r->completion.bound_defined ? 1 : 0;
        return AMC_OK;
    });
}

int amc_result_indices(const amc_result* r, int which, int** out, int* out_count) {
    return guarded([&] {
        if (!r || !out || !out_count) throw std::invalid_argument("null argument");
        const amc::Indices* source = nullptr;
        amc::Indices dims;
        switch (which) {
            case 0: source = &r->completion.basis_columns; break;
            case 1: source = &r->completion.pivot_rows; break;
            case 2: source = &r->completion.flagged_columns; break;
            case 3:
                if (!r->has_plan) throw std::invalid_argument("run has no plan");
                source = &r->plan.rows;
                break;
            case 4:
                if (!r->has_plan) throw std::invalid_argument("run has no plan");
                source = &r->plan.cols;
                break;
            case 5:
                dims = r->completion.column_basis_dims;
                source = &dims;
                break;
            default: throw std::invalid_argument("unknown index selector");
        }
        *out = dup_indices(*source);
        *out_count = static_cast<int>(source->size());
        return AMC_OK;
    });
}

int amc_result_sample_sizes(const amc_result* r, long long** out, int* out_count) {
    return guarded([&] {
        if (!r || !out || !out_count) throw std::invalid_argument("null argument");
        const auto& v = r->completion.column_sample_sizes;
        auto* arr = new long long[v.empty() ? 1 : v.size()];
        for (size_t i = 0; i < v.size(); ++i) arr[i] = v[i];
        *out = arr;
        *out_count = static_cast<int>(v.size());
        return AMC_OK;
    });
}

int amc_result_angles(const amc_result* r, double** out, int* out_count) {
    return guarded([&] {
        if (!r || !out || !out_count) throw std::invalid_argument("null argument");
        const auto& v = r->completion.angle_history;
        auto* arr = new double[v.empty() ? 1 : v.size()];
        for (size_t i = 0; i < v.size(); ++i) arr[i] = v[i];
        *out = arr;
        *out_count = static_cast<int>(v.size());
        return AMC_OK;
    });
}

int amc_result_plan_cost(const amc_result* r, double* out) {
    return guarded([&] {
        if (!r || !out) throw std::invalid_argument("null argument");
        if (!r->has_plan) throw std::invalid_argument("run has no plan");
        *out = r->plan.cost;
        return AMC_OK;
    });
}

void amc_result_free(amc_result* r) { delete r; }

int amc_expected_first_one_position(int m, int k, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::expected_first_one_position(m, k).to_double();
        return AMC_OK;
    });
}

int amc_first_one_tail(int m, int k, int a, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::first_one_tail(m, k, a).to_double();
        return AMC_OK;
    });
}

int amc_tau_pmf(int k, int m, int r, long long n, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::tau_pmf(k, m, r, n);
        return AMC_OK;
    });
}

int amc_tau_tail(int k, int m, int r, long long n, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::tau_tail(k, m, r, n);
        return AMC_OK;
    });
}

int amc_err_bound(int m, int n, int r, int psi_u, int psi_v, double eps, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::err_bound(m, n, r, psi_u, psi_v, eps);
        return AMC_OK;
    });
}

int amc_erre_bound(int m, int n, int r, int psi_u, int psi_v, double eps, int T,
                   double* out_count, double* out_failure) {
    return guarded([&] {
        if (!out_count || !out_failure) throw std::invalid_argument("null output");
        auto [count, failure] = amc::erre_bound(m, n, r, psi_u, psi_v, eps, T);
        *out_count = count;
        *out_failure = failure;
        return AMC_OK;
    });
}

int amc_erei_sample_size(int m, int r, int psi_u, int psi_v, double eps, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::erei_sample_size(m, r, psi_u, psi_v, eps);
        return AMC_OK;
    });
}

int amc_eerei_bound(int m, int n, int r, int psi_u, int psi_v, int xi, double eps,
                    double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::eerei_bound(m, n, r, psi_u, psi_v, xi, eps);
        return AMC_OK;
    });
}

int amc_lrebn_d(double mu, int r, double delta, double theta, int m, long long* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::lrebn_d(mu, r, delta, theta, m);
        return AMC_OK;
    });
}

int amc_angle_cap(int k, double eps, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::angle_cap(k, eps);
        return AMC_OK;
    });
}

int amc_noisy_coherence_bound(double mu_k, int m, int k, double theta, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = amc::noisy_coherence_bound(mu_k, m, k, theta);
        return AMC_OK;
    });
}

int amc_two_stage_cost(int cost_kind, const double* costs, int m, int n, const int* rows,
                       int rows_count, const int* cols, int cols_count, double* out) {
    return guarded([&] {
        if (!out || (rows_count > 0 && !rows) || (cols_count > 0 && !cols))
            throw std::invalid_argument("null argument");
        amc::CostModel cost = make_cost_model(cost_kind, costs, m, n);
        amc::Indices rv(rows, rows + rows_count);
        amc::Indices cv(cols, cols + cols_count);
        *out = amc::two_stage_cost(cost, m, n, rv, cv);
        return AMC_OK;
    });
}

int amc_optimal_two_stage(const amc_matrix* values, int cost_kind, const double* costs,
                          int psi_bar, int r, int** out_rows, int* out_rows_count,
                          int** out_cols, int* out_cols_count, double* out_cost) {
    return guarded([&] {
        if (!values || !out_rows || !out_rows_count || !out_cols || !out_cols_count ||
            !out_cost)
            throw std::invalid_argument("null argument");
        int m = static_cast<int>(values->value.rows());
        int n = static_cast<int>(values->value.cols());
        amc::CostModel cost = make_cost_model(cost_kind, costs, m, n);
        amc::TwoStagePlan plan = amc::optimal_two_stage(values->value, cost, psi_bar, r);
        *out_rows = dup_indices(plan.rows);
        *out_rows_count = static_cast<int>(plan.rows.size());
        *out_cols = dup_indices(plan.cols);
        *out_cols_count = static_cast<int>(plan.cols.size());
        *out_cost = plan.cost;
        return AMC_OK;
    });
}

int amc_verify_suite_names(char** out_names) {
    return guarded([&] {
        if (!out_names) throw std::invalid_argument("null output");
        std::string joined;
        for (const auto& name : amc::verify_suite_names()) {
            if (!joined.empty()) joined += "\n";
            joined += name;
        }
        *out_names = dup_string(joined);
        return AMC_OK;
    });
}

int amc_run_verify_suite(const char* name, uint64_t seed, char** out_report,
                         int* out_passed) {
    return guarded([&] {
        if (!name || !out_report || !out_passed) throw std::invalid_argument("null argument");
        amc::SuiteReport report = amc::run_verify_suite(name, seed);
        std::ostringstream os;
        for (const auto& c : report.checks)
            os << c.label << '\t' << (c.passed ? "pass" : "fail") << '\t' << c.detail << '\n';
        *out_report = dup_string(os.str());
        *out_passed = report.passed ? 1 : 0;
        return AMC_OK;
    });
}

}  // extern "C"

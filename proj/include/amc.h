#ifndef AMC_H
#define AMC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call. */
#define AMC_OK 0
#define AMC_ERR_INVALID 1
#define AMC_ERR_RUNTIME 2

const char* amc_version(void);

/* Message for the last failing call on this thread. Owned by the library. */
const char* amc_last_error(void);

void amc_free_string(char* s);
void amc_free_indices(int* p);
void amc_free_longs(long long* p);
void amc_free_doubles(double* p);

/* ---- dense matrices ---- */

typedef struct amc_matrix amc_matrix;

int amc_matrix_create(int rows, int cols, const double* data_row_major, amc_matrix** out);
int amc_matrix_dims(const amc_matrix* a, int* rows, int* cols);
/* Caller provides rows*cols doubles. */
int amc_matrix_data(const amc_matrix* a, double* out_row_major);
int amc_matrix_read_csv(const char* path, amc_matrix** out);
int amc_matrix_write_csv(const amc_matrix* a, const char* path);
void amc_matrix_free(amc_matrix* a);

/* ---- synthetic inputs ---- */

int amc_gen_gaussian_lowrank(int m, int n, int r, uint64_t seed, amc_matrix** out);
int amc_gen_integer_lowrank(int m, int n, int r, int mag, uint64_t seed, amc_matrix** out);
int amc_gen_lowrank_with_classes(int m, int n, int r, int coh_cols, int coh_rows,
                                 uint64_t seed, amc_matrix** out);
int amc_named_fixture(const char* name, amc_matrix** out);
int amc_named_fixture_costs(const char* name, double eps, amc_matrix** out);
int amc_inject_sparse_noise_columns(const amc_matrix* a, int count, uint64_t seed,
                                    amc_matrix** out, int** out_cols, int* out_count);
int amc_inject_bounded_noise(const amc_matrix* a, double eps, uint64_t seed, amc_matrix** out);
int amc_normalize_columns(const amc_matrix* a, amc_matrix** out);

/* ---- subspace profiles ---- */

typedef struct {
    int m;
    int r;
    int psi;
    int psi_bar;
    double mu;
    int exact;
} amc_profile;

int amc_column_space_profile(const amc_matrix* a, amc_profile* out);
int amc_row_space_profile(const amc_matrix* a, amc_profile* out);
/* Newline-separated names of violated inequalities; empty string when all hold. */
int amc_validate_profile(const amc_profile* p, char** out_violations);

/* ---- metered oracle ---- */

typedef struct amc_oracle amc_oracle;

/* cost_kind: 0 uniform (costs ignored), 1 per column (costs has n entries),
   2 per entry (costs has m*n entries, row major).
   noise_kind: 0 clean, 1 sparse columns (noise_param = column count),
   2 bounded (noise_param = eps; truth columns are normalized first). */
int amc_oracle_create(const amc_matrix* truth, int cost_kind, const double* costs,
                      int noise_kind, double noise_param, uint64_t seed, amc_oracle** out);
int amc_oracle_stats(const amc_oracle* o, long long* count, double* cost);
int amc_oracle_injected_columns(const amc_oracle* o, int** out_cols, int* out_count);
int amc_oracle_noisy_view(const amc_oracle* o, amc_matrix** out);
int amc_oracle_truth(const amc_oracle* o, amc_matrix** out);
void amc_oracle_free(amc_oracle* o);

/* ---- recovery runs ---- */

typedef struct amc_result amc_result;

int amc_run_ks2013(amc_oracle* o, int d, uint64_t seed, amc_result** out);
int amc_run_ercs(amc_oracle* o, int d, amc_result** out);
int amc_run_err(amc_oracle* o, int r, uint64_t seed, amc_result** out);
int amc_run_erre(amc_oracle* o, int T, uint64_t seed, amc_result** out);
int amc_run_erei(amc_oracle* o, int r, int psi_u, int psi_v, double eps, uint64_t seed,
                 amc_result** out);
int amc_run_eerei(amc_oracle* o, int r, int psi_u, int psi_v, int xi, double eps,
                  uint64_t seed, amc_result** out);
int amc_run_lrebn(amc_oracle* o, int r, double mu, double eps, double delta, double d_scale,
                  int adaptive, uint64_t seed, amc_result** out);
/* per_column_variant != 0 sweeps columns by column price with index-order rows. */
int amc_run_erhc(amc_oracle* o, int psi_bar, int per_column_variant, amc_result** out);

int amc_result_recovered(const amc_result* r, amc_matrix** out);
int amc_result_scalars(const amc_result* r, int* r_hat, int* failed, long long* observations,
                       double* cost, int* phases, double* bound, int* bound_defined);
/* which: 0 basis columns, 1 pivot rows, 2 flagged columns, 3 plan rows,
   4 plan columns, 5 per-column basis dimensions. */
int amc_result_indices(const amc_result* r, int which, int** out, int* out_count);
int amc_result_sample_sizes(const amc_result* r, long long** out, int* out_count);
int amc_result_angles(const amc_result* r, double** out, int* out_count);
/* Certificate cost of the two-stage plan; fails for non-plan runs. */
int amc_result_plan_cost(const amc_result* r, double* out);
void amc_result_free(amc_result* r);

/* ---- closed-form quantities ---- */

int amc_expected_first_one_position(int m, int k, double* out);
int amc_first_one_tail(int m, int k, int a, double* out);
int amc_tau_pmf(int k, int m, int r, long long n, double* out);
int amc_tau_tail(int k, int m, int r, long long n, double* out);
int amc_err_bound(int m, int n, int r, int psi_u, int psi_v, double eps, double* out);
int amc_erre_bound(int m, int n, int r, int psi_u, int psi_v, double eps, int T,
                   double* out_count, double* out_failure);
int amc_erei_sample_size(int m, int r, int psi_u, int psi_v, double eps, double* out);
int amc_eerei_bound(int m, int n, int r, int psi_u, int psi_v, int xi, double eps,
                    double* out);
int amc_lrebn_d(double mu, int r, double delta, double theta, int m, long long* out);
int amc_angle_cap(int k, double eps, double* out);
int amc_noisy_coherence_bound(double mu_k, int m, int k, double theta, double* out);

int amc_two_stage_cost(int cost_kind, const double* costs, int m, int n, const int* rows,
                       int rows_count, const int* cols, int cols_count, double* out);
int amc_optimal_two_stage(const amc_matrix* values, int cost_kind, const double* costs,
                          int psi_bar, int r, int** out_rows, int* out_rows_count,
                          int** out_cols, int* out_cols_count, double* out_cost);

/* ---- verification suites ---- */

/* Newline-separated suite names. */
int amc_verify_suite_names(char** out_names);
/* Report lines are "label<TAB>pass<TAB>detail". out_passed is 1 when every
   check passed. */
int amc_run_verify_suite(const char* name, uint64_t seed, char** out_report, int* out_passed);

#ifdef __cplusplus
}
#endif

#endif

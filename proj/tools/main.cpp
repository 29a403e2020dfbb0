#include "amc.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(int rc) {
    if (rc == AMC_OK) return;
    std::string msg = amc_last_error();
    if (rc == AMC_ERR_INVALID) throw ConfigError(msg);
    throw std::runtime_error(msg);
}

struct MatrixPtr {
    amc_matrix* p = nullptr;
    MatrixPtr() = default;
    explicit MatrixPtr(amc_matrix* q) : p(q) {}
    MatrixPtr(const MatrixPtr&) = delete;
    MatrixPtr& operator=(const MatrixPtr&) = delete;
    MatrixPtr(MatrixPtr&& o) noexcept : p(o.p) { o.p = nullptr; }
    MatrixPtr& operator=(MatrixPtr&& o) noexcept {
        std::swap(p, o.p);
        return *this;
    }
    ~MatrixPtr() { amc_matrix_free(p); }
    amc_matrix** slot() {
        amc_matrix_free(p);
        p = nullptr;
        return &p;
    }
};

struct OraclePtr {
    amc_oracle* p = nullptr;
    OraclePtr() = default;
    OraclePtr(const OraclePtr&) = delete;
    OraclePtr& operator=(const OraclePtr&) = delete;
    OraclePtr(OraclePtr&& o) noexcept : p(o.p) { o.p = nullptr; }
    OraclePtr& operator=(OraclePtr&& o) noexcept {
        std::swap(p, o.p);
        return *this;
    }
    ~OraclePtr() { amc_oracle_free(p); }
};

struct ResultPtr {
    amc_result* p = nullptr;
    ResultPtr() = default;
    ResultPtr(const ResultPtr&) = delete;
    ResultPtr& operator=(const ResultPtr&) = delete;
    ResultPtr(ResultPtr&& o) noexcept : p(o.p) { o.p = nullptr; }
    ResultPtr& operator=(ResultPtr&& o) noexcept {
        std::swap(p, o.p);
        return *this;
    }
    ~ResultPtr() { amc_result_free(p); }
};

std::vector<double> matrix_values(const amc_matrix* a, int* out_m = nullptr,
                                  int* out_n = nullptr) {
    int m = 0, n = 0;
    check(amc_matrix_dims(a, &m, &n));
    std::vector<double> data(static_cast<size_t>(m) * n);
    check(amc_matrix_data(a, data.data()));
    if (out_m) *out_m = m;
    if (out_n) *out_n = n;
    return data;
}

std::vector<int> grab_indices(const amc_result* r, int which) {
    int* raw = nullptr;
    int count = 0;
    check(amc_result_indices(r, which, &raw, &count));
    std::vector<int> out(raw, raw + count);
    amc_free_indices(raw);
    return out;
}

double max_abs_diff(const amc_matrix* a, const amc_matrix* b) {
    int m = 0, n = 0;
    std::vector<double> va = matrix_values(a, &m, &n);
    std::vector<double> vb = matrix_values(b);
    double worst = 0.0;
    for (size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
    return worst;
}

// ---- shared experiment setup ----

struct SourceSpec {
    std::string fixture;
    std::string input_csv;
    std::string gen = "gaussian";
    int m = 30;
    int n = 40;
    int rank = 5;
    int mag = 3;
    int coh_cols = 0;
    int coh_rows = 0;
};

struct CostSpec {
    std::string kind;
    std::string fixture;
    double fixture_eps = 0.25;
    std::string csv;
};

struct NoiseSpecCli {
    std::string kind = "clean";
    int count = 0;
    double eps = 0.0;
};

struct AlgParams {
    std::string alg = "ercs";
    int d = 0;
    int rank = 0;
    int T = 0;
    int psi_u = 0;
    int psi_v = 0;
    int psi_bar = -1;
    int xi = 0;
    double eps = 0.1;
    double mu = 0.0;
    double delta = 0.05;
    double d_scale = 72.0;
    std::string adaptive = "on";
};

MatrixPtr make_truth(const SourceSpec& src, uint64_t seed) {
    MatrixPtr out;
    if (!src.fixture.empty()) {
        check(amc_named_fixture(src.fixture.c_str(), out.slot()));
    } else if (!src.input_csv.empty()) {
        check(amc_matrix_read_csv(src.input_csv.c_str(), out.slot()));
    } else if (src.gen == "gaussian") {
        check(amc_gen_gaussian_lowrank(src.m, src.n, src.rank, seed, out.slot()));
    } else if (src.gen == "integer") {
        check(amc_gen_integer_lowrank(src.m, src.n, src.rank, src.mag, seed, out.slot()));
    } else if (src.gen == "classes") {
        check(amc_gen_lowrank_with_classes(src.m, src.n, src.rank, src.coh_cols, src.coh_rows,
                                           seed, out.slot()));
    } else {
        throw ConfigError("unknown generator: " + src.gen);
    }
    return out;
}

// Fills unset algorithm parameters from the instance: measured profile for
// fixtures and CSV inputs, the generator's construction for synthetic runs.
void fill_defaults(AlgParams& p, const SourceSpec& src, const amc_matrix* truth) {
    bool synthetic = src.fixture.empty() && src.input_csv.empty();
    int m = 0, n = 0;
    check(amc_matrix_dims(truth, &m, &n));
    if (synthetic) {
        int r = src.rank;
        if (p.rank == 0) p.rank = r;
        if (p.psi_bar < 0) p.psi_bar = src.coh_cols > 0 ? m - 1 : r - 1;
        if (p.psi_u == 0) p.psi_u = src.coh_cols > 0 ? 1 : m - r + 1;
        if (p.psi_v == 0) p.psi_v = src.coh_rows > 0 ? 1 : n - r + 1;
    } else {
        if (p.rank == 0 || p.psi_bar < 0 || p.psi_u == 0 || p.psi_v == 0) {
            amc_profile col{}, row{};
            check(amc_column_space_profile(truth, &col));
            check(amc_row_space_profile(truth, &row));
            if (p.rank == 0) p.rank = col.r;
            if (p.psi_bar < 0) p.psi_bar = col.psi_bar;
            if (p.psi_u == 0) p.psi_u = col.psi;
            if (p.psi_v == 0) p.psi_v = row.psi;
        }
    }
    if (p.d == 0) p.d = std::min(m, p.psi_bar + 1);
    if (p.T == 0)
        p.T = p.eps > 0.0 ? std::max(1, static_cast<int>(std::ceil(std::log(1.0 / p.eps)))) : 1;
    if (p.mu == 0.0) p.mu = 1.0;
}

int noise_kind_code(const NoiseSpecCli& noise) {
    if (noise.kind == "clean") return 0;
    if (noise.kind == "sparse") return 1;
    if (noise.kind == "bounded") return 2;
    throw ConfigError("unknown noise kind: " + noise.kind);
}

// Accepts "none", "clean", "sparse", "bounded", and the compact forms
// "sparse:COUNT" / "bounded:EPS"; explicit --noise-count / --noise-eps stay
// in effect when no payload is attached.
NoiseSpecCli canonical_noise(const NoiseSpecCli& raw) {
    NoiseSpecCli out = raw;
    std::string kind = raw.kind;
    std::string payload;
    size_t colon = kind.find(':');
    if (colon != std::string::npos) {
        payload = kind.substr(colon + 1);
        kind = kind.substr(0, colon);
    }
    if (kind == "none" || kind == "clean")
        out.kind = "clean";
    else if (kind == "sparse" || kind == "bounded")
        out.kind = kind;
    else
        throw ConfigError("unknown noise kind: " + raw.kind);
    if (!payload.empty()) {
        try {
            if (out.kind == "sparse")
                out.count = std::stoi(payload);
            else if (out.kind == "bounded")
                out.eps = std::stod(payload);
            else
                throw ConfigError("noise 'none' takes no parameter");
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad noise parameter: " + payload);
        }
    }
    return out;
}

OraclePtr make_oracle(const amc_matrix* truth, const CostSpec& cost, const NoiseSpecCli& noise,
                      uint64_t seed) {
    int m = 0, n = 0;
    check(amc_matrix_dims(truth, &m, &n));
    std::string kind = cost.kind;
    if (kind.empty())
        kind = (cost.csv.empty() && cost.fixture.empty()) ? "uniform" : "per-entry";
    int cost_kind = 0;
    std::vector<double> costs;
    if (kind == "uniform") {
        cost_kind = 0;
    } else if (kind == "per-column" || kind == "per-entry") {
        cost_kind = kind == "per-column" ? 1 : 2;
        MatrixPtr chi;
        if (!cost.csv.empty()) {
            check(amc_matrix_read_csv(cost.csv.c_str(), chi.slot()));
        } else if (!cost.fixture.empty()) {
            check(amc_named_fixture_costs(cost.fixture.c_str(), cost.fixture_eps, chi.slot()));
        } else {
            throw ConfigError("cost kind needs --cost or --cost-fixture");
        }
        int cm = 0, cn = 0;
        std::vector<double> data = matrix_values(chi.p, &cm, &cn);
        if (cost_kind == 1) {
            if (cm * cn < n) throw ConfigError("per-column cost matrix too small");
            costs.assign(data.begin(), data.begin() + n);
        } else {
            if (cm != m || cn != n) throw ConfigError("per-entry cost shape mismatch");
            costs = std::move(data);
        }
    } else {
        throw ConfigError("unknown cost kind: " + kind);
    }
    double noise_param = noise.kind == "sparse" ? static_cast<double>(noise.count) : noise.eps;
    OraclePtr oracle;
    check(amc_oracle_create(truth, cost_kind, costs.empty() ? nullptr : costs.data(),
                            noise_kind_code(noise), noise_param, seed, &oracle.p));
    return oracle;
}

ResultPtr dispatch(amc_oracle* o, const AlgParams& p, uint64_t alg_seed) {
    ResultPtr r;
    if (p.alg == "ks2013")
        check(amc_run_ks2013(o, p.d, alg_seed, &r.p));
    else if (p.alg == "ercs")
        check(amc_run_ercs(o, p.d, &r.p));
    else if (p.alg == "err")
        check(amc_run_err(o, p.rank, alg_seed, &r.p));
    else if (p.alg == "erre")
        check(amc_run_erre(o, p.T, alg_seed, &r.p));
    else if (p.alg == "erei")
        check(amc_run_erei(o, p.rank, p.psi_u, p.psi_v, p.eps, alg_seed, &r.p));
    else if (p.alg == "eerei")
        check(amc_run_eerei(o, p.rank, p.psi_u, p.psi_v, p.xi, p.eps, alg_seed, &r.p));
    else if (p.alg == "lrebn")
        check(amc_run_lrebn(o, p.rank, p.mu, p.eps, p.delta, p.d_scale, p.adaptive == "on",
                            alg_seed, &r.p));
    else if (p.alg == "erhc")
        check(amc_run_erhc(o, p.psi_bar, 0, &r.p));
    else if (p.alg == "erhc-cols")
        check(amc_run_erhc(o, p.psi_bar, 1, &r.p));
    else
        throw ConfigError("unknown algorithm: " + p.alg);
    return r;
}

struct TrialRecord {
    long long observations = 0;
    double cost = 0.0;
    bool success = false;
    double max_err = 0.0;
    int r_hat = 0;
    bool failed = false;
    int phases = 0;
    double bound = 0.0;
    bool bound_defined = false;
};

TrialRecord run_trial(const amc_matrix* truth, const CostSpec& cost, const NoiseSpecCli& noise,
                      const AlgParams& params, uint64_t trial_seed, double success_tol,
                      json* detail) {
    OraclePtr oracle = make_oracle(truth, cost, noise, trial_seed);
    ResultPtr result = dispatch(oracle.p, params, trial_seed ^ 0x9e3779b97f4a7c15ULL);
    TrialRecord rec;
    int failed = 0, bound_defined = 0;
    check(amc_result_scalars(result.p, &rec.r_hat, &failed, &rec.observations, &rec.cost,
                             &rec.phases, &rec.bound, &bound_defined));
    rec.failed = failed != 0;
    rec.bound_defined = bound_defined != 0;
    MatrixPtr recovered, reference;
    check(amc_result_recovered(result.p, recovered.slot()));
    check(amc_oracle_truth(oracle.p, reference.slot()));
    rec.max_err = max_abs_diff(recovered.p, reference.p);
    rec.success = rec.max_err <= success_tol && !rec.failed;
    if (detail) {
        (*detail)["r_hat"] = rec.r_hat;
        (*detail)["failed"] = rec.failed;
        (*detail)["observations"] = rec.observations;
        (*detail)["cost"] = rec.cost;
        (*detail)["phases"] = rec.phases;
        (*detail)["max_abs_err"] = rec.max_err;
        (*detail)["success"] = rec.success;
        if (rec.bound_defined) {
            (*detail)["bound"] = rec.bound;
            (*detail)["bound_ok"] = static_cast<double>(rec.observations) <= rec.bound;
        }
        (*detail)["basis_columns"] = grab_indices(result.p, 0);
        (*detail)["pivot_rows"] = grab_indices(result.p, 1);
        if (params.alg == "eerei") (*detail)["flagged_columns"] = grab_indices(result.p, 2);
        if (params.alg == "erhc" || params.alg == "erhc-cols") {
            double plan_cost = 0.0;
            check(amc_result_plan_cost(result.p, &plan_cost));
            (*detail)["plan_cost"] = plan_cost;
            (*detail)["plan_rows"] = grab_indices(result.p, 3);
            (*detail)["plan_cols"] = grab_indices(result.p, 4);
        }
        if (params.alg == "lrebn") {
            long long* ds = nullptr;
            int count = 0;
            check(amc_result_sample_sizes(result.p, &ds, &count));
            (*detail)["column_d"] = std::vector<long long>(ds, ds + count);
            amc_free_longs(ds);
            (*detail)["column_k"] = grab_indices(result.p, 5);
            double* angles = nullptr;
            check(amc_result_angles(result.p, &angles, &count));
            (*detail)["angles"] = std::vector<double>(angles, angles + count);
            amc_free_doubles(angles);
        }
        if (noise.kind == "sparse") {
            int* cols = nullptr;
            int count = 0;
            check(amc_oracle_injected_columns(oracle.p, &cols, &count));
            (*detail)["injected_columns"] = std::vector<int>(cols, cols + count);
            amc_free_indices(cols);
        }
    }
    return rec;
}

void enforce_desk_scale(int m, int n, int trials, bool paper_scale) {
    if (paper_scale) return;
    if (m > 200 || n > 500 || trials > 500)
        throw ConfigError(
            "instance exceeds desk-scale limits (m <= 200, n <= 500, trials <= 500); pass "
            "--paper-scale to lift them");
}

// Trials are independent given their index, so they run on a worker pool.
// Aggregation stays on the calling thread; the first failure by trial index
// is rethrown after the pool drains.
void parallel_trials(int count, const std::function<void(int)>& fn) {
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("AMC_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) workers = w;
    }
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1)) {
                try {
                    fn(t);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string fmt_fixed(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << v;
    return os.str();
}

// ---- subcommand payloads ----

struct GenOptions {
    SourceSpec src;
    std::string out;
    std::string costs_out;
    std::string noise = "none";
    double cost_eps = 0.25;
    uint64_t seed = 0;
};

std::string sidecar_path(const std::string& out) {
    size_t dot = out.find_last_of('.');
    size_t slash = out.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return out.substr(0, dot) + ".profile.json";
    return out + ".profile.json";
}

json profile_json(const amc_profile& p) {
    json out;
    out["m"] = p.m;
    out["r"] = p.r;
    out["psi"] = p.psi;
    out["psi_bar"] = p.psi_bar;
    out["mu"] = p.mu;
    out["exact"] = p.exact != 0;
    char* violations = nullptr;
    check(amc_validate_profile(&p, &violations));
    std::vector<std::string> names;
    std::istringstream is(violations);
    amc_free_string(violations);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) names.push_back(line);
    out["violations"] = names;
    return out;
}

int cmd_gen(const GenOptions& opt) {
    MatrixPtr matrix = make_truth(opt.src, opt.seed);
    NoiseSpecCli noise;
    noise.kind = opt.noise;
    noise = canonical_noise(noise);
    std::vector<int> injected;
    if (noise.kind == "sparse") {
        MatrixPtr noisy;
        int* cols = nullptr;
        int count = 0;
        check(amc_inject_sparse_noise_columns(matrix.p, noise.count, opt.seed, noisy.slot(),
                                              &cols, &count));
        injected.assign(cols, cols + count);
        amc_free_indices(cols);
        matrix = std::move(noisy);
    } else if (noise.kind == "bounded") {
        MatrixPtr noisy;
        check(amc_inject_bounded_noise(matrix.p, noise.eps, opt.seed, noisy.slot()));
        matrix = std::move(noisy);
    }
    check(amc_matrix_write_csv(matrix.p, opt.out.c_str()));
    if (!opt.costs_out.empty()) {
        if (opt.src.fixture.empty()) throw ConfigError("--costs-out needs --fixture");
        MatrixPtr chi;
        check(amc_named_fixture_costs(opt.src.fixture.c_str(), opt.cost_eps, chi.slot()));
        check(amc_matrix_write_csv(chi.p, opt.costs_out.c_str()));
    }
    int m = 0, n = 0;
    check(amc_matrix_dims(matrix.p, &m, &n));
    amc_profile col{}, row{};
    check(amc_column_space_profile(matrix.p, &col));
    check(amc_row_space_profile(matrix.p, &row));
    json side;
    side["matrix_csv"] = opt.out;
    side["m"] = m;
    side["n"] = n;
    side["seed"] = opt.seed;
    if (!opt.src.fixture.empty()) {
        side["fixture"] = opt.src.fixture;
    } else if (!opt.src.input_csv.empty()) {
        side["input_csv"] = opt.src.input_csv;
    } else {
        side["generator"] = {{"kind", opt.src.gen},
                             {"rank", opt.src.rank},
                             {"coherent_cols", opt.src.coh_cols},
                             {"coherent_rows", opt.src.coh_rows}};
    }
    json jn;
    jn["kind"] = noise.kind == "clean" ? "none" : noise.kind;
    if (noise.kind == "sparse") {
        jn["count"] = noise.count;
        jn["injected_columns"] = injected;
    }
    if (noise.kind == "bounded") jn["eps"] = noise.eps;
    side["noise"] = jn;
    side["column_space"] = profile_json(col);
    side["row_space"] = profile_json(row);
    std::ofstream sf(sidecar_path(opt.out));
    if (!sf) throw ConfigError("cannot open sidecar path: " + sidecar_path(opt.out));
    sf << side.dump(2) << "\n";
    return 0;
}

struct RunOptions {
    SourceSpec src;
    CostSpec cost;
    NoiseSpecCli noise;
    AlgParams params;
    int trials = 1;
    uint64_t seed = 0;
    double success_tol = 1e-6;
    bool paper_scale = false;
    bool fresh_matrix = true;
    std::string out;
};

int cmd_run(const RunOptions& opt) {
    auto started = std::chrono::steady_clock::now();
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw ConfigError("cannot open output file: " + opt.out);
        os = &file;
    }
    MatrixPtr truth = make_truth(opt.src, opt.seed);
    int m = 0, n = 0;
    check(amc_matrix_dims(truth.p, &m, &n));
    enforce_desk_scale(m, n, opt.trials, opt.paper_scale);
    NoiseSpecCli noise = canonical_noise(opt.noise);
    CostSpec cost = opt.cost;
    if ((opt.params.alg == "erhc" || opt.params.alg == "erhc-cols") && cost.kind.empty() &&
        cost.csv.empty() && cost.fixture.empty() && !opt.src.fixture.empty()) {
        MatrixPtr probe;
        if (amc_named_fixture_costs(opt.src.fixture.c_str(), cost.fixture_eps, probe.slot()) ==
            AMC_OK)
            cost.fixture = opt.src.fixture;
    }
    AlgParams params = opt.params;
    fill_defaults(params, opt.src, truth.p);
    bool synthetic = opt.src.fixture.empty() && opt.src.input_csv.empty();
    std::vector<TrialRecord> records(static_cast<size_t>(opt.trials));
    std::vector<std::string> lines(static_cast<size_t>(opt.trials));
    parallel_trials(opt.trials, [&](int t) {
        uint64_t trial_seed = opt.seed + static_cast<uint64_t>(t);
        MatrixPtr local;
        const amc_matrix* mat = truth.p;
        if (synthetic && opt.fresh_matrix && t > 0) {
            local = make_truth(opt.src, trial_seed * 0x100000001b3ULL + 0x9e3779b9ULL);
            mat = local.p;
        }
        json line;
        line["trial"] = t;
        line["alg"] = params.alg;
        records[static_cast<size_t>(t)] =
            run_trial(mat, cost, noise, params, trial_seed, opt.success_tol, &line);
        lines[static_cast<size_t>(t)] = line.dump();
    });
    for (const auto& line : lines) (*os) << line << "\n";
    double mean_obs = 0.0, mean_cost = 0.0, success = 0.0, bound_ok = 0.0;
    int bound_trials = 0;
    for (const auto& r : records) {
        mean_obs += static_cast<double>(r.observations);
        mean_cost += r.cost;
        success += r.success ? 1.0 : 0.0;
        if (r.bound_defined) {
            ++bound_trials;
            bound_ok += static_cast<double>(r.observations) <= r.bound ? 1.0 : 0.0;
        }
    }
    size_t count = records.empty() ? 1 : records.size();
    mean_obs /= static_cast<double>(count);
    mean_cost /= static_cast<double>(count);
    success /= static_cast<double>(count);
    double var = 0.0;
    for (const auto& r : records) {
        double dlt = static_cast<double>(r.observations) - mean_obs;
        var += dlt * dlt;
    }
    var /= static_cast<double>(count);
    json summary;
    summary["summary"] = true;
    summary["alg"] = params.alg;
    summary["trials"] = opt.trials;
    summary["mean_obs"] = mean_obs;
    summary["std_obs"] = std::sqrt(var);
    summary["mean_cost"] = mean_cost;
    summary["success_rate"] = success;
    if (bound_trials > 0) summary["bound_ok_rate"] = bound_ok / bound_trials;
    auto elapsed = std::chrono::steady_clock::now() - started;
    summary["timing"] = {
        {"wall_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()}};
    (*os) << summary.dump() << "\n";
    return 0;
}

struct SweepOptions {
    std::string axis = "r";
    std::vector<int> values;
    int m = 100;
    int n = 300;
    int rank = 5;
    std::vector<std::string> classes = {"ii"};
    std::vector<std::string> algs = {"ks2013", "ercs", "err", "erre", "erei"};
    int trials = 3;
    double eps = 0.1;
    uint64_t seed = 0;
    bool paper_scale = false;
    std::string out;
};

double sweep_bound(const std::string& alg, int m, int n, int r, int psi_u, int psi_v,
                   double eps, int T, int psi_bar, bool* defined) {
    *defined = true;
    double value = 0.0;
    if (alg == "ercs") {
        value = static_cast<double>(m) * r +
                static_cast<double>(n - r) * std::min(m, psi_bar + 1);
    } else if (alg == "err" || alg == "erei") {
        check(amc_err_bound(m, n, r, psi_u, psi_v, eps, &value));
    } else if (alg == "erre") {
        double failure = 0.0;
        check(amc_erre_bound(m, n, r, psi_u, psi_v, eps, T, &value, &failure));
    } else {
        *defined = false;
    }
    return value;
}

int cmd_sweep(const SweepOptions& opt) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw ConfigError("cannot open output file: " + opt.out);
        os = &file;
    }
    if (opt.axis != "r" && opt.axis != "n") throw ConfigError("sweep axis must be r or n");
    (*os) << "axis,alg,class,mean_obs,std_obs,success_rate,mean_cost,bound,bound_ok\n";
    for (int value : opt.values) {
        int m = opt.m;
        int n = opt.axis == "n" ? value : opt.n;
        int r = opt.axis == "r" ? value : opt.rank;
        if (r < 1 || r > std::min(m, n)) throw ConfigError("sweep rank out of range");
        enforce_desk_scale(m, n, opt.trials, opt.paper_scale);
        for (const auto& cls : opt.classes) {
            if (cls.size() != 2 || (cls[0] != 'i' && cls[0] != 'c') ||
                (cls[1] != 'i' && cls[1] != 'c'))
                throw ConfigError("coherence class must be one of ii, ic, ci, cc");
            int coh_cols = cls[0] == 'c' ? 1 : 0;
            int coh_rows = cls[1] == 'c' ? 1 : 0;
            if (coh_cols + coh_rows > r) continue;
            SourceSpec src;
            src.gen = "classes";
            src.m = m;
            src.n = n;
            src.rank = r;
            src.coh_cols = coh_cols;
            src.coh_rows = coh_rows;
            for (const auto& alg : opt.algs) {
                AlgParams params;
                params.alg = alg;
                params.eps = opt.eps;
                std::vector<TrialRecord> records(static_cast<size_t>(opt.trials));
                parallel_trials(opt.trials, [&](int t) {
                    uint64_t trial_seed =
                        opt.seed + 1000003ULL * static_cast<uint64_t>(value) +
                        static_cast<uint64_t>(t);
                    MatrixPtr truth =
                        make_truth(src, trial_seed * 0x100000001b3ULL + 0x9e3779b9ULL);
                    AlgParams filled = params;
                    fill_defaults(filled, src, truth.p);
                    records[static_cast<size_t>(t)] = run_trial(
                        truth.p, CostSpec{}, NoiseSpecCli{}, filled, trial_seed, 1e-6, nullptr);
                });
                double mean_obs = 0.0, mean_cost = 0.0, success = 0.0;
                for (const auto& rec : records) {
                    mean_obs += static_cast<double>(rec.observations);
                    mean_cost += rec.cost;
                    success += rec.success ? 1.0 : 0.0;
                }
                double cnt = static_cast<double>(records.size());
                mean_obs /= cnt;
                mean_cost /= cnt;
                success /= cnt;
                double var = 0.0;
                for (const auto& rec : records) {
                    double dlt = static_cast<double>(rec.observations) - mean_obs;
                    var += dlt * dlt;
                }
                var /= cnt;
                AlgParams probe;
                probe.alg = alg;
                probe.eps = opt.eps;
                SourceSpec probe_src = src;
                MatrixPtr probe_truth = make_truth(probe_src, opt.seed);
                fill_defaults(probe, probe_src, probe_truth.p);
                bool has_bound = false;
                double bound = sweep_bound(alg, m, n, r, probe.psi_u, probe.psi_v, opt.eps,
                                           probe.T, probe.psi_bar, &has_bound);
                double bound_ok = 0.0;
                if (has_bound) {
                    for (const auto& rec : records)
                        bound_ok += static_cast<double>(rec.observations) <= bound ? 1.0 : 0.0;
                    bound_ok /= cnt;
                }
                (*os) << value << ',' << alg << ',' << cls << ',' << fmt_fixed(mean_obs)
                      << ',' << fmt_fixed(std::sqrt(var)) << ',' << fmt_fixed(success) << ','
                      << fmt_fixed(mean_cost) << ',' << (has_bound ? fmt_fixed(bound) : "")
                      << ',' << (has_bound ? fmt_fixed(bound_ok) : "") << "\n";
            }
        }
    }
    return 0;
}

struct OracleOptions {
    std::string which;
    int m = 20;
    int k = 3;
    int a = 1;
    int r = 2;
    long long N = 10;
    int n = 40;
    int psi_u = 1;
    int psi_v = 1;
    int T = 1;
    int xi = 0;
    double eps = 0.1;
    double mu = 1.0;
    double delta = 0.05;
    double theta = 0.0;
};

int cmd_oracle(const OracleOptions& opt) {
    json out;
    if (opt.which == "first-one") {
        double mean = 0.0, tail = 0.0;
        check(amc_expected_first_one_position(opt.m, opt.k, &mean));
        check(amc_first_one_tail(opt.m, opt.k, opt.a, &tail));
        out["mean"] = mean;
        out["tail_beyond_a"] = tail;
        out["a"] = opt.a;
    } else if (opt.which == "tail") {
        double tail = 0.0;
        check(amc_first_one_tail(opt.m, opt.k, opt.a, &tail));
        out["tail"] = tail;
    } else if (opt.which == "tau") {
        double pmf = 0.0, tail = 0.0;
        check(amc_tau_pmf(opt.k, opt.m, opt.r, opt.N, &pmf));
        check(amc_tau_tail(opt.k, opt.m, opt.r, opt.N, &tail));
        out["pmf"] = pmf;
        out["tail"] = tail;
    } else if (opt.which == "bounds") {
        double err = 0.0, erre_count = 0.0, erre_fail = 0.0, erei_d = 0.0, eerei = 0.0;
        double cap = 0.0, noisy = 0.0;
        long long d = 0;
        check(amc_err_bound(opt.m, opt.n, opt.r, opt.psi_u, opt.psi_v, opt.eps, &err));
        check(amc_erre_bound(opt.m, opt.n, opt.r, opt.psi_u, opt.psi_v, opt.eps, opt.T,
                             &erre_count, &erre_fail));
        check(amc_erei_sample_size(opt.m, opt.r, opt.psi_u, opt.psi_v, opt.eps, &erei_d));
        check(amc_eerei_bound(opt.m, opt.n, opt.r, opt.psi_u, opt.psi_v, opt.xi, opt.eps,
                              &eerei));
        check(amc_lrebn_d(opt.mu, opt.r, opt.delta, opt.theta, opt.m, &d));
        check(amc_angle_cap(opt.k, opt.eps, &cap));
        check(amc_noisy_coherence_bound(opt.mu, opt.m, opt.k, opt.theta, &noisy));
        out["err_bound"] = err;
        out["erre_bound"] = erre_count;
        out["erre_failure"] = erre_fail;
        out["erei_sample_size"] = erei_d;
        out["eerei_bound"] = eerei;
        out["lrebn_d"] = d;
        out["angle_cap"] = cap;
        out["noisy_coherence_bound"] = noisy;
    } else {
        throw ConfigError("unknown oracle query: " + opt.which);
    }
    std::cout << out.dump() << "\n";
    return 0;
}

struct VerifyOptions {
    std::string suite;
    uint64_t seed = 0;
};

int cmd_verify(const VerifyOptions& opt) {
    auto started = std::chrono::steady_clock::now();
    std::vector<std::string> names;
    if (!opt.suite.empty()) {
        names.push_back(opt.suite);
    } else {
        char* raw = nullptr;
        check(amc_verify_suite_names(&raw));
        std::istringstream is(raw);
        amc_free_string(raw);
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) names.push_back(line);
    }
    bool all_passed = true;
    for (const auto& name : names) {
        char* report = nullptr;
        int passed = 0;
        check(amc_run_verify_suite(name.c_str(), opt.seed, &report, &passed));
        std::istringstream is(report);
        amc_free_string(report);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            size_t t1 = line.find('\t');
            size_t t2 = line.find('\t', t1 + 1);
            json row;
            row["suite"] = name;
            row["check"] = line.substr(0, t1);
            row["pass"] = line.substr(t1 + 1, t2 - t1 - 1) == "pass";
            row["detail"] = line.substr(t2 + 1);
            std::cout << row.dump() << "\n";
        }
        json verdict;
        verdict["suite"] = name;
        verdict["passed"] = passed != 0;
        std::cout << verdict.dump() << "\n";
        if (!passed) all_passed = false;
    }
    auto elapsed = std::chrono::steady_clock::now() - started;
    json footer;
    footer["all_passed"] = all_passed;
    footer["timing"] = {
        {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()}};
    std::cout << footer.dump() << "\n";
    return all_passed ? 0 : 1;
}

void add_source_flags(CLI::App* cmd, SourceSpec& src, bool with_rank) {
    cmd->add_option("--fixture", src.fixture, "named fixture matrix");
    cmd->add_option("--input", src.input_csv, "CSV matrix path");
    cmd->add_option("--gen", src.gen, "generator: gaussian, integer, classes");
    cmd->add_option("--m", src.m, "rows");
    cmd->add_option("--n", src.n, "columns");
    if (with_rank) cmd->add_option("--rank,--r", src.rank, "target rank");
    cmd->add_option("--mag", src.mag, "integer factor magnitude");
    cmd->add_option("--coh-cols,--coherent-cols", src.coh_cols,
                    "basis directions injected into column space");
    cmd->add_option("--coh-rows,--coherent-rows", src.coh_rows,
                    "basis directions injected into row space");
}

}  // namespace

std::string trim_ws(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::pair<std::string, std::string>> load_flat_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        std::string t = trim_ws(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim_ws(t.substr(0, eq));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        kv.emplace_back(key, trim_ws(t.substr(eq + 1)));
    }
    return kv;
}

// Flat key=value config files fill in any option of the parsed subcommand that
// was not given on the command line. Works by injecting synthetic arguments
// right after the subcommand token, so explicit flags always win.
void inject_config_args(CLI::App& app, std::vector<std::string>& args) {
    size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (size_t i = 0; i < args.size() && !sub; ++i) {
        if (args[i].empty() || args[i][0] == '-') continue;
        for (CLI::App* cand : app.get_subcommands(nullptr))
            if (cand->get_name() == args[i]) {
                sub = cand;
                sub_pos = i;
            }
        break;
    }
    if (!sub) return;

    std::string cfg;
    for (size_t i = sub_pos + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            cfg = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            cfg = args[i].substr(9);
    }
    if (cfg.empty()) return;

    std::vector<std::string> inject;
    for (const auto& [key, value] : load_flat_config(cfg)) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw ConfigError("config: unknown key '" + key + "' for " + sub->get_name());
        bool given = false;
        for (size_t i = sub_pos + 1; i < args.size() && !given; ++i)
            for (const std::string& name : opt->get_lnames())
                if (args[i] == "--" + name || args[i].rfind("--" + name + "=", 0) == 0) {
                    given = true;
                    break;
                }
        if (given) continue;
        if (opt->get_type_size_max() == 0) {
            inject.push_back("--" + key + "=" + value);
        } else {
            inject.push_back("--" + key);
            inject.push_back(value);
        }
    }
    args.insert(args.begin() + static_cast<long>(sub_pos) + 1, inject.begin(), inject.end());
}

int main(int argc, char** argv) {
    CLI::App app{"adaptive low-rank completion experiments"};
    app.require_subcommand(1);

    uint64_t seed = 12345;
    app.add_option("--seed", seed, "base seed")->envname("AMC_SEED");

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "write a matrix as CSV");
    add_source_flags(gen, gen_opt.src, true);
    gen->add_option("--noise", gen_opt.noise,
                    "none, sparse:COUNT, or bounded:EPS applied to the written matrix");
    gen->add_option("--out", gen_opt.out, "output CSV path")->required();
    gen->add_option("--costs-out", gen_opt.costs_out, "fixture cost matrix CSV path");
    gen->add_option("--cost-eps", gen_opt.cost_eps, "cost family parameter");

    RunOptions run_opt;
    int run_rank = 0;
    CLI::App* run = app.add_subcommand("run", "run a recovery algorithm over trials");
    add_source_flags(run, run_opt.src, false);
    run->add_option("--alg", run_opt.params.alg,
                    "ks2013, ercs, err, erre, erei, eerei, lrebn, erhc, erhc-cols");
    run->add_option("--rank", run_rank, "rank of the instance and of the algorithm input");
    run->add_option("--d", run_opt.params.d, "per-column sample size");
    run->add_option("--T", run_opt.params.T, "stopping delay");
    run->add_option("--psi-u", run_opt.params.psi_u, "column-space nonsparsity");
    run->add_option("--psi-v", run_opt.params.psi_v, "row-space nonsparsity");
    run->add_option("--psibar", run_opt.params.psi_bar, "column-space sparsity number");
    run->add_option("--xi", run_opt.params.xi, "noisy column budget");
    run->add_option("--eps", run_opt.params.eps, "failure budget / noise level");
    run->add_option("--mu", run_opt.params.mu, "coherence passed to lrebn");
    run->add_option("--delta", run_opt.params.delta, "lrebn failure budget");
    run->add_option("--d-scale", run_opt.params.d_scale, "lrebn initial-d constant");
    run->add_option("--adaptive", run_opt.params.adaptive, "lrebn angle-adaptive d: on|off");
    run->add_option("--cost", run_opt.cost.csv, "per-entry cost matrix CSV path");
    run->add_option("--cost-kind", run_opt.cost.kind, "uniform, per-column, per-entry");
    run->add_option("--cost-fixture", run_opt.cost.fixture, "named cost matrix");
    run->add_option("--cost-eps", run_opt.cost.fixture_eps, "cost family parameter");
    run->add_option("--noise", run_opt.noise.kind, "clean, sparse, bounded");
    run->add_option("--noise-count", run_opt.noise.count, "sparse noisy column count");
    run->add_option("--noise-eps", run_opt.noise.eps, "bounded noise level");
    run->add_option("--trials", run_opt.trials, "trial count");
    run->add_option("--success-tol", run_opt.success_tol, "max abs error counted as success");
    run->add_flag("--paper-scale", run_opt.paper_scale, "lift desk-scale limits");
    run->add_flag("!--same-matrix", run_opt.fresh_matrix,
                  "reuse one matrix across trials instead of regenerating");
    run->add_option("--out", run_opt.out, "JSON lines output path (default stdout)");

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate algorithms over an axis");
    sweep->add_option("--axis", sweep_opt.axis, "r or n");
    sweep->add_option("--values", sweep_opt.values, "axis values")->delimiter(',');
    sweep->add_option("--m", sweep_opt.m, "rows");
    sweep->add_option("--n", sweep_opt.n, "columns (r sweeps)");
    sweep->add_option("--rank", sweep_opt.rank, "rank (n sweeps)");
    sweep->add_option("--classes", sweep_opt.classes, "coherence classes: ii ic ci cc")
        ->delimiter(',');
    sweep->add_option("--algs", sweep_opt.algs, "algorithms to compare")->delimiter(',');
    sweep->add_option("--trials", sweep_opt.trials, "trials per cell");
    sweep->add_option("--eps", sweep_opt.eps, "failure budget for bounds");
    sweep->add_flag("--paper-scale", sweep_opt.paper_scale, "lift desk-scale limits");
    sweep->add_option("--out", sweep_opt.out, "CSV output path (default stdout)");

    OracleOptions oracle_opt;
    CLI::App* oracle = app.add_subcommand("oracle", "closed-form quantities as JSON");
    oracle->add_option("query", oracle_opt.which, "first-one, tail, tau, bounds")->required();
    oracle->add_option("--m", oracle_opt.m, "rows");
    oracle->add_option("--k", oracle_opt.k, "nonzero count / basis dimension");
    oracle->add_option("--a", oracle_opt.a, "tail position");
    oracle->add_option("--r", oracle_opt.r, "rank");
    oracle->add_option("--N", oracle_opt.N, "trial index");
    oracle->add_option("--n", oracle_opt.n, "columns");
    oracle->add_option("--psi-u", oracle_opt.psi_u, "column-space nonsparsity");
    oracle->add_option("--psi-v", oracle_opt.psi_v, "row-space nonsparsity");
    oracle->add_option("--T", oracle_opt.T, "stopping delay");
    oracle->add_option("--xi", oracle_opt.xi, "noisy column budget");
    oracle->add_option("--eps", oracle_opt.eps, "failure budget");
    oracle->add_option("--mu", oracle_opt.mu, "coherence");
    oracle->add_option("--delta", oracle_opt.delta, "lrebn failure budget");
    oracle->add_option("--theta", oracle_opt.theta, "angle estimate");

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("suite", verify_opt.suite, "suite name (default: all)");

    std::string config_file;
    for (CLI::App* sub : {gen, run, sweep, oracle, verify}) {
        sub->add_option("--config", config_file, "flat key=value config file");
        sub->add_option("--seed", seed, "base seed")->envname("AMC_SEED");
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        inject_config_args(app, args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        gen_opt.seed = seed;
        run_opt.seed = seed;
        sweep_opt.seed = seed;
        verify_opt.seed = seed;
        if (run_rank > 0) {
            run_opt.src.rank = run_rank;
            run_opt.params.rank = run_rank;
        }
        if (gen->parsed()) return cmd_gen(gen_opt);
        if (run->parsed()) return cmd_run(run_opt);
        if (sweep->parsed()) return cmd_sweep(sweep_opt);
        if (oracle->parsed()) return cmd_oracle(oracle_opt);
        if (verify->parsed()) return cmd_verify(verify_opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amc/algorithms.hpp"
#include "amc/combinatorics.hpp"
#include "amc/generators.hpp"
#include "amc/oracle.hpp"

#include <cmath>

using namespace amc;

namespace {

Oracle clean_oracle(const Mat& truth, uint64_t seed = 0) {
    return Oracle(truth, CostModel::uniform(), NoiseSpec::clean(), seed);
}

double max_err(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single-draw screening with the full row set observes everything") {
    Mat truth = Mat::Ones(5, 7);
    Oracle oracle = clean_oracle(truth);
    Ks2013Params params;
    params.d = 5;
    CompletionResult res = run_ks2013(oracle, params);
    CHECK(res.observations == 35);
    CHECK(res.r_hat == 1);
    CHECK(max_err(res.recovered, truth) <= 1e-12);
}

TEST_CASE("single-draw screening on generic input costs exactly the dof") {
    int m = 20, n = 30, r = 3;
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u}) {
        Mat truth = gen_gaussian_lowrank(m, n, r, seed);
        Oracle oracle = clean_oracle(truth);
        Ks2013Params params;
        params.d = r;
        params.seed = seed + 100;
        CompletionResult res = run_ks2013(oracle, params);
        CHECK(res.r_hat == r);
        CHECK(res.observations == (m + n - r) * r);
        CHECK(max_err(res.recovered, truth) <= 1e-8);
    }
}

TEST_CASE("a bad fixed row set silently mis-declares a dependent column") {
    Mat truth = named_fixture("dependence-witness");
    for (Indices omega : {Indices{1, 2, 3}, Indices{0, 2, 3}}) {
        Oracle oracle = clean_oracle(truth);
        Ks2013Params params;
        params.d = 3;
        params.fixed_omega = omega;
        CompletionResult res = run_ks2013(oracle, params);
        CHECK(res.r_hat == 2);
        CHECK(res.basis_columns == Indices{0, 1});
        CHECK(max_err(res.recovered, truth) > 0.5);
        CHECK((res.recovered.col(2) - truth.col(2)).cwiseAbs().maxCoeff() > 0.5);
    }
    for (Indices omega : {Indices{0, 1, 2}, Indices{0, 1, 3}}) {
        Oracle oracle = clean_oracle(truth);
        Ks2013Params params;
        params.d = 3;
        params.fixed_omega = omega;
        CompletionResult res = run_ks2013(oracle, params);
        CHECK(res.r_hat == 3);
        CHECK(max_err(res.recovered, truth) <= 1e-9);
    }
}

TEST_CASE("row-screened recovery has a closed-form observation count") {
    int m = 30, n = 40, r = 5;
    Mat truth = gen_gaussian_lowrank(m, n, r, 17);
    Oracle oracle = clean_oracle(truth);
    ErcsParams params;
    params.d = 5;
    CompletionResult res = run_ercs(oracle, params);
    CHECK(res.observations == 325);
    CHECK(res.r_hat == r);
    CHECK(res.pivot_rows == Indices{0, 1, 2, 3, 4});
    CHECK(max_err(res.recovered, truth) <= 1e-8);
}

TEST_CASE("row-screened recovery on a flat matrix") {
    Mat truth = Mat::Ones(6, 9) * 2.0;
    Oracle oracle = clean_oracle(truth);
    ErcsParams params;
    params.d = 1;
    CompletionResult res = run_ercs(oracle, params);
    CHECK(res.observations == 6 + 9 - 1);
    CHECK(res.r_hat == 1);
    CHECK(max_err(res.recovered, truth) == 0.0);
}

TEST_CASE("row-screened recovery needs every row on a one-sparse column space") {
    Mat truth = named_fixture("dependence-witness");
    Oracle oracle = clean_oracle(truth);
    ErcsParams params;
    params.d = 4;
    CompletionResult res = run_ercs(oracle, params);
    CHECK(res.observations == 12);
    CHECK(res.r_hat == 3);
    CHECK(max_err(res.recovered, truth) == 0.0);
}

TEST_CASE("row screening goes rational on integer input") {
    Mat truth = named_fixture("cost-gap");
    Oracle oracle = clean_oracle(truth);
    ErcsParams params;
    params.d = 2;
    CompletionResult res = run_ercs(oracle, params);
    CHECK(res.r_hat == 2);
    CHECK(res.observations == 4 * 2 + (4 - 2) * 2);
    CHECK(max_err(res.recovered, truth) == 0.0);
}

TEST_CASE("row screening misses directions hidden from its rows") {
    Mat truth = named_fixture("spiky-a");
    Oracle oracle = clean_oracle(truth);
    ErcsParams params;
    params.d = 1;
    params.fixed_rows = Indices{1};
    CompletionResult res = run_ercs(oracle, params);
    CHECK(res.r_hat == 1);
    CHECK(max_err(res.recovered, truth) > 0.5);
}

TEST_CASE("sequential rank probing finds a flat matrix in one detection") {
    Mat truth = Mat::Ones(8, 11) * 3.0;
    Oracle oracle = clean_oracle(truth, 5);
    ErrParams params;
    params.r = 1;
    params.seed = 9;
    CompletionResult res = run_err(oracle, params);
    CHECK_FALSE(res.failed);
    CHECK(res.r_hat == 1);
    CHECK(res.observations == 8 + 11 - 1);
    CHECK(res.phases == 1);
    CHECK(max_err(res.recovered, truth) == 0.0);
}

TEST_CASE("sequential rank probing on generic input costs exactly the dof") {
    int m = 20, n = 30, r = 3;
    for (uint64_t seed : {11u, 12u, 13u, 14u, 15u, 16u, 17u, 18u}) {
        Mat truth = gen_gaussian_lowrank(m, n, r, seed);
        Oracle oracle = clean_oracle(truth);
        ErrParams params;
        params.r = r;
        params.seed = seed * 3 + 1;
        int probes = 0, detects = 0;
        params.on_probe = [&](int, int) { ++probes; };
        params.on_detect = [&](int, int, int) { ++detects; };
        CompletionResult res = run_err(oracle, params);
        CHECK_FALSE(res.failed);
        CHECK(res.r_hat == r);
        CHECK(res.observations == (m + n - r) * r);
        CHECK(probes == r);
        CHECK(detects == r);
        CHECK(max_err(res.recovered, truth) <= 1e-8);
        CHECK(static_cast<int>(res.pivot_rows.size()) == r);
        CHECK(static_cast<int>(res.basis_columns.size()) == r);
    }
}

TEST_CASE("sequential rank probing recovers hand fixtures exactly") {
    for (const char* name : {"spiky-a", "spiky-b", "cost-gap"}) {
        Mat truth = named_fixture(name);
        int r = numeric_rank(truth);
        long long dof =
            static_cast<long long>(truth.rows() + truth.cols() - r) * r;
        for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
            Oracle oracle = clean_oracle(truth);
            ErrParams params;
            params.r = r;
            params.seed = seed;
            CompletionResult res = run_err(oracle, params);
            CHECK_FALSE(res.failed);
            CHECK(res.r_hat == r);
            CHECK(max_err(res.recovered, truth) == 0.0);
            CHECK(res.observations >= dof);
            CHECK(res.observations <=
                  static_cast<long long>(truth.rows()) * truth.cols());
        }
    }
}

TEST_CASE("asking for more rank than exists exhausts the oracle and flags failure") {
    Mat truth = Mat::Ones(5, 6);
    Oracle oracle = clean_oracle(truth);
    ErrParams params;
    params.r = 2;
    params.seed = 4;
    CompletionResult res = run_err(oracle, params);
    CHECK(res.failed);
    CHECK(res.r_hat == 1);
    CHECK(res.observations == 30);
}

TEST_CASE("rank probing replays identically under one seed") {
    Mat truth = gen_gaussian_lowrank(12, 14, 3, 77);
    ErrParams params;
    params.r = 3;
    params.seed = 21;
    Oracle a = clean_oracle(truth);
    Oracle b = clean_oracle(truth);
    CompletionResult ra = run_err(a, params);
    CompletionResult rb = run_err(b, params);
    CHECK(ra.observations == rb.observations);
    CHECK(ra.pivot_rows == rb.pivot_rows);
    CHECK(ra.basis_columns == rb.basis_columns);
    CHECK(max_err(ra.recovered, rb.recovered) == 0.0);
}

TEST_CASE("delayed stopping without a rank cap") {
    int m = 10, n = 15, r = 3, T = 3;
    int psi_u = m - r + 1, psi_v = n - r + 1;
    auto [bound_count, bound_fail] = erre_bound(m, n, r, psi_u, psi_v, 0.1, T);
    for (uint64_t seed : {31u, 32u, 33u, 34u, 35u}) {
        Mat truth = gen_gaussian_lowrank(m, n, r, seed);
        Oracle oracle = clean_oracle(truth);
        ErreParams params;
        params.T = T;
        params.seed = seed + 7;
        CompletionResult res = run_erre(oracle, params);
        CHECK(res.r_hat == r);
        CHECK(res.phases == 1 + T);
        CHECK(max_err(res.recovered, truth) <= 1e-8);
        CHECK(static_cast<double>(res.observations) <= bound_count);
    }
    CHECK(bound_fail < 1.0);
}

TEST_CASE("delayed stopping on the zero matrix stops after T empty phases") {
    Mat truth = Mat::Zero(6, 8);
    Oracle oracle = clean_oracle(truth);
    ErreParams params;
    params.T = 2;
    params.seed = 3;
    CompletionResult res = run_erre(oracle, params);
    CHECK(res.r_hat == 0);
    CHECK(res.observations == 2 * 8);
    CHECK(max_err(res.recovered, truth) == 0.0);
}

TEST_CASE("incremental per-column screening follows a scripted trace") {
    Mat truth = named_fixture("rank1-trace");
    Oracle oracle = clean_oracle(truth);
    std::vector<Indices> script = {{0, 4}, {2, 3}, {1, 3}, {0, 5}};
    EreiHooks hooks;
    hooks.delta_sampler = [&](int col, int, const Indices&, Rng&) { return script[col]; };
    CompletionResult res = run_erei_with_sample_size(oracle, 2, 0, Tolerance{}, hooks);
    CHECK_FALSE(res.failed);
    CHECK(res.observations == 15);
    CHECK(res.r_hat == 1);
    CHECK(res.basis_columns == Indices{1});
    CHECK(res.pivot_rows == Indices{2});
    CHECK(max_err(res.recovered, truth) <= 1e-9);
}

TEST_CASE("incremental screening with analytic parameters recovers generic input") {
    int m = 20, n = 30, r = 3;
    EreiParams params;
    params.r = r;
    params.psi_u = m - r + 1;
    params.psi_v = n - r + 1;
    params.eps = 0.1;
    for (uint64_t seed : {41u, 42u, 43u, 44u, 45u, 46u}) {
        Mat truth = gen_gaussian_lowrank(m, n, r, seed);
        Oracle oracle = clean_oracle(truth);
        params.seed = seed;
        CompletionResult res = run_erei(oracle, params);
        CHECK_FALSE(res.failed);
        CHECK(res.r_hat == r);
        CHECK(res.bound_defined);
        CHECK(res.bound == err_bound(m, n, r, params.psi_u, params.psi_v, params.eps));
        CHECK(res.observations <= static_cast<long long>(m) * n);
        CHECK(max_err(res.recovered, truth) <= 1e-8);
    }
}

TEST_CASE("incremental screening touches every entry when the sample size is m") {
    Mat truth = gen_gaussian_lowrank(8, 10, 2, 51);
    Oracle oracle = clean_oracle(truth);
    CompletionResult res = run_erei_with_sample_size(oracle, 8, 5, Tolerance{});
    CHECK(res.observations == 80);
    CHECK(max_err(res.recovered, truth) <= 1e-8);
}

TEST_CASE("parameter validation") {
    Mat truth = Mat::Ones(4, 4);
    Oracle oracle = clean_oracle(truth);
    Ks2013Params ks;
    ks.d = 0;
    CHECK_THROWS(run_ks2013(oracle, ks));
    ks.d = 5;
    CHECK_THROWS(run_ks2013(oracle, ks));
    ks.d = 2;
    ks.fixed_omega = Indices{0, 9};
    CHECK_THROWS(run_ks2013(oracle, ks));
    ErcsParams ercs;
    ercs.d = 0;
    CHECK_THROWS(run_ercs(oracle, ercs));
    ErrParams err;
    err.r = 5;
    CHECK_THROWS(run_err(oracle, err));
    ErreParams erre;
    erre.T = 0;
    CHECK_THROWS(run_erre(oracle, erre));
    CHECK_THROWS(run_erei_with_sample_size(oracle, 0, 0, Tolerance{}));
}

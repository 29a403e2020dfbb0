#include "amc/verify.hpp"

#include "amc/algorithms.hpp"
#include "amc/combinatorics.hpp"
#include "amc/generators.hpp"
#include "amc/hetero.hpp"
#include "amc/linalg.hpp"
#include "amc/oracle.hpp"
#include "amc/rng.hpp"
#include "amc/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace amc {

namespace {

void add_check(SuiteReport& report, const std::string& label, bool passed,
               const std::string& detail) {
    report.checks.push_back({label, passed, detail});
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Mat random_integer_lowrank(Rng& rng, int m, int n, int r, int mag) {
    while (true) {
        Mat u(m, r), v(n, r);
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < r; ++c)
                u(i, c) = static_cast<double>(
                    static_cast<int>(rng.uniform_int(static_cast<uint64_t>(2 * mag + 1))) - mag);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < r; ++c)
                v(i, c) = static_cast<double>(
                    static_cast<int>(rng.uniform_int(static_cast<uint64_t>(2 * mag + 1))) - mag);
        Mat a = u * v.transpose();
        if (numeric_rank(a, Tolerance{}) == r) return a;
    }
}

SuiteReport suite_dependence(uint64_t seed) {
    SuiteReport report;
    report.name = "dependence";
    Rng rng(seed);
    int trials = 1000;
    int restricted_ok = 0, dependent_ok = 0;
    for (int t = 0; t < trials; ++t) {
        int m = 6 + static_cast<int>(rng.uniform_int(7));
        int r = 2 + static_cast<int>(rng.uniform_int(3));
        if (r >= m) r = m - 1;
        Mat u(m, r);
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < r; ++c) u(i, c) = rng.gaussian();
        SubspaceProfile prof = column_space_profile(u);
        int need = prof.psi_bar + 1;
        if (need > m) need = m;
        Indices omega = rng.sample_without_replacement(m, need);
        std::sort(omega.begin(), omega.end());
        if (numeric_rank(submatrix_rows(u, omega), Tolerance{}) == r) ++restricted_ok;
        Vec coef(r);
        for (int c = 0; c < r; ++c) coef(c) = rng.gaussian();
        Mat ext(m, r + 1);
        ext.leftCols(r) = u;
        ext.col(r) = u * coef;
        if (numeric_rank(submatrix_rows(ext, omega), Tolerance{}) == r) ++dependent_ok;
    }
    add_check(report, "independent sets stay independent on psi_bar+1 rows",
              restricted_ok == trials, std::to_string(restricted_ok) + "/" + std::to_string(trials));
    add_check(report, "dependent sets stay dependent on psi_bar+1 rows",
              dependent_ok == trials, std::to_string(dependent_ok) + "/" + std::to_string(trials));

    Mat wit = named_fixture("dependence-witness");
    SubspaceProfile wp = column_space_profile(wit);
    int m = wp.m, r = wp.r;
    bool witness = false;
    if (wp.psi_bar >= 1 && wp.psi_bar < m) {
        Indices omega(static_cast<size_t>(wp.psi_bar));
        for (int i = 0; i < wp.psi_bar; ++i) omega[static_cast<size_t>(i)] = i;
        while (true) {
            if (numeric_rank(submatrix_rows(wit, omega), Tolerance{}) < r) {
                witness = true;
                break;
            }
            int k = wp.psi_bar;
            int i = k - 1;
            while (i >= 0 && omega[static_cast<size_t>(i)] == m - k + i) --i;
            if (i < 0) break;
            omega[static_cast<size_t>(i)] += 1;
            for (int t2 = i + 1; t2 < k; ++t2)
                omega[static_cast<size_t>(t2)] = omega[static_cast<size_t>(t2 - 1)] + 1;
        }
    }
    add_check(report, "psi_bar rows can hide independence", witness,
              "psi_bar=" + std::to_string(wp.psi_bar));
    return report;
}

SuiteReport suite_profiles(uint64_t seed) {
    SuiteReport report;
    report.name = "profiles";
    Rng rng(seed);
    int trials = 1000;
    int valid = 0, generic = 0, generic_total = 0;
    for (int t = 0; t < trials; ++t) {
        int m = 4 + static_cast<int>(rng.uniform_int(9));
        int r = 1 + static_cast<int>(rng.uniform_int(4));
        if (r >= m) r = m - 1;
        Mat u(m, r);
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < r; ++c) u(i, c) = rng.gaussian();
        SubspaceProfile prof = column_space_profile(u);
        if (validate_profile(prof).empty()) ++valid;
        ++generic_total;
        if (prof.psi_bar == r - 1) ++generic;
    }
    add_check(report, "profile inequalities hold", valid == trials,
              std::to_string(valid) + "/" + std::to_string(trials));
    add_check(report, "generic subspaces have sparsity number r-1", generic == generic_total,
              std::to_string(generic) + "/" + std::to_string(generic_total));
    return report;
}

SuiteReport suite_first_one(uint64_t seed) {
    SuiteReport report;
    report.name = "first-one";
    int trials = 100000;
    const int configs[2][2] = {{20, 3}, {50, 5}};
    for (const auto& cfg : configs) {
        int m = cfg[0], k = cfg[1];
        std::vector<int> pos = monte_carlo_detection(m, k, trials, seed);
        double mean = 0.0;
        for (int p : pos) mean += p;
        mean /= trials;
        double expect = expected_first_one_position(m, k).to_double();
        double rel = std::abs(mean - expect) / expect;
        add_check(report, "mean first hit m=" + std::to_string(m) + " k=" + std::to_string(k),
                  rel <= 0.01, "mean=" + fmt(mean) + " expect=" + fmt(expect));
        bool tails = true;
        std::string worst;
        for (int a : {1, 2, 4, 8}) {
            if (a > m - k) break;
            double p = first_one_tail(m, k, a).to_double();
            long long over = 0;
            for (int v : pos)
                if (v > a) ++over;
            double emp = static_cast<double>(over) / trials;
            double sigma = std::sqrt(p * (1.0 - p) / trials);
            if (std::abs(emp - p) > 3.0 * sigma + 1e-12) {
                tails = false;
                worst = "a=" + std::to_string(a) + " emp=" + fmt(emp) + " p=" + fmt(p);
            }
        }
        add_check(report, "tail within 3 sigma m=" + std::to_string(m) + " k=" + std::to_string(k),
                  tails, tails ? "ok" : worst);
        seed += 1;
    }
    return report;
}

SuiteReport suite_tau(uint64_t) {
    SuiteReport report;
    report.name = "tau";
    const int configs[3][3] = {{3, 20, 4}, {5, 50, 3}, {2, 10, 2}};
    for (const auto& cfg : configs) {
        int k = cfg[0], m = cfg[1], r = cfg[2];
        double sum = 0.0;
        long long big = 4000;
        for (long long n = r; n <= big; ++n) sum += tau_pmf(k, m, r, n);
        sum += tau_tail(k, m, r, big);
        add_check(report,
                  "pmf sums to one k=" + std::to_string(k) + " m=" + std::to_string(m) +
                      " r=" + std::to_string(r),
                  std::abs(sum - 1.0) <= 1e-10, "sum=" + fmt(sum));
        bool ratio_ok = true;
        for (long long n = r; n < 10000; ++n) {
            Rat lhs = tau_ratio(k, m, r, n);
            Rat rhs = rat_binomial(static_cast<int>(n), r - 1) * Rat(m - k, m) /
                      rat_binomial(static_cast<int>(n - 1), r - 1);
            if (!(lhs == rhs)) {
                ratio_ok = false;
                break;
            }
        }
        add_check(report, "ratio identity to N=10000", ratio_ok, "");
        bool pmf_ok = true;
        for (long long n = r; n < r + 18; ++n) {
            Rat lhs = tau_pmf_exact(k, m, r, n + 1);
            Rat rhs = tau_pmf_exact(k, m, r, n) * tau_ratio(k, m, r, n);
            if (!(lhs == rhs)) {
                pmf_ok = false;
                break;
            }
        }
        add_check(report, "ratio matches exact pmf", pmf_ok, "");
    }
    return report;
}

SuiteReport suite_two_opt(uint64_t seed) {
    SuiteReport report;
    report.name = "two-opt";
    Rng rng(seed);
    double max_ratio = 0.0;
    int ok = 0, trials = 100;
    for (int t = 0; t < trials; ++t) {
        Mat a = random_integer_lowrank(rng, 6, 6, 2, 3);
        SubspaceProfile prof = column_space_profile(a);
        Mat chi(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                chi(i, j) = static_cast<double>(1 + rng.uniform_int(9));
        Oracle oracle(a, CostModel::per_entry(chi), NoiseSpec::clean(), seed + t);
        ErhcParams params;
        params.psi_bar = prof.psi_bar;
        ErhcResult greedy = run_erhc(oracle, params);
        TwoStagePlan best = optimal_two_stage(a, CostModel::per_entry(chi), prof.psi_bar,
                                              prof.r);
        double ratio = greedy.plan.cost / best.cost;
        max_ratio = std::max(max_ratio, ratio);
        if (ratio <= 2.0 + 1e-9) ++ok;
    }
    add_check(report, "greedy within twice the optimum", ok == trials,
              "max ratio " + fmt(max_ratio));

    Mat m = named_fixture("cost-ratio");
    Mat chi = named_fixture_costs("cost-ratio", 0.25);
    SubspaceProfile prof = column_space_profile(m);
    Oracle oracle(m, CostModel::per_entry(chi), NoiseSpec::clean(), seed);
    ErhcParams params;
    params.psi_bar = prof.psi_bar;
    ErhcResult greedy = run_erhc(oracle, params);
    TwoStagePlan best = optimal_two_stage(m, CostModel::per_entry(chi), prof.psi_bar, prof.r);
    double ratio = greedy.plan.cost / best.cost;
    add_check(report, "ratio family approaches the factor-two ceiling",
              ratio >= 1.9 && ratio <= 2.0 + 1e-9, "ratio " + fmt(ratio));
    return report;
}

SuiteReport suite_walkthrough(uint64_t) {
    SuiteReport report;
    report.name = "walkthrough";
    Mat truth = named_fixture("rank1-trace");
    Oracle oracle(truth, CostModel::uniform(), NoiseSpec::clean(), 0);
    EreiHooks hooks;
    std::vector<Indices> script = {{0, 4}, {2, 3}, {1, 3}, {0, 5}};
    hooks.delta_sampler = [&script](int col, int, const Indices&, Rng&) {
        return script[static_cast<size_t>(col)];
    };
    CompletionResult res = run_erei_with_sample_size(oracle, 2, 0, Tolerance{}, hooks);
    add_check(report, "pivot rows", res.pivot_rows == Indices{2},
              res.pivot_rows.empty() ? "none" : std::to_string(res.pivot_rows[0]));
    add_check(report, "basis columns", res.basis_columns == Indices{1}, "");
    add_check(report, "distinct observations", res.observations == 15,
              std::to_string(res.observations));
    double err = (res.recovered - truth).cwiseAbs().maxCoeff();
    add_check(report, "exact recovery", err <= 1e-12, "max err " + fmt(err));
    return report;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    return {"dependence", "profiles", "first-one", "tau", "two-opt", "walkthrough"};
}

SuiteReport run_verify_suite(const std::string& name, uint64_t seed) {
    SuiteReport report;
    if (name == "dependence")
        report = suite_dependence(seed);
    else if (name == "profiles")
        report = suite_profiles(seed);
    else if (name == "first-one")
        report = suite_first_one(seed);
    else if (name == "tau")
        report = suite_tau(seed);
    else if (name == "two-opt")
        report = suite_two_opt(seed);
    else if (name == "walkthrough")
        report = suite_walkthrough(seed);
    else
        throw std::invalid_argument("unknown verify suite: " + name);
    report.passed = true;
    for (const auto& c : report.checks)
        if (!c.passed) report.passed = false;
    return report;
}

std::vector<SuiteReport> run_all_verify_suites(uint64_t seed) {
    std::vector<SuiteReport> out;
    for (const auto& name : verify_suite_names()) out.push_back(run_verify_suite(name, seed));
    return out;
}

}  // namespace amc

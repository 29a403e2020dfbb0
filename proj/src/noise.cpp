#include "amc/noise.hpp"

#include "amc/combinatorics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amc {

CompletionResult run_eerei(Oracle& oracle, const EereiParams& params) {
    int m = oracle.rows();
    if (params.xi < 0) throw std::invalid_argument("eerei: xi must be nonnegative");
    double raw = eerei_sample_size(m, params.r, params.psi_u, params.psi_v, params.xi,
                                   params.eps);
    int d = static_cast<int>(std::ceil(raw));
    d = std::max(1, std::min(d, m));
    CompletionResult result = run_erei_with_sample_size(oracle, d, params.seed, params.tol);
    result.flagged_columns = rank_decrement_columns(result.recovered, params.tol);
    result.bound = eerei_bound(m, oracle.cols(), params.r, params.psi_u, params.psi_v,
                               params.xi, params.eps);
    result.bound_defined = true;
    return result;
}

Indices rank_decrement_columns(const Mat& a, const Tolerance& tol) {
    Indices out;
    if (a.rows() == 0 || a.cols() == 0) return out;
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cut = rank_cutoff(tol, sv.size() > 0 ? sv(0) : 0.0, static_cast<int>(a.rows()),
                             static_cast<int>(a.cols()));
    int rk = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rk;
    if (rk == 0) return out;
    Mat v = svd.matrixV().leftCols(rk);
    for (int j = 0; j < a.cols(); ++j)
        if (v.row(j).squaredNorm() >= 1.0 - 1e-6) out.push_back(j);
    return out;
}

double angle_cap(int k, double eps) {
    if (k < 0 || eps < 0.0) throw std::invalid_argument("angle_cap: bad parameters");
    if (k == 0) return 0.0;
    return 1.5 * M_PI * std::sqrt(static_cast<double>(k) * eps);
}

double noisy_coherence_bound(double mu_k, int m, int k, double theta) {
    if (k < 1 || m < k || mu_k < 1.0 || theta < 0.0)
        throw std::invalid_argument("noisy_coherence_bound: bad parameters");
    return 2.0 * mu_k + 2.0 * (static_cast<double>(m) / k) * theta * theta;
}

namespace {

long long growing_sample_size(const LrebnParams& p, int m, double theta) {
    double l = std::log(1.0 / p.delta);
    double base = p.d_scale * p.mu * p.r * l * l;
    double add = (p.d_scale / 72.0) * 8.0 * m * theta * theta *
                 std::log(static_cast<double>(p.r) / p.delta);
    long long d = static_cast<long long>(std::ceil(base + add));
    if (d < 1) d = 1;
    if (d > m) d = m;
    return d;
}

}  // namespace

CompletionResult run_lrebn(Oracle& oracle, const LrebnParams& params) {
    int m = oracle.rows(), n = oracle.cols();
    if (params.r < 1 || params.mu < 1.0 || params.d_scale <= 0.0)
        throw std::invalid_argument("lrebn: bad parameters");
    if (params.eps < 0.0 || params.eps >= 0.25)
        throw std::invalid_argument("lrebn: need 0 <= eps < 1/4");
    if (params.delta <= 0.0 || params.delta > 0.1 + 1e-12)
        throw std::invalid_argument("lrebn: need delta in (0, 0.1]");
    Rng rng(params.seed);
    CompletionResult result;
    result.recovered = Mat::Zero(m, n);
    Basis basis(m);
    double theta_prev = 0.0;
    long long d = growing_sample_size(params, m, 0.0);
    for (int j = 0; j < n; ++j) {
        Indices omega = rng.sample_without_replacement(m, static_cast<int>(d));
        std::sort(omega.begin(), omega.end());
        Vec x(static_cast<int>(omega.size()));
        for (size_t t = 0; t < omega.size(); ++t)
            x(static_cast<int>(t)) = oracle.observe(omega[t], j);
        result.column_sample_sizes.push_back(d);
        int k = basis.dim();
        double res = restricted_residual(basis, omega, x);
        double scale = std::sqrt(3.0 * d / (2.0 * m));
        double threshold = (1.0 + params.eps) *
                           (scale * theta_prev +
                            std::sqrt(3.0 * d * k * params.eps / (2.0 * m)));
        threshold = std::max(threshold, params.tol.threshold * x.norm());
        if (res > threshold) {
            Vec col = oracle.observe_column(j);
            result.recovered.col(j) = col;
            if (basis_append(basis, col, params.tol)) {
                k = basis.dim();
                result.basis_columns.push_back(j);
                double cap = angle_cap(k, params.eps);
                double theta;
                if (params.eps == 0.0) {
                    theta = 0.0;
                } else {
                    double num = std::asin(std::min(1.0, params.eps));
                    double denom =
                        std::asin(std::min(1.0, res * std::sqrt(2.0 * m / (3.0 * d))));
                    if (denom - theta_prev > 0.0)
                        theta = 0.5 * M_PI * num / (denom - theta_prev) + theta_prev;
                    else
                        theta = cap;
                }
                theta = std::min(std::max(theta, theta_prev), cap);
                theta_prev = theta;
                result.angle_history.push_back(theta);
                double update_angle = params.adaptive ? theta : cap;
                d = std::max(d, growing_sample_size(params, m, update_angle));
            }
        } else {
            result.recovered.col(j) = reconstruct_column_lenient(basis, omega, x);
        }
        result.column_basis_dims.push_back(k);
    }
    result.r_hat = basis.dim();
    result.observations = oracle.stats().count;
    result.cost = oracle.stats().cost;
    return result;
}

}  // namespace amc

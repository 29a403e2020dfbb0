#include "amc/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amc {

namespace {

void check_mk(int m, int k) {
    if (m < 1 || k < 1 || k > m) throw std::invalid_argument("need 1 <= k <= m");
}

double log_binom(long long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

Rat expected_first_one_position(int m, int k) {
    check_mk(m, k);
    return Rat(m + 1) / Rat(k + 1);
}

Rat first_one_tail(int m, int k, int a) {
    check_mk(m, k);
    if (a < 0) throw std::invalid_argument("a must be nonnegative");
    if (a > m - k) return Rat(0);
    return rat_binomial(m - a, k) / rat_binomial(m, k);
}

double tau_pmf(int k, int m, int r, long long N) {
    check_mk(m, k);
    if (r < 1 || N < r) throw std::invalid_argument("need N >= r >= 1");
    double p = static_cast<double>(k) / m;
    if (k == m) return N == r ? 1.0 : 0.0;
    double lg = log_binom(N - 1, r - 1) + r * std::log(p) +
                static_cast<double>(N - r) * std::log1p(-p);
    return std::exp(lg);
}

Rat tau_pmf_exact(int k, int m, int r, long long N) {
    check_mk(m, k);
    if (r < 1 || N < r) throw std::invalid_argument("need N >= r >= 1");
    if (N - 1 > 1000000) throw std::invalid_argument("N too large for exact pmf");
    Rat c = rat_binomial(static_cast<int>(N - 1), r - 1);
    Rat p(k, m);
    Rat q(m - k, m);
    Rat out = c;
    for (int i = 0; i < r; ++i) out = out * p;
    for (long long i = 0; i < N - r; ++i) out = out * q;
    return out;
}

Rat tau_ratio(int k, int m, int r, long long N) {
    check_mk(m, k);
    if (r < 1 || N < r) throw std::invalid_argument("need N >= r >= 1");
    return Rat(static_cast<__int128>(N) * (m - k),
               static_cast<__int128>(N - r + 1) * m);
}

double tau_tail(int k, int m, int r, long long N) {
    check_mk(m, k);
    if (r < 1) throw std::invalid_argument("r must be positive");
    if (N < r) return 1.0;
    double p = static_cast<double>(k) / m;
    if (k == m) return 0.0;
    double total = 0.0;
    for (int j = 0; j < r; ++j) {
        double lg = log_binom(N, j) + j * std::log(p) +
                    static_cast<double>(N - j) * std::log1p(-p);
        total += std::exp(lg);
    }
    return total;
}

std::vector<int> monte_carlo_detection(int m, int k, int trials, uint64_t seed) {
    check_mk(m, k);
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    Rng rng(seed);
    std::vector<int> positions;
    positions.reserve(static_cast<size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        int pos = 1;
        while (true) {
            double p = static_cast<double>(k) / (m - pos + 1);
            if (rng.uniform() < p) break;
            ++pos;
        }
        positions.push_back(pos);
    }
    return positions;
}

double err_bound(int m, int n, int r, int psi_u, int psi_v, double eps) {
    if (m < 1 || n < 1 || r < 1 || psi_u < 1 || psi_v < 1 || eps <= 0.0)
        throw std::invalid_argument("err_bound: parameters must be positive");
    double base = static_cast<double>(m + n - r) * r;
    double b1 = 2.0 * (static_cast<double>(m) * n / psi_u) * std::log(r / eps);
    double b2 = (2.0 * m / psi_u) * (r + 2 + std::log(1.0 / eps)) / psi_v * n;
    return base + std::min(b1, b2);
}

std::pair<double, double> erre_bound(int m, int n, int r, int psi_u, int psi_v, double eps,
                                     int T) {
    if (T < 1) throw std::invalid_argument("erre_bound: T must be positive");
    double count = err_bound(m, n, r, psi_u, psi_v, eps) + static_cast<double>(T) * n;
    double failure =
        eps + std::exp(-static_cast<double>(T) * psi_u * psi_v / static_cast<double>(m));
    return {count, failure};
}

double erei_sample_size(int m, int r, int psi_u, int psi_v, double eps) {
    if (m < 1 || r < 1 || psi_u < 1 || psi_v < 1 || eps <= 0.0)
        throw std::invalid_argument("erei_sample_size: parameters must be positive");
    double b1 = 2.0 * (static_cast<double>(m) / psi_u) * std::log(r / eps);
    double b2 = (2.0 * m / psi_u) * (r + 2 + std::log(1.0 / eps)) / psi_v;
    return std::min(b1, b2);
}

double eerei_sample_size(int m, int r, int psi_u, int psi_v, int xi, double eps) {
    if (m < 1 || r < 1 || psi_u < 1 || psi_v < 1 || eps <= 0.0 || xi < 0)
        throw std::invalid_argument("eerei_sample_size: bad parameters");
    double b1 = 2.0 * (static_cast<double>(m) / psi_u) * std::log(r / eps);
    if (2 * xi > psi_v) return b1;
    double b2 = (4.0 * m / psi_u) * (r + 2 + std::log(1.0 / eps)) / psi_v;
    return std::min(b1, b2);
}

double eerei_bound(int m, int n, int r, int psi_u, int psi_v, int xi, double eps) {
    double base = static_cast<double>(m + n - r) * r;
    double per_col = eerei_sample_size(m, r, psi_u, psi_v, xi, eps);
    return base + per_col * n + static_cast<double>(xi) * (m + n);
}

long long lrebn_d(double mu, int r, double delta, double theta, int m) {
    if (mu < 1.0 || r < 1 || delta <= 0.0 || delta > 0.1 + 1e-12 || theta < 0.0 || m < 1)
        throw std::invalid_argument("lrebn_d: bad parameters");
    double l = std::log(1.0 / delta);
    double d = 72.0 * mu * r * l * l + 8.0 * m * theta * theta * std::log(r / delta);
    long long out = static_cast<long long>(std::ceil(d));
    if (out < 1) out = 1;
    if (out > m) out = m;
    return out;
}

__int128 binom_i128(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    const __int128 limit = (__int128(1) << 120);
    __int128 res = 1;
    for (int i = 1; i <= k; ++i) {
        __int128 f = n - k + i;
        if (res > limit / f) throw std::overflow_error("binom_i128 overflow");
        res = res * f / i;
    }
    return res;
}

}  // namespace amc

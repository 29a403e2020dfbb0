#include "amc/generators.hpp"

#include "amc/rng.hpp"

#include <stdexcept>

namespace amc {

namespace {

Mat gaussian_matrix(int m, int n, Rng& rng) {
    Mat a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
    return a;
}

}  // namespace

Mat gen_gaussian_lowrank(int m, int n, int r, uint64_t seed) {
    if (r < 1 || r > std::min(m, n)) throw std::invalid_argument("need 1 <= r <= min(m,n)");
    Rng rng(seed);
    Mat x = gaussian_matrix(m, r, rng);
    Mat y = gaussian_matrix(r, n, rng);
    return x * y;
}

Mat gen_integer_lowrank(int m, int n, int r, int mag, uint64_t seed) {
    if (r < 1 || r > std::min(m, n)) throw std::invalid_argument("need 1 <= r <= min(m,n)");
    if (mag < 1) throw std::invalid_argument("mag must be positive");
    Rng rng(seed);
    Mat x(m, r), y(r, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) x(i, j) = rng.uniform_int(2 * mag + 1) - mag;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) y(i, j) = rng.uniform_int(2 * mag + 1) - mag;
    return x * y;
}

Mat make_column_space_coherent(const Mat& a, int c, uint64_t seed) {
    if (c < 0 || c >= a.rows()) throw std::invalid_argument("need 0 <= c < m");
    if (c == 0) return a;
    Rng rng(seed);
    Mat out = a;
    Indices rows = rng.sample_without_replacement(static_cast<int>(a.rows()), c);
    for (int i : rows)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = rng.gaussian();
    return out;
}

Mat make_row_space_coherent(const Mat& a, int c, uint64_t seed) {
    if (c < 0 || c >= a.cols()) throw std::invalid_argument("need 0 <= c < n");
    if (c == 0) return a;
    Rng rng(seed);
    Mat out = a;
    Indices cols = rng.sample_without_replacement(static_cast<int>(a.cols()), c);
    for (int j : cols)
        for (int i = 0; i < a.rows(); ++i) out(i, j) = rng.gaussian();
    return out;
}

Mat gen_lowrank_with_classes(int m, int n, int r, int coh_cols, int coh_rows, uint64_t seed) {
    if (coh_cols < 0 || coh_rows < 0 || coh_cols + coh_rows > r)
        throw std::invalid_argument("need coh_cols + coh_rows <= r");
    int base = r - coh_cols - coh_rows;
    Rng rng(seed);
    Mat a;
    if (base > 0)
        a = gen_gaussian_lowrank(m, n, base, rng.next());
    else
        a = Mat::Zero(m, n);
    if (coh_cols > 0) a = make_column_space_coherent(a, coh_cols, rng.next());
    if (coh_rows > 0) a = make_row_space_coherent(a, coh_rows, rng.next());
    return a;
}

std::pair<Mat, Indices> inject_sparse_noise_columns(const Mat& a, int count, uint64_t seed) {
    if (count < 0 || count > a.cols()) throw std::invalid_argument("need 0 <= count <= n");
    Rng rng(seed);
    Mat out = a;
    Indices cols = rng.sample_without_replacement(static_cast<int>(a.cols()), count);
    for (int j : cols)
        for (int i = 0; i < a.rows(); ++i) out(i, j) = rng.gaussian();
    std::sort(cols.begin(), cols.end());
    return {out, cols};
}

Mat normalize_columns(const Mat& a) {
    Mat out = a;
    for (int j = 0; j < a.cols(); ++j) {
        double norm = out.col(j).norm();
        if (norm == 0.0) throw std::domain_error("cannot normalize a zero column");
        out.col(j) /= norm;
    }
    return out;
}

Mat inject_bounded_noise(const Mat& a, double eps, uint64_t seed) {
    if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
    Mat out = normalize_columns(a);
    if (eps == 0.0) return out;
    Rng rng(seed);
    for (int j = 0; j < out.cols(); ++j) {
        Vec dir(out.rows());
        for (int i = 0; i < out.rows(); ++i) dir(i) = rng.gaussian();
        double dn = dir.norm();
        if (dn == 0.0) continue;
        double scale = eps * rng.uniform();
        out.col(j) += dir * (scale / dn);
    }
    return out;
}

Mat named_fixture(const std::string& raw) {
    std::string name = raw;
    if (name == "erhc-greedy-gap") name = "cost-gap";
    if (name == "walkthrough") name = "rank1-trace";
    if (name == "A") name = "spiky-a";
    if (name == "B") name = "spiky-b";
    if (name == "spiky-a") {
        Mat a(4, 6);
        a << 1, 2, 2, 2, 2, 2,
             0, 2, 2, 2, 2, 2,
             0, 2, 2, 2, 2, 2,
             0, 2, 2, 2, 2, 2;
        return a;
    }
    if (name == "spiky-b") {
        Mat b(4, 6);
        b << 1, 0, 1, 2, 3, 4,
             0, 1, 2, 3, 4, 5,
             0, 1, 2, 3, 4, 5,
             0, 1, 2, 3, 4, 5;
        return b;
    }
    if (name == "dependence-witness") {
        Mat w(4, 3);
        w << 1, 2, 5,
             1, 2, 4,
             1, 0, 4,
             1, 0, 4;
        return w;
    }
    if (name == "cost-gap") {
        Mat m(4, 4);
        m << 1, 1, 2, 3,
             1, 2, 3, 4,
             1, 3, 4, 5,
             1, 4, 5, 6;
        return m;
    }
    if (name == "cost-equal") {
        Mat m(4, 4);
        m << 1, 1, 2, 2,
             1, 2, 2, 3,
             1, 3, 2, 4,
             1, 4, 2, 5;
        return m;
    }
    if (name == "cost-ratio") {
        Mat m(6, 6);
        double y[6] = {1, 2, 3, 4, 5, 7};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) m(i, j) = 1.0 + (i + 1) * y[j];
        return m;
    }
    if (name == "rank1-trace") {
        Mat m = Mat::Zero(6, 4);
        m.row(2) << 1, 3, 2, 3;
        m.row(5) << 2, 6, 4, 6;
        return m;
    }
    throw std::invalid_argument("unknown fixture: " + name);
}

Mat named_fixture_costs(const std::string& raw, double eps) {
    std::string name = raw;
    if (name == "erhc-greedy-gap") name = "cost-gap";
    if (name == "cost-gap" || name == "cost-equal") {
        Mat chi(4, 4);
        chi << 1, 1, 4, 1,
               1, 5, 3, 4,
               4, 3, 4, 4,
               1, 4, 4, 8;
        return chi;
    }
    if (name == "cost-ratio") {
        if (eps <= 0.0 || eps >= 10.0) throw std::invalid_argument("need 0 < eps < 10");
        double lo = eps / 100.0;
        double hi = 10.0 - eps;
        Mat chi(6, 6);
        chi << lo, lo, lo, lo, hi, hi,
               lo, lo, lo, lo, hi, hi,
               10, 10, lo, lo, lo, lo,
               10, 10, lo, lo, lo, lo,
               lo, lo, 10, 10, hi, hi,
               lo, lo, 10, 10, hi, hi;
        return chi;
    }
    throw std::invalid_argument("no cost matrix for fixture: " + name);
}

}  // namespace amc

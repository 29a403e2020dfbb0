#include "amc/sparsity.hpp"

#include "amc/rational.hpp"
#include "amc/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace amc {

namespace {

bool integer_matrix(const Mat& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            double v = a(i, j);
            if (v != std::floor(v) || std::abs(v) > 1e6) return false;
        }
    return true;
}

// Kernel columns are rays; dividing by the gcd keeps integer growth in check.
void reduce_column(std::vector<Rat>& col) {
    __int128 g = 0;
    for (const auto& e : col) {
        __int128 v = e.num < 0 ? -e.num : e.num;
        while (v != 0) {
            __int128 t = g % v;
            g = v;
            v = t;
        }
    }
    if (g > 1)
        for (auto& e : col) e = Rat(e.num / g, 1);
}

// Branch and bound over row subsets for the max zero count of a nonzero
// span vector. kernel holds the coefficient rays killed by the rows taken
// so far; rows orthogonal to the whole kernel are free zeros. Exact integer
// arithmetic; throws on overflow.
void dfs_exact(const RatMat& b, int i, std::vector<std::vector<Rat>> kernel, int zeros,
               int* best) {
    int m = static_cast<int>(b.size());
    if (zeros + (m - i) <= *best) return;
    if (i == m) {
        if (zeros > *best) *best = zeros;
        return;
    }
    size_t r = b[0].size();
    size_t kdim = kernel.size();
    std::vector<Rat> v(kdim);
    bool all_zero = true;
    for (size_t c = 0; c < kdim; ++c) {
        Rat s(0);
        for (size_t t = 0; t < r; ++t) s = s + b[static_cast<size_t>(i)][t] * kernel[c][t];
        v[c] = s;
        if (!s.is_zero()) all_zero = false;
    }
    if (all_zero) {
        dfs_exact(b, i + 1, std::move(kernel), zeros + 1, best);
        return;
    }
    if (kdim >= 2) {
        size_t p = 0;
        while (v[p].is_zero()) ++p;
        std::vector<std::vector<Rat>> cut;
        cut.reserve(kdim - 1);
        for (size_t c = 0; c < kdim; ++c) {
            if (c == p) continue;
            std::vector<Rat> col(r);
            for (size_t t = 0; t < r; ++t) col[t] = v[p] * kernel[c][t] - v[c] * kernel[p][t];
            reduce_column(col);
            cut.push_back(std::move(col));
        }
        dfs_exact(b, i + 1, std::move(cut), zeros + 1, best);
    }
    dfs_exact(b, i + 1, std::move(kernel), zeros, best);
}

void dfs_float(const Mat& b, int i, const Mat& kernel, int zeros, int* best, double cut) {
    int m = static_cast<int>(b.rows());
    if (zeros + (m - i) <= *best) return;
    if (i == m) {
        if (zeros > *best) *best = zeros;
        return;
    }
    Vec v = kernel.transpose() * b.row(i).transpose();
    if (v.norm() <= cut) {
        dfs_float(b, i + 1, kernel, zeros + 1, best, cut);
        return;
    }
    if (kernel.cols() >= 2) {
        Eigen::HouseholderQR<Mat> qr(v);
        Mat full = qr.householderQ();
        Mat next = kernel * full.rightCols(kernel.cols() - 1);
        dfs_float(b, i + 1, next, zeros + 1, best, cut);
    }
    dfs_float(b, i + 1, kernel, zeros, best, cut);
}

// r independent columns of an integer matrix, chosen greedily left to right.
RatMat integer_column_basis(const Mat& a, int r) {
    int m = static_cast<int>(a.rows());
    RatMat rows(static_cast<size_t>(m));
    std::vector<int> pivots;
    for (int j = 0; j < a.cols() && static_cast<int>(pivots.size()) < r; ++j) {
        RatMat trial(static_cast<size_t>(m),
                     std::vector<Rat>(pivots.size() + 1));
        for (int i = 0; i < m; ++i) {
            for (size_t c = 0; c < pivots.size(); ++c)
                trial[static_cast<size_t>(i)][c] =
                    Rat(static_cast<long long>(a(i, pivots[c])));
            trial[static_cast<size_t>(i)][pivots.size()] =
                Rat(static_cast<long long>(a(i, j)));
        }
        if (rational_rank(trial) == static_cast<int>(pivots.size()) + 1) pivots.push_back(j);
    }
    if (static_cast<int>(pivots.size()) != r)
        throw std::runtime_error("integer_column_basis: rank mismatch");
    for (int i = 0; i < m; ++i) {
        rows[static_cast<size_t>(i)].resize(static_cast<size_t>(r));
        for (int c = 0; c < r; ++c)
            rows[static_cast<size_t>(i)][static_cast<size_t>(c)] =
                Rat(static_cast<long long>(a(i, pivots[c])));
    }
    return rows;
}

// Max zero count over nonzero vectors of span(cols), rank r known.
int max_zero_count(const Mat& span_cols, int r, bool* exact, const Tolerance& tol) {
    int m = static_cast<int>(span_cols.rows());
    if (exact) *exact = true;
    if (m <= kExactNonsparsityCap) {
        if (integer_matrix(span_cols)) {
            try {
                RatMat b = integer_column_basis(span_cols, r);
                std::vector<std::vector<Rat>> kernel(
                    static_cast<size_t>(r), std::vector<Rat>(static_cast<size_t>(r)));
                for (int c = 0; c < r; ++c)
                    kernel[static_cast<size_t>(c)][static_cast<size_t>(c)] = Rat(1);
                int best = r - 1;
                dfs_exact(b, 0, std::move(kernel), 0, &best);
                return best;
            } catch (const std::overflow_error&) {
            }
        }
        Basis q = orthonormalize(span_cols, tol);
        double cut = std::max(tol.threshold * std::sqrt(static_cast<double>(m)) * 100.0, 1e-12);
        Mat kernel = Mat::Identity(q.dim(), q.dim());
        int best = q.dim() - 1;
        dfs_float(q.Q, 0, kernel, 0, &best, cut);
        return best;
    }
    // Sampled lower bound on the max zero count; flagged as non-exact.
    if (exact) *exact = false;
    Basis q = orthonormalize(span_cols, tol);
    int rr = q.dim();
    if (rr == 1) {
        int z = 0;
        for (int i = 0; i < m; ++i)
            if (std::abs(q.Q(i, 0)) <= 1e-7) ++z;
        return std::max(z, 0);
    }
    Rng rng(0x9b97f4a7c15ULL + static_cast<uint64_t>(m) * 131 + static_cast<uint64_t>(rr));
    int best = rr - 1;
    for (int s = 0; s < 4000; ++s) {
        Indices rows = rng.sample_without_replacement(m, rr - 1);
        Mat sub = submatrix_rows(q.Q, rows);
        Eigen::JacobiSVD<Mat> svd(sub, Eigen::ComputeFullV);
        Vec c = svd.matrixV().col(rr - 1);
        Vec u = q.Q * c;
        int z = 0;
        for (int i = 0; i < m; ++i)
            if (std::abs(u(i)) <= 1e-7) ++z;
        if (z > best) best = z;
    }
    return best;
}

}  // namespace

double coherence(const Basis& u) {
    int m = u.ambient();
    int r = u.dim();
    if (r == 0) throw std::invalid_argument("coherence of zero subspace");
    double mx = 0.0;
    for (int j = 0; j < m; ++j) mx = std::max(mx, u.Q.row(j).squaredNorm());
    return (static_cast<double>(m) / r) * mx;
}

int nonsparsity_number_exact(const Basis& u, bool* exact, const Tolerance& tol) {
    if (u.dim() == 0) throw std::invalid_argument("nonsparsity of zero subspace");
    return u.ambient() - max_zero_count(u.Q, u.dim(), exact, tol);
}

int sparsity_number(const Basis& u, bool* exact, const Tolerance& tol) {
    if (u.dim() == 0) throw std::invalid_argument("sparsity of zero subspace");
    return max_zero_count(u.Q, u.dim(), exact, tol);
}

SubspaceProfile column_space_profile(const Mat& a, const Tolerance& tol) {
    SubspaceProfile p;
    p.m = static_cast<int>(a.rows());
    Basis q = orthonormalize(a, tol);
    p.r = q.dim();
    if (p.r == 0) throw std::invalid_argument("profile of zero matrix");
    p.mu = coherence(q);
    bool exact = true;
    p.psi_bar = max_zero_count(a, p.r, &exact, tol);
    p.psi = p.m - p.psi_bar;
    p.exact = exact;
    return p;
}

SubspaceProfile row_space_profile(const Mat& a, const Tolerance& tol) {
    return column_space_profile(a.transpose(), tol);
}

std::vector<std::string> validate_profile(const SubspaceProfile& p) {
    std::vector<std::string> bad;
    double eps = 1e-9;
    double ratio = static_cast<double>(p.m) / p.r;
    if (p.mu < 1.0 - eps) bad.push_back("mu-lower");
    if (p.mu > ratio + eps) bad.push_back("mu-upper");
    if (p.psi_bar < p.r - 1) bad.push_back("sparsity-lower");
    if (p.psi_bar > p.m - 1) bad.push_back("sparsity-upper");
    if (p.psi + p.psi_bar != p.m) bad.push_back("psi-sum");
    if (p.psi > 0 && p.mu < ratio / p.psi - eps) bad.push_back("coherence-sparsity");
    return bad;
}

}  // namespace amc

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace amc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Indices = std::vector<int>;

struct Tolerance {
    double threshold = 1e-9;
    bool exact = false;
};

inline double rank_cutoff(const Tolerance& tol, double sigma_max, int m, int n) {
    return tol.threshold * sigma_max * static_cast<double>(std::max(m, n));
}

// Dense values plus an observed mask. Unobserved slots hold NaN and reading
// one throws; entries can only flip unobserved -> observed.
class PartialMatrix {
public:
    PartialMatrix() : m_(0), n_(0) {}
    PartialMatrix(int m, int n)
        : m_(m), n_(n),
          values_(Mat::Constant(m, n, std::numeric_limits<double>::quiet_NaN())),
          mask_(m, std::vector<char>(n, 0)) {
        if (m < 1 || n < 1) throw std::invalid_argument("PartialMatrix: empty shape");
    }

    int rows() const { return m_; }
    int cols() const { return n_; }

    bool observed(int i, int j) const {
        check(i, j);
        return mask_[i][j] != 0;
    }

    double get(int i, int j) const {
        check(i, j);
        if (!mask_[i][j]) throw std::logic_error("PartialMatrix: read of unobserved entry");
        return values_(i, j);
    }

    void set(int i, int j, double v) {
        check(i, j);
        values_(i, j) = v;
        mask_[i][j] = 1;
    }

    bool column_full(int j) const {
        for (int i = 0; i < m_; ++i)
            if (!mask_[i][j]) return false;
        return true;
    }

    int column_observed_count(int j) const {
        int c = 0;
        for (int i = 0; i < m_; ++i) c += mask_[i][j] ? 1 : 0;
        return c;
    }

    Indices unobserved_rows(int j) const {
        Indices out;
        for (int i = 0; i < m_; ++i)
            if (!mask_[i][j]) out.push_back(i);
        return out;
    }

    Vec column(int j) const {
        Vec v(m_);
        for (int i = 0; i < m_; ++i) v(i) = get(i, j);
        return v;
    }

    Vec column_at(int j, const Indices& rows) const {
        Vec v(static_cast<int>(rows.size()));
        for (size_t t = 0; t < rows.size(); ++t) v(static_cast<int>(t)) = get(rows[t], j);
        return v;
    }

    long long observed_count() const {
        long long c = 0;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) c += mask_[i][j] ? 1 : 0;
        return c;
    }

private:
    void check(int i, int j) const {
        if (i < 0 || i >= m_ || j < 0 || j >= n_)
            throw std::out_of_range("PartialMatrix: index out of range");
    }

    int m_, n_;
    Mat values_;
    std::vector<std::vector<char>> mask_;
};

inline bool valid_index_set(const Indices& s, int bound) {
    std::vector<char> seen(static_cast<size_t>(bound), 0);
    for (int v : s) {
        if (v < 0 || v >= bound) return false;
        if (seen[static_cast<size_t>(v)]) return false;
        seen[static_cast<size_t>(v)] = 1;
    }
    return true;
}

}  // namespace amc

#include "amc/oracle.hpp"

#include "amc/generators.hpp"

#include <cmath>

namespace amc {

Oracle::Oracle(Mat truth, CostModel cost, NoiseSpec noise, uint64_t seed)
    : truth_(std::move(truth)),
      data_(static_cast<int>(truth_.rows()), static_cast<int>(truth_.cols())),
      cost_(std::move(cost)) {
    if (cost_.kind == CostKind::PerColumn && cost_.column_cost.size() != truth_.cols())
        throw std::invalid_argument("column cost length mismatch");
    if (cost_.kind == CostKind::PerEntry &&
        (cost_.entry_cost.rows() != truth_.rows() || cost_.entry_cost.cols() != truth_.cols()))
        throw std::invalid_argument("entry cost shape mismatch");
    switch (noise.kind) {
        case NoiseKind::Clean:
            view_ = truth_;
            break;
        case NoiseKind::SparseColumns: {
            auto [noisy, cols] = inject_sparse_noise_columns(truth_, noise.sparse_count, seed);
            view_ = std::move(noisy);
            noisy_cols_ = std::move(cols);
            break;
        }
        case NoiseKind::Bounded:
            truth_ = normalize_columns(truth_);
            view_ = inject_bounded_noise(truth_, noise.bounded_eps, seed);
            break;
    }
    integer_valued_ = true;
    for (int i = 0; i < view_.rows() && integer_valued_; ++i)
        for (int j = 0; j < view_.cols(); ++j) {
            double v = view_(i, j);
            if (v != std::floor(v) || std::abs(v) > 1e6) {
                integer_valued_ = false;
                break;
            }
        }
    stats_.phase_counts.push_back(0);
}

double Oracle::observe(int i, int j) {
    if (!data_.observed(i, j)) {
        data_.set(i, j, view_(i, j));
        stats_.count += 1;
        stats_.cost += cost_.cost_of(i, j);
        stats_.phase_counts.back() += 1;
    }
    return data_.get(i, j);
}

Vec Oracle::observe_column(int j) {
    Vec out(rows());
    for (int i = 0; i < rows(); ++i) out(i) = observe(i, j);
    return out;
}

Vec Oracle::observe_row(int i) {
    Vec out(cols());
    for (int j = 0; j < cols(); ++j) out(j) = observe(i, j);
    return out;
}

int Oracle::draw_unobserved_uniform(int j, Rng& rng) const {
    Indices open = data_.unobserved_rows(j);
    if (open.empty()) return -1;
    return open[static_cast<size_t>(rng.uniform_int(static_cast<int>(open.size())))];
}

void Oracle::begin_phase() { stats_.phase_counts.push_back(0); }

}  // namespace amc
